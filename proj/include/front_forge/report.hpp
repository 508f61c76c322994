#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace front_forge {

/// @brief One named verification check.
struct Check {
    std::string name;
    std::string anchor;               // the property of the construction being exercised
    std::vector<double> measured;     // first entry is the quantity compared against tolerance
    double tolerance = 0.0;
    std::string comparator = "<=";    // how measured[0] relates to tolerance when passing
    bool pass = false;
    long long samples = 0;
    bool informational = false;       // reported, never counted as a failure
    std::string note;
};

/// Builds a check from a comparison; comparator is one of "<=", ">=", "<", ">".
Check make_check(std::string name, std::string anchor, double measured, std::string comparator, double tolerance,
                 long long samples = 0);

/**
 * @brief Named checks, frozen empirical constants and provenance for one run.
 *
 * Serialization is deterministic: keys are sorted and floats are written with round-trip precision.
 */
struct VerificationReport {
    std::string instance;
    std::vector<Check> checks;
    std::map<std::string, double> constants;
    nlohmann::json provenance = nlohmann::json::object();

    void add(Check c) { checks.push_back(std::move(c)); }
    void add(const std::vector<Check>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }
    /// True when every non-informational check passed.
    bool all_pass() const;
    int failures() const;

    nlohmann::json to_json() const;
    static VerificationReport from_json(const nlohmann::json& j);
};

void write_report(const VerificationReport& r, const std::string& path);
VerificationReport read_report(const std::string& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

struct ReportDiff {
    std::vector<std::string> flipped;  // present in both with a different pass value
    std::vector<std::string> only_a, only_b;
    bool any_flip() const { return !flipped.empty(); }
};

/// Checks are matched by name; repeated names are disambiguated by occurrence order.
ReportDiff diff_reports(const VerificationReport& a, const VerificationReport& b);

/**
 * @brief Writes manifest.json listing files with their SHA-256 and a digest over the listing.
 *
 * The "created" timestamp is the only non-reproducible field and is excluded from the digest.
 */
void write_manifest(const std::string& dir, const std::vector<std::string>& files, const std::string& command);

}  // namespace front_forge
