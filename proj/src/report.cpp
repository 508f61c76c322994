#include "front_forge/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace front_forge {

namespace {

bool compare(double m, const std::string& op, double tol) {
    if (op == "<=") return m <= tol;
    if (op == ">=") return m >= tol;
    if (op == "<") return m < tol;
    if (op == ">") return m > tol;
    throw std::invalid_argument("report: unknown comparator " + op);
}

// JSON has no NaN/inf; those become strings so the file stays parseable.
nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double parse_number(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::runtime_error("report: bad number " + s);
}

}  // namespace

Check make_check(std::string name, std::string anchor, double measured, std::string comparator, double tolerance,
                 long long samples) {
    Check c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.measured = {measured};
    c.tolerance = tolerance;
    c.pass = compare(measured, comparator, tolerance);
    c.comparator = std::move(comparator);
    c.samples = samples;
    return c;
}

bool VerificationReport::all_pass() const { return failures() == 0; }

int VerificationReport::failures() const {
    int k = 0;
    for (const auto& c : checks)
        if (!c.informational && !c.pass) ++k;
    return k;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json m = nlohmann::json::array();
        for (double v : c.measured) m.push_back(number(v));
        nlohmann::json jc = {{"name", c.name},       {"anchor", c.anchor},
                             {"measured", m},        {"tolerance", number(c.tolerance)},
                             {"comparator", c.comparator}, {"pass", c.pass},
                             {"samples", c.samples}, {"informational", c.informational}};
        if (!c.note.empty()) jc["note"] = c.note;
        cs.push_back(std::move(jc));
    }
    nlohmann::json consts = nlohmann::json::object();
    for (const auto& [k, v] : constants) consts[k] = number(v);
    return {{"schema", "ff-report-v1"},
            {"instance", instance},
            {"checks", cs},
            {"constants", consts},
            {"provenance", provenance},
            {"summary", {{"checks", checks.size()}, {"failures", failures()}, {"pass", all_pass()}}}};
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
    if (j.value("schema", "") != "ff-report-v1") throw std::runtime_error("report: unknown schema");
    VerificationReport r;
    r.instance = j.value("instance", "");
    for (const auto& jc : j.at("checks")) {
        Check c;
        c.name = jc.at("name").get<std::string>();
        c.anchor = jc.value("anchor", "");
        for (const auto& m : jc.at("measured")) c.measured.push_back(parse_number(m));
        c.tolerance = parse_number(jc.at("tolerance"));
        c.comparator = jc.value("comparator", "<=");
        c.pass = jc.at("pass").get<bool>();
        c.samples = jc.value("samples", 0LL);
        c.informational = jc.value("informational", false);
        c.note = jc.value("note", "");
        r.checks.push_back(std::move(c));
    }
    if (j.contains("constants"))
        for (const auto& [k, v] : j.at("constants").items()) r.constants[k] = parse_number(v);
    r.provenance = j.value("provenance", nlohmann::json::object());
    return r;
}

void write_report(const VerificationReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write " + path);
    out << r.to_json().dump(2) << '\n';
}

VerificationReport read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("report: cannot read " + path);
    return VerificationReport::from_json(nlohmann::json::parse(in));
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("report: sha256 failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("report: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

ReportDiff diff_reports(const VerificationReport& a, const VerificationReport& b) {
    auto keyed = [](const VerificationReport& r) {
        std::map<std::string, bool> m;
        std::map<std::string, int> seen;
        for (const auto& c : r.checks) {
            const int k = seen[c.name]++;
            m[k == 0 ? c.name : c.name + "#" + std::to_string(k)] = c.pass;
        }
        return m;
    };
    const auto ka = keyed(a), kb = keyed(b);
    ReportDiff d;
    for (const auto& [name, pass] : ka) {
        auto it = kb.find(name);
        if (it == kb.end()) d.only_a.push_back(name);
        else if (it->second != pass) d.flipped.push_back(name);
    }
    for (const auto& [name, pass] : kb)
        if (!ka.count(name)) d.only_b.push_back(name);
    return d;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& files, const std::string& command) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& f : files) {
        const auto full = std::filesystem::path(dir) / f;
        entries.push_back({{"path", f},
                           {"bytes", std::filesystem::file_size(full)},
                           {"sha256", sha256_file(full.string())}});
    }
    nlohmann::json body = {{"command", command}, {"files", entries}, {"version", FF_VERSION}};
    const auto digest = sha256_hex(body.dump());
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    body["digest"] = digest;
    body["created"] = stamp.str();
    std::ofstream out(std::filesystem::path(dir) / "manifest.json");
    if (!out) throw std::runtime_error("report: cannot write manifest in " + dir);
    out << body.dump(2) << '\n';
}

}  // namespace front_forge
