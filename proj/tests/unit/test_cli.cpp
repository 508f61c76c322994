#include "front_forge/cli.hpp"
#include "front_forge/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace front_forge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {
struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "front-forge");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("ff_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_json(const fs::path& p, const json& j) {
    std::ofstream(p) << j.dump();
    return p;
}

const json kSingleFront = {
    {"arrangement", {{"preset", "custom"}, {"fronts", {{{"nu", {1.0}}, {"theta", 1.5707963267948966}, {"tau", 0.0}}}}}},
    {"experiment", {{"residual", {{"samples", 500}}}}},
    {"surface", {{"calibration_samples", 200}}}};
}  // namespace

TEST_CASE("profile header carries the speed") {
    const fs::path d = scratch("profile");
    const Result r = run({"profile", "--theta", "0.25", "--out", d.string()});
    REQUIRE(r.code == kExitOk);
    const json header = json::parse(slurp(d / "profile.json"));
    CHECK(std::abs(header["c_f"].get<double>() - 0.3535534) <= 1e-6);
    CHECK(header["oracle"]["logistic_sup_error"].get<double>() <= 1e-5);
    CHECK(fs::exists(d / "profile.bin"));
    CHECK(fs::exists(d / "resolved-config.json"));
    const json manifest = json::parse(slurp(d / "manifest.json"));
    CHECK(manifest["files"].size() == 3);
    CHECK(json::parse(r.out)["c_f"] == header["c_f"]);
}

TEST_CASE("verify super on a single front is exact") {
    const fs::path d = scratch("super1");
    const fs::path cfg = write_json(d / "cfg.json", kSingleFront);
    const Result r = run({"verify", "--config", cfg.string(), "--suite", "super", "--out", (d / "a").string()});
    CHECK(r.code == kExitOk);
    const VerificationReport rep = read_report((d / "a" / "report.json").string());
    bool found = false;
    for (const auto& c : rep.checks) {
        if (c.name != "super.planar_exact") continue;
        found = true;
        CHECK(c.pass);
        CHECK(c.measured[0] <= 1e-9);
    }
    CHECK(found);

    SUBCASE("same config and seed give byte-identical reports") {
        REQUIRE(run({"verify", "--config", cfg.string(), "--suite", "super", "--out", (d / "b").string()}).code == 0);
        CHECK(slurp(d / "a" / "report.json") == slurp(d / "b" / "report.json"));
        CHECK(run({"report-diff", (d / "a" / "report.json").string(), (d / "b" / "report.json").string()}).code == 0);
    }
}

TEST_CASE("report-diff exits nonzero on a flip") {
    const fs::path d = scratch("diff");
    VerificationReport a;
    a.add(make_check("x", "", 1.0, "<=", 2.0));
    VerificationReport b = a;
    b.checks[0].pass = false;
    write_report(a, (d / "a.json").string());
    write_report(b, (d / "b.json").string());
    CHECK(run({"report-diff", (d / "a.json").string(), (d / "a.json").string()}).code == kExitOk);
    const Result r = run({"report-diff", (d / "a.json").string(), (d / "b.json").string(), "--out", (d / "o").string()});
    CHECK(r.code == kExitChecksFailed);
    CHECK(r.out.find("flipped x") != std::string::npos);
    CHECK(fs::exists(d / "o" / "diff.json"));
}

TEST_CASE("config errors exit 2 with the key path") {
    const fs::path d = scratch("badcfg");
    const fs::path cfg = write_json(d / "cfg.json", {{"grid", {{"foo", 1}}}});
    const Result r = run({"simulate", "--config", cfg.string(), "--out", d.string()});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("/grid/foo") != std::string::npos);
    CHECK(run({"verify", "--suite", "nope"}).code == kExitConfig);
    CHECK(run({"simulate", "--config", (d / "missing.json").string()}).code == kExitConfig);
    CHECK(run({}).code == kExitConfig);
}

TEST_CASE("numerical failure exits 3 with a snapshot") {
    const fs::path d = scratch("blowup");
    // A shooting horizon this short leaves every trajectory undecided.
    const json bad = {{"profile", {{"horizon", 0.01}}}};
    const Result r = run({"simulate", "--config", write_json(d / "cfg.json", bad).string(), "--out", d.string()});
    CHECK(r.code == kExitNumerical);
    const auto at = r.err.find("snapshot: ");
    REQUIRE(at != std::string::npos);
    std::string path = r.err.substr(at + 10);
    path.erase(path.find_last_not_of('\n') + 1);
    CHECK(fs::exists(path));
}

TEST_CASE("simulate writes fields, report and manifest") {
    const fs::path d = scratch("simulate");
    const json small = {{"grid", {{"dims", {48, 48}}, {"dx", 0.4}}},
                        {"experiment", {{"construct", {{"start_times", {-1.0, -2.0}}, {"planar_lag_probe", false}}}}},
                        {"surface", {{"calibration_samples", 200}}}};
    const Result r = run({"simulate", "--config", write_json(d / "cfg.json", small).string(), "--out", d.string(),
                          "--threads", "1"});
    CHECK((r.code == kExitOk || r.code == kExitChecksFailed));
    CHECK(fs::exists(d / "U.ffg"));
    CHECK(fs::exists(d / "u_start_-2.ffg"));
    CHECK(fs::exists(d / "report.json"));
    const json manifest = json::parse(slurp(d / "manifest.json"));
    CHECK(manifest["files"].size() == 6);
}
