#include "front_forge/config.hpp"
#include "front_forge/errors.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace front_forge;
using nlohmann::json;

namespace {
std::string error_path(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.key_path();
    }
    return "<none>";
}
}  // namespace

TEST_CASE("defaults resolve to a complete pair config") {
    const RunConfig c = parse_config(json::object());
    CHECK(c.arrangement.fronts.size() == 2);
    CHECK(c.arrangement.fronts[0].nu == std::vector<double>{1.0});
    CHECK(c.grid.dims == std::vector<int>{512, 512});
    REQUIRE(c.grid.lo.size() == 2);
    CHECK(c.grid.lo[0] == doctest::Approx(-0.5 * 0.1 * 511));
    CHECK(c.grid.lo[1] == doctest::Approx(-0.3 * 0.1 * 511));
    CHECK(std::find(c.experiment.suites.begin(), c.experiment.suites.end(), "pyramid") == c.experiment.suites.end());
    CHECK(std::find(c.experiment.suites.begin(), c.experiment.suites.end(), "vfront") != c.experiment.suites.end());
}

TEST_CASE("resolved config is a fixed point") {
    const json first = to_json(parse_config({{"arrangement", {{"preset", "pyramid"}, {"N", 3}}}, {"seed", 9}}));
    const json second = to_json(parse_config(first));
    CHECK(first == second);
    CHECK(first["arrangement"]["fronts"].size() == 4);
    CHECK(first["grid"]["dims"] == json::array({128, 128, 128}));
    CHECK(first["seed"] == 9);
}

TEST_CASE("schema violations name the offending key") {
    CHECK(error_path({{"grid", {{"foo", 1}}}}) == "/grid/foo");
    CHECK(error_path({{"bogus", 1}}) == "/bogus");
    CHECK(error_path({{"grid", {{"dx", "small"}}}}) == "/grid/dx");
    CHECK(error_path({{"surface", {{"samples", 1.5}}}}) == "/surface/samples");
    CHECK(error_path({{"reaction", {{"theta", 0.7}}}}) == "/reaction/theta");
    CHECK(error_path({{"grid", {{"dims", {64, 64, 64}}}}}) == "/grid/dims");
    CHECK(error_path({{"experiment", {{"suites", {"super", "nope"}}}}}) == "/experiment/suites/1");
    CHECK(error_path({{"experiment", {{"suites", {"pyramid"}}}}}) == "/experiment/suites/0");
    CHECK(error_path({{"experiment", {{"construct", {{"start_times", {-5, -3}}}}}}}) ==
          "/experiment/construct/start_times");
    CHECK(error_path({{"arrangement", {{"preset", "custom"}}}}) == "/arrangement/fronts");
    CHECK(error_path({{"arrangement", {{"preset", "custom"}, {"fronts", {{{"nu", {1, 0}}, {"theta", 1.0}, {"tau", 0}}}}}}}) ==
          "/arrangement/fronts/0/nu");
    CHECK(error_path({{"arrangement", {{"fronts", {{{"nu", {1}}, {"theta", 1.0}, {"tau", 0}}}}}}}) ==
          "/arrangement/fronts");
    CHECK(error_path(json::array()) == "");
}

TEST_CASE("custom single front") {
    const RunConfig c = parse_config(
        {{"arrangement", {{"preset", "custom"}, {"fronts", {{{"nu", {1.0}}, {"theta", 1.5707963267948966}, {"tau", 0.0}}}}}}});
    CHECK(c.arrangement.fronts.size() == 1);
    CHECK(std::find(c.experiment.suites.begin(), c.experiment.suites.end(), "asym") == c.experiment.suites.end());
    CHECK(c.reaction_spec().theta == 0.25);
    CHECK(c.solver_config().scheme == Scheme::ExplicitEuler);
    CHECK(c.grid_spec().dims == c.grid.dims);
}

TEST_CASE("integral floats are accepted for integer fields") {
    CHECK(parse_config({{"surface", {{"samples", 100.0}}}}).surface.check.samples == 100);
}
