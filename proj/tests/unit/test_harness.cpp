#include "front_forge/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace front_forge;

namespace {
const double kPi = std::acos(-1.0);

const Instance& pair() {
    static const Instance inst = make_instance(make_cubic(0.25), 2, {{{1.0}, kPi / 4, 0.0}, {{-1.0}, kPi / 4, 0.0}});
    return inst;
}

const Check& find(const std::vector<Check>& cs, const std::string& name) {
    for (const auto& c : cs)
        if (c.name == name) return c;
    FAIL("missing check " << name);
    return cs.front();
}
}  // namespace

TEST_CASE("sampler streams are reproducible") {
    Sampler a(42), b(42), c(43);
    for (int k = 0; k < 10; ++k) {
        const double x = a.uniform(-1.0, 1.0);
        CHECK(x == b.uniform(-1.0, 1.0));
        CHECK(x >= -1.0);
        CHECK(x < 1.0);
    }
    CHECK(a.uniform(0, 1) != c.uniform(0, 1));
}

TEST_CASE("probe residual vanishes on the planar front") {
    const Instance& inst = pair();
    const LowerBarrier one(make_arrangement(2, {{{1.0}, 0.7, 0.0}}, inst.prof.c_f), inst.prof);
    const ClippedField u = [&](double t, std::span<const double> pos) { return std::pair{one(t, pos), false}; };
    for (double y : {-2.0, 0.0, 1.5}) {
        const double pos[2] = {0.3, y};
        const auto r = probe_residual(inst.spec, u, 0.4, pos, 0x1.0p-6);
        REQUIRE(r.has_value());
        CHECK(std::abs(*r) < 1e-8);
    }
    const ClippedField clipped = [](double, std::span<const double>) { return std::pair{0.0, true}; };
    const double pos[2] = {0.0, 0.0};
    CHECK_FALSE(probe_residual(inst.spec, clipped, 0.0, pos, 0x1.0p-6).has_value());
}

TEST_CASE("calibration") {
    const Calibration single =
        calibrate_constant(make_arrangement(2, {{{1.0}, kPi / 2, 0.0}}, pair().prof.c_f), 100, 1);
    CHECK(single.C_raw == 1.0);
    CHECK(single.C_emp == 2.0);
    const Calibration c = calibrate_constant(pair().arr, 500, 1);
    CHECK(c.C_raw > 1.0);
    CHECK(c.C_emp == doctest::Approx(2.0 * c.C_raw));
    CHECK(c.sign_violations == 0);
    CHECK(calibrate_constant(pair().arr, 500, 1).C_raw == c.C_raw);
}

TEST_CASE("surface identities on the pair") {
    SurfaceCheckOptions o;
    o.samples = 500;
    for (const auto& c : surface_check(pair().arr, o, 5)) {
        INFO(c.name << " " << c.measured[0]);
        CHECK(c.pass);
    }
}

TEST_CASE("barrier residuals on the pair") {
    const Instance& inst = pair();
    const Calibration cal = calibrate_constant(inst.arr, 500, 1);
    const BoundParams p = admissible_params(inst.spec, inst.prof, inst.pc, inst.arr, cal.C_emp);
    ResidualOptions o;
    o.samples = 400;
    o.canary_multiples = {};
    o.scan_multiples = {};
    const auto checks = verify_supersolution(inst, p, o, 3);
    CHECK(find(checks, "super.u_bar.min_residual").pass);
    CHECK(find(checks, "super.lower_below_upper").pass);
    CHECK(find(checks, "super.u_sub.max_residual[0]").pass);
    CHECK(find(checks, "super.u_sub.max_residual[1]").pass);
}

TEST_CASE("coarse construction keeps its structure") {
    const Instance& inst = pair();
    const BoundParams p = admissible_params(inst.spec, inst.prof, inst.pc, inst.arr, 40.0);
    GridSpec g;
    g.dims = {40, 40};
    g.dx = 0.5;
    g.lo = {-9.75, -5.0};
    ConstructOptions o;
    o.start_times = {-1.0, -2.0};
    o.planar_lag_probe = false;
    const EntireRun run = construct_entire(inst, p, g, SolverConfig{}, o);
    CHECK(run.finals.size() == 2);
    CHECK(run.U.time == 0.0);
    CHECK(run.U_prev.time == doctest::Approx(-o.dt_probe));
    CHECK(run.beta >= 0.0);
    CHECK(run.beta <= 1.0);
    o.start_times = {-2.0, -1.0};
    CHECK_THROWS_AS(construct_entire(inst, p, g, SolverConfig{}, o), std::invalid_argument);
}
