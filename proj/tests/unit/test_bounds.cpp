#include "front_forge/bounds.hpp"
#include "front_forge/profile.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace front_forge;

namespace {
const double kPi = std::acos(-1.0);

struct Setup {
    ReactionSpec spec = make_cubic(0.25);
    FrontProfile prof = solve_profile(spec);
    ProfileConstants pc = profile_constants(prof, spec);
};

const Setup& setup() {
    static const Setup s;
    return s;
}
}  // namespace

TEST_CASE("admissible parameters") {
    const Setup& s = setup();
    const FrontArrangement arr = symmetric_pair(kPi / 4, s.prof.c_f);
    const BoundParams p = admissible_params(s.spec, s.prof, s.pc, arr, 40.0);
    CHECK(p.admissible);
    CHECK(p.epsilon == doctest::Approx(0.5 * p.epsilon0));
    CHECK(p.epsilon0 <= s.spec.sigma / 4.0);
    CHECK(p.epsilon0 <= s.pc.k_min / (2.0 * 40.0 * s.spec.L) * (1 + 1e-12));
    CHECK(p.alpha == doctest::Approx(0.5 * p.alpha_of_eps(p.epsilon)));
    CHECK(p.alpha > 0.0);
    CHECK(p.delta == s.spec.sigma);
    CHECK(p.omega == doctest::Approx((p.mu + p.L) / (p.mu * p.k_shift)));
    CHECK(p.k_shift == doctest::Approx(shift_rate_bound(s.prof, p.delta)));

    CHECK_THROWS_AS(admissible_params(s.spec, s.prof, s.pc, arr, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(admissible_params(s.spec, s.prof, s.pc, arr, 40.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(admissible_params(s.spec, s.prof, s.pc, arr, 40.0, 0.5, 2.0 * s.spec.sigma),
                    std::invalid_argument);

    const BoundParams big = with_epsilon(p, 2.0 * p.epsilon0);
    CHECK_FALSE(big.admissible);
    CHECK_THROWS(UpperBarrier(arr, s.prof, big));
    CHECK_NOTHROW(UpperBarrier(arr, s.prof, big, true));
}

TEST_CASE("lower barrier is the max of planar fronts") {
    const Setup& s = setup();
    const FrontArrangement arr = symmetric_pair(kPi / 4, s.prof.c_f);
    const LowerBarrier low(arr, s.prof);
    for (double x0 : {-3.0, 0.0, 2.0}) {
        const double pos[2] = {x0, 0.5};
        const double q0 = signed_plane_coord(arr, 0, 1.0, std::span<const double>(pos, 1), 0.5);
        const double q1 = signed_plane_coord(arr, 1, 1.0, std::span<const double>(pos, 1), 0.5);
        CHECK(low(1.0, pos) == doctest::Approx(std::max(eval_g(s.prof, q0), eval_g(s.prof, q1))));
    }
}

TEST_CASE("ordering of the barriers") {
    const Setup& s = setup();
    const FrontArrangement arr = symmetric_pair(kPi / 4, s.prof.c_f);
    const BoundParams p = admissible_params(s.spec, s.prof, s.pc, arr, 40.0);
    const LowerBarrier low(arr, s.prof);
    const UpperBarrier up(arr, s.prof, p);
    for (int i = 0; i < 2; ++i) {
        const FacetSubsolution sub(arr, s.prof, p, i);
        CHECK(sub.facet() == i);
        for (double x0 : {-20.0, -2.0, 0.0, 3.0, 15.0})
            for (double y0 : {-10.0, -1.0, 0.0, 2.0, 8.0}) {
                const double pos[2] = {x0, y0};
                CHECK(sub(0.0, pos) <= up(0.0, pos) + 1e-12);
                CHECK(low(0.0, pos) <= up(0.0, pos) + 1e-12);
                CHECK(up(0.0, pos) <= 1.0);
                CHECK(sub(0.0, pos) >= 0.0);
            }
    }
}

TEST_CASE("single front barriers collapse to the planar solution") {
    const Setup& s = setup();
    const FrontArrangement arr = make_arrangement(2, {{{1.0}, kPi / 2, 0.0}}, s.prof.c_f);
    const BoundParams p = admissible_params(s.spec, s.prof, s.pc, arr, 1.0);
    const UpperBarrier up(arr, s.prof, p);
    const LowerBarrier low(arr, s.prof);
    for (double y0 : {-4.0, 0.0, 0.7, 5.0}) {
        const double pos[2] = {0.0, y0};
        CHECK(up(0.5, pos) == doctest::Approx(low(0.5, pos)).epsilon(1e-9));
    }
}

TEST_CASE("shifted barrier time shift and offset") {
    const SpaceTimeField base = [](double t, std::span<const double>) { return 0.5 + 0.01 * t; };
    const ShiftedBarrier plus(base, 10.0, 0.01, 0.0625, ShiftSign::Plus);
    const ShiftedBarrier minus(base, 10.0, 0.01, 0.0625, ShiftSign::Minus);
    CHECK(plus.time_shift(0.0) == 0.0);
    CHECK(plus.offset(0.0) == doctest::Approx(0.01));
    CHECK(plus.time_shift(1e4) == doctest::Approx(10.0 * 0.01));
    CHECK(plus.offset(1e4) == doctest::Approx(0.0));
    const double pos[2] = {0.0, 0.0};
    CHECK(plus(0.0, pos) == doctest::Approx(0.51));
    CHECK(minus(0.0, pos) == doctest::Approx(0.49));
    CHECK(plus(2.0, pos) > minus(2.0, pos));
}
