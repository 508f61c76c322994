#include "front_forge/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace front_forge;

namespace {
const double kPi = std::acos(-1.0);

FrontArrangement triple(double c) {
    return make_arrangement(2, {{{1.0}, kPi / 4, 0.0}, {{-1.0}, kPi / 4, 0.0}, {{1.0}, kPi / 2, 0.0}}, c);
}
}  // namespace

TEST_CASE("arrangement validation") {
    CHECK_THROWS_AS(make_arrangement(1, {{{}, 1.0, 0.0}}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_arrangement(2, {}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_arrangement(2, {{{0.5}, 1.0, 0.0}}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_arrangement(2, {{{1.0}, 0.0, 0.0}}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_arrangement(2, {{{1.0}, 2.0, 0.0}}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_arrangement(3, {{{1.0}, 1.0, 0.0}}, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(make_arrangement(2, {{{1.0}, 1.0, 0.0}, {{1.0}, 1.0, 2.0}}, 0.3), std::invalid_argument);
    CHECK_NOTHROW(make_arrangement(2, {{{1.0}, kPi / 2, 0.0}}, 0.3));
}

TEST_CASE("plane coordinates") {
    const double c = 0.35, a = 0.6;
    const FrontArrangement arr = make_arrangement(2, {{{1.0}, a, 0.5}, {{-1.0}, a, -0.25}}, c);
    const double x[1] = {1.7};
    const double y = -0.4, t = 2.0;
    CHECK(signed_plane_coord(arr, 0, t, x, y) == doctest::Approx(1.7 * std::cos(a) + y * std::sin(a) - c * t + 0.5));
    CHECK(signed_plane_coord(arr, 1, t, x, y, 2.0) ==
          doctest::Approx(-1.7 * std::cos(a) + y * std::sin(a) - c * t - 0.5));
    const auto [q, i] = min_plane_coord(arr, t, x, y);
    CHECK(i == 1);
    CHECK(q == doctest::Approx(signed_plane_coord(arr, 1, t, x, y)));
    const double x0[1] = {0.0};
    CHECK(min_plane_coord(symmetric_pair(a, c), 0.0, x0, 1.0).second == 0);
}

TEST_CASE("directions and tau replacement") {
    const FrontArrangement arr = symmetric_pair(kPi / 3, 0.2);
    const auto e0 = arr.direction(0), e1 = arr.direction(1);
    CHECK(e0[0] == doctest::Approx(0.5));
    CHECK(e1[0] == doctest::Approx(-0.5));
    CHECK(e0[1] == doctest::Approx(std::sqrt(3.0) / 2));
    const FrontArrangement shifted = arr.with_tau({1.0, -2.0});
    CHECK(shifted.front(1).tau == -2.0);
    CHECK_THROWS(arr.with_tau({1.0}));
}

TEST_CASE("arrangement from raw directions") {
    const double a = 0.7;
    const FrontArrangement arr = arrangement_from_raw({{std::cos(a), std::sin(a)}, {-std::cos(a), std::sin(a)}},
                                                      {0.0, 1.0}, {0.0, 0.0}, 0.3);
    CHECK(arr.front(0).theta == doctest::Approx(a));
    CHECK(arr.front(1).theta == doctest::Approx(a));
    CHECK(arr.front(0).nu[0] * arr.front(1).nu[0] == doctest::Approx(-1.0));
    // A tilted reference axis keeps the angle between directions.
    const FrontArrangement tilted =
        arrangement_from_raw({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}, {1.0, 1.0, 1.0}, {0, 0, 0}, 0.3);
    for (int i = 0; i < 3; ++i) CHECK(tilted.front(i).theta == doctest::Approx(std::asin(1.0 / std::sqrt(3.0))));
    const auto d0 = tilted.direction(0), d1 = tilted.direction(1);
    CHECK(d0[0] * d1[0] + d0[1] * d1[1] + d0[2] * d1[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(arrangement_from_raw({{0.0, -1.0}}, {0.0, 1.0}, {0.0}, 0.3), std::invalid_argument);
}

TEST_CASE("ridge distance proxy for the symmetric pair") {
    const double a = kPi / 4, c = 0.35;
    const FrontArrangement arr = symmetric_pair(a, c);
    const double x[1] = {0.0};
    CHECK(ridge_distance_proxy(arr, 0.0, x, 0.0) == doctest::Approx(0.0));
    const double s = std::sin(a), y = 3.0;
    CHECK(ridge_distance_proxy(arr, 0.0, x, y) == doctest::Approx(y * s / std::sqrt(s * s + c * c)));
    CHECK_THROWS(ridge_distance_proxy(make_arrangement(2, {{{1.0}, a, 0.0}}, c), 0.0, x, 0.0));
}

TEST_CASE("rotation weights satisfy their inequalities") {
    const double c = 0.35;
    std::vector<Front> pyr;
    for (int k = 0; k < 2; ++k)
        for (double s : {1.0, -1.0}) {
            std::vector<double> nu(2, 0.0);
            nu[k] = s;
            pyr.push_back({nu, kPi / 4, 0.0});
        }
    for (const auto& arr : {symmetric_pair(kPi / 4, c), triple(c), make_arrangement(3, pyr, c)}) {
        for (int i = 0; i < arr.n(); ++i) {
            const RotatedFamily fam = choose_rotation_weights(arr, i);
            const auto [s1, s2] = rotation_slack(arr, fam);
            CHECK(s1 > 0.0);
            CHECK(s2 > 0.0);
            const double x[2] = {0.3, -0.2};
            for (int j = 0; j < arr.n(); ++j) {
                if (j == i) continue;
                const double expect = -fam.gamma[j] * signed_plane_coord(arr, i, 0.5, x, 0.1) +
                                      fam.lambda[j] * signed_plane_coord(arr, j, 0.5, x, 0.1);
                CHECK(rotated_coord(arr, fam, j, 0.5, x, 0.1) == doctest::Approx(expect));
            }
        }
    }
    CHECK_THROWS_AS(choose_rotation_weights(symmetric_pair(kPi / 4, c), 2), std::out_of_range);
}
