#include "front_forge/surface.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace front_forge;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("single front: phi is the plane itself") {
    const FrontArrangement one = make_arrangement(2, {{{1.0}, 0.9, 0.3}}, 0.35);
    const ImplicitSurface s = ImplicitSurface::phi(one, 1.0);
    for (double x0 : {-3.0, 0.0, 2.5}) {
        const double x[1] = {x0};
        CHECK(s.solve_height(1.5, x) == doctest::Approx(s.plane_height(0, 1.5, x)).epsilon(1e-14));
        const SurfaceDerivs d = s.derivatives(1.5, x);
        CHECK(d.dt == doctest::Approx(0.35 / std::sin(0.9)));
        CHECK(d.grad[0] == doctest::Approx(-1.0 / std::tan(0.9)));
        CHECK(d.hess_at(0, 0) == doctest::Approx(0.0));
        CHECK(d.flatness == 0.0);
    }
}

TEST_CASE("symmetric pair: closed-form surface") {
    // e^{-(x cos a + y sin a - ct)} + e^{-(-x cos a + y sin a - ct)} = 1
    // gives y sin a = ct + log(2 cosh(x cos a)).
    const double a = kPi / 4, c = 0.35;
    const ImplicitSurface s = ImplicitSurface::phi(symmetric_pair(a, c), 1.0);
    for (double x0 : {-5.0, -0.3, 0.0, 1.0, 7.0}) {
        const double x[1] = {x0}, t = -0.7;
        const double expect = (c * t + std::log(2.0 * std::cosh(x0 * std::cos(a)))) / std::sin(a);
        CHECK(s.solve_height(t, x) == doctest::Approx(expect).epsilon(1e-13));
        const SurfaceDerivs d = s.derivatives(t, x);
        CHECK(d.residual <= 1e-12);
        CHECK(d.grad[0] == doctest::Approx(std::cos(a) * std::tanh(x0 * std::cos(a)) / std::sin(a)));
        const double sech = 1.0 / std::cosh(x0 * std::cos(a));
        CHECK(d.hess_at(0, 0) == doctest::Approx(std::cos(a) * std::cos(a) * sech * sech / std::sin(a)));
        CHECK(s.solve_height(t, x) >= s.envelope(t, x));
    }
}

TEST_CASE("alpha scaling is a change of variables") {
    const double a = 0.8, c = 0.3;
    const FrontArrangement arr = make_arrangement(2, {{{1.0}, a, 1.0}, {{-1.0}, a, -0.5}}, c);
    const ImplicitSurface s1 = ImplicitSurface::phi(arr, 1.0), s2 = ImplicitSurface::phi(arr, 0.25);
    const double x[1] = {0.4};
    // shifts enter as alpha tau
    const FrontArrangement scaled = arr.with_tau({0.25, -0.125});
    CHECK(s2.solve_height(0.2, x) ==
          doctest::Approx(ImplicitSurface::phi(scaled, 1.0).solve_height(0.2, x)).epsilon(1e-13));
    CHECK(s1.terms() == 2);
}

TEST_CASE("psi surfaces solve their level set") {
    const double c = 0.35;
    const FrontArrangement arr =
        make_arrangement(2, {{{1.0}, kPi / 4, 0.0}, {{-1.0}, kPi / 4, 0.0}, {{1.0}, kPi / 2, 0.0}}, c);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int i = 0; i < arr.n(); ++i) {
        const ImplicitSurface psi = ImplicitSurface::psi(arr, choose_rotation_weights(arr, i), 1.0);
        CHECK(psi.kind() == SurfaceKind::Psi);
        for (int k = 0; k < 200; ++k) {
            const double x[1] = {U(rng)}, t = U(rng);
            const double y = psi.solve_height(t, x);
            CHECK(std::abs(psi.level(t, x, y) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("long double heights near large offsets") {
    const FrontArrangement arr = symmetric_pair(kPi / 4, 0.35);
    const ImplicitSurface s = ImplicitSurface::phi(arr, 1.0);
    const long double x[1] = {1e5L};
    const Real y = s.solve_height(Real(0), std::span<const Real>(x, 1));
    CHECK(std::abs(static_cast<double>(s.level(0.0, std::span<const double>(std::array<double, 1>{1e5}.data(), 1),
                                               static_cast<double>(y))) -
                   1.0) < 1e-6);
}
