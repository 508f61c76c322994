#include "front_forge/reaction.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

using namespace front_forge;

TEST_CASE("cubic zeros, derivatives and integral") {
    for (double theta : {0.1, 0.25, 0.4}) {
        const ReactionSpec s = make_cubic(theta);
        CHECK(eval_f(s, 0.0) == doctest::Approx(0.0));
        CHECK(eval_f(s, theta) == doctest::Approx(0.0));
        CHECK(eval_f(s, 1.0) == doctest::Approx(0.0));
        CHECK(eval_f(s, 0.5 * theta) < 0.0);
        CHECK(eval_f(s, 0.5 * (1.0 + theta)) > 0.0);
        CHECK(s.fprime0 == doctest::Approx(-theta));
        CHECK(s.fprime1 == doctest::Approx(-(1.0 - theta)));
        CHECK(s.integral_f == doctest::Approx((1.0 - 2.0 * theta) / 12.0));
        const double u = 0.37, h = 1e-6;
        CHECK(eval_fprime(s, u) == doctest::Approx((eval_f(s, u + h) - eval_f(s, u - h)) / (2 * h)).epsilon(1e-8));
    }
}

TEST_CASE("cubic constants at theta = 1/4") {
    const ReactionSpec s = make_cubic(0.25);
    CHECK(s.L == doctest::Approx(0.75));
    CHECK(s.mu == doctest::Approx(0.0625));
    CHECK(sigma_admissible(s, s.sigma));
    CHECK_FALSE(sigma_admissible(s, 1.05 * s.sigma));
    CHECK(s.sigma == doctest::Approx(largest_sigma(s)));
}

TEST_CASE("cubic rejects theta outside (0, 1/2)") {
    CHECK_THROWS_AS(make_cubic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_cubic(0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_cubic(0.7), std::invalid_argument);
}

TEST_CASE("tabulated cubic reproduces the closed form") {
    const ReactionSpec c = make_cubic(0.3);
    std::vector<double> u, f;
    for (int k = 0; k <= 2000; ++k) {
        u.push_back(k / 2000.0);
        f.push_back(eval_f(c, u.back()));
    }
    const ReactionSpec t = make_tabulated(u, f);
    CHECK(t.kind == ReactionKind::Tabulated);
    CHECK(t.theta == doctest::Approx(0.3).epsilon(1e-6));
    double err = 0.0;
    for (int k = 0; k <= 997; ++k) err = std::max(err, std::abs(eval_f(t, k / 997.0) - eval_f(c, k / 997.0)));
    CHECK(err < 1e-6);
    // endpoint slopes of a monotone interpolant are only first-order accurate
    CHECK(t.fprime0 == doctest::Approx(c.fprime0).epsilon(5e-3));
    CHECK(t.fprime1 == doctest::Approx(c.fprime1).epsilon(5e-3));
}

TEST_CASE("tabulated CSV loading") {
    const auto path = std::filesystem::temp_directory_path() / "ff_reaction_test.csv";
    {
        std::ofstream out(path);
        out << "u,f\n";
        const ReactionSpec c = make_cubic(0.2);
        for (int k = 0; k <= 400; ++k) out << k / 400.0 << "," << eval_f(c, k / 400.0) << "\n";
    }
    const ReactionSpec t = load_tabulated_csv(path.string());
    CHECK(t.theta == doctest::Approx(0.2).epsilon(1e-4));
    std::filesystem::remove(path);
    CHECK_THROWS(load_tabulated_csv(path.string()));
}

TEST_CASE("tabulated data must be bistable") {
    const std::vector<double> u = {0.0, 0.25, 0.5, 0.75, 1.0};
    CHECK_THROWS_AS(make_tabulated(u, {0.0, 0.1, 0.2, 0.1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_tabulated(u, {0.1, -0.1, 0.2, 0.1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_tabulated({0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}), std::invalid_argument);
}
