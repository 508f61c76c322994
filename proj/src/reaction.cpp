#include "front_forge/reaction.hpp"

#include "front_forge/errors.hpp"

#include <cmath>
// boost 1.74 pchip calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace front_forge {

class TabulatedF {
public:
    TabulatedF(std::vector<double> u, std::vector<double> f)
        : u0_(u.front()), u1_(u.back()),
          interp_(std::move(u), std::move(f)) {
        f0_ = interp_(u0_);
        f1_ = interp_(u1_);
        d0_ = interp_.prime(u0_);
        d1_ = interp_.prime(u1_);
    }

    double value(double u) const {
        if (u < u0_) return f0_ + d0_ * (u - u0_);
        if (u > u1_) return f1_ + d1_ * (u - u1_);
        return interp_(u);
    }

    double prime(double u) const {
        if (u < u0_) return d0_;
        if (u > u1_) return d1_;
        return interp_.prime(u);
    }

private:
    double u0_, u1_;
    double f0_ = 0, f1_ = 0, d0_ = 0, d1_ = 0;
    boost::math::interpolators::pchip<std::vector<double>> interp_;
};

namespace {

void reject_nan(double u) {
    if (std::isnan(u)) throw std::invalid_argument("reaction: NaN argument");
}

double max_abs_fprime(const ReactionSpec& spec, int samples) {
    double L = 0.0;
    for (int k = 0; k < samples; ++k) {
        double u = static_cast<double>(k) / (samples - 1);
        L = std::max(L, std::abs(eval_fprime(spec, u)));
    }
    return L;
}

void finish_constants(ReactionSpec& s) {
    s.mu = std::min({1.0, -s.fprime0 / 4.0, -s.fprime1 / 4.0});
    s.sigma = largest_sigma(s);
    if (!(s.sigma > 0.0)) throw std::invalid_argument("reaction: no admissible sigma");
}

}  // namespace

ReactionSpec make_cubic(double theta) {
    if (std::isnan(theta)) throw std::invalid_argument("reaction: theta is NaN");
    if (theta >= 0.5 && theta < 1.0) throw std::invalid_argument("unbalanced condition violated");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("reaction: theta must lie in (0, 1/2)");

    ReactionSpec s;
    s.kind = ReactionKind::Cubic;
    s.theta = theta;
    s.fprime0 = -theta;
    s.fprime1 = theta - 1.0;
    s.integral_f = (1.0 - 2.0 * theta) / 12.0;

    // |f'| on [0,1] peaks at an endpoint or at the vertex of the parabola f'.
    const double v = (1.0 + theta) / 3.0;
    s.L = std::max({std::abs(s.fprime0), std::abs(s.fprime1), std::abs(eval_fprime(s, v))});
    finish_constants(s);
    return s;
}

ReactionSpec make_tabulated(const std::vector<double>& u, const std::vector<double>& f) {
    if (u.size() != f.size() || u.size() < 5)
        throw std::invalid_argument("reaction: tabulated f needs at least 5 (u, f) pairs");
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!std::isfinite(u[k]) || !std::isfinite(f[k]))
            throw std::invalid_argument("reaction: non-finite sample");
        if (k > 0 && !(u[k] > u[k - 1])) throw std::invalid_argument("reaction: u samples must increase");
    }
    if (std::abs(u.front()) > 1e-12 || std::abs(u.back() - 1.0) > 1e-12)
        throw std::invalid_argument("reaction: samples must span [0, 1]");
    if (std::abs(f.front()) > 1e-12 || std::abs(f.back()) > 1e-12)
        throw std::invalid_argument("reaction: f(0) and f(1) must vanish");

    ReactionSpec s;
    s.kind = ReactionKind::Tabulated;
    s.table = std::make_shared<TabulatedF>(u, f);

    // Sign pattern: f < 0 then f > 0 with a single interior zero.
    const int n = 10001;
    double theta = -1.0;
    double prev = eval_f(s, 1.0 / (n - 1));
    if (!(prev < 0.0)) throw std::invalid_argument("reaction: f must be negative just above 0");
    for (int k = 2; k < n - 1; ++k) {
        double x = static_cast<double>(k) / (n - 1);
        double cur = eval_f(s, x);
        if (prev < 0.0 && cur >= 0.0) {
            if (theta >= 0.0) throw std::invalid_argument("reaction: f has more than one interior zero");
            theta = x;
        } else if (prev >= 0.0 && cur < 0.0) {
            throw std::invalid_argument("reaction: f is not bistable");
        }
        prev = cur;
    }
    if (theta < 0.0) throw std::invalid_argument("reaction: f has no interior zero");
    // Refine the zero by bisection on the interpolant.
    double lo = theta - 1.0 / (n - 1), hi = theta;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (eval_f(s, mid) < 0.0 ? lo : hi) = mid;
    }
    s.theta = 0.5 * (lo + hi);

    s.fprime0 = eval_fprime(s, 0.0);
    s.fprime1 = eval_fprime(s, 1.0);
    if (!(s.fprime0 < 0.0) || !(s.fprime1 < 0.0))
        throw std::invalid_argument("reaction: f'(0) and f'(1) must be negative");

    auto tab = s.table;
    s.integral_f = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return tab->value(x); }, 0.0, 1.0, 15, 1e-12);
    if (!(s.integral_f > 0.0)) throw std::invalid_argument("unbalanced condition violated");

    s.L = max_abs_fprime(s, 100001);
    finish_constants(s);
    return s;
}

ReactionSpec load_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("reaction: cannot open " + path);
    std::vector<double> u, f;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a, b;
        if (!(row >> a >> b)) {
            if (u.empty()) continue;  // header
            throw std::invalid_argument("reaction: malformed row in " + path);
        }
        u.push_back(a);
        f.push_back(b);
    }
    return make_tabulated(u, f);
}

double eval_f(const ReactionSpec& spec, double u) {
    reject_nan(u);
    if (spec.kind == ReactionKind::Cubic) return u * (u - spec.theta) * (1.0 - u);
    return spec.table->value(u);
}

double eval_fprime(const ReactionSpec& spec, double u) {
    reject_nan(u);
    if (spec.kind == ReactionKind::Cubic)
        return -3.0 * u * u + 2.0 * (1.0 + spec.theta) * u - spec.theta;
    return spec.table->prime(u);
}

bool sigma_admissible(const ReactionSpec& spec, double sigma, int samples) {
    const double w = 4.0 * sigma;
    for (int k = 0; k < samples; ++k) {
        double s = w * static_cast<double>(k) / (samples - 1);
        if (eval_fprime(spec, s) > 0.5 * spec.fprime0) return false;
        if (eval_fprime(spec, 1.0 - s) > 0.5 * spec.fprime1) return false;
    }
    return true;
}

double largest_sigma(const ReactionSpec& spec, int samples) {
    const double cap = 0.125;
    if (sigma_admissible(spec, cap, samples)) return cap;
    double lo = 0.0, hi = cap;
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        (sigma_admissible(spec, mid, samples) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace front_forge
