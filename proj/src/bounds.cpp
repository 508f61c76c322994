#include "front_forge/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace front_forge {

namespace {

double alpha_formula(const BoundParams& p, double eps, double speed_factor) {
    const double C = p.C_emp;
    const double denom = 2.0 * (6.0 * C * p.M + speed_factor * p.c_f + C);
    return std::min({1.0, -p.fprime0 * eps / denom, -p.fprime1 * eps / denom});
}

struct Scaled {
    std::array<Real, kMaxX> X{};
    Real T = 0.0L;
};

Scaled scale_point(double t, std::span<const double> pos, int dim, double alpha) {
    Scaled s;
    const Real a = alpha;
    s.T = a * static_cast<Real>(t);
    for (int k = 0; k < dim; ++k) s.X[k] = a * static_cast<Real>(pos[k]);
    return s;
}

}  // namespace

double BoundParams::alpha_of_eps(double eps) const { return alpha_formula(*this, eps, 1.0); }

double BoundParams::alpha_sub_of_eps(double eps) const { return alpha_formula(*this, eps, 2.0); }

double shift_rate_bound(const FrontProfile& prof, double delta) {
    double k = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < prof.xi_grid.size(); ++j) {
        const double g = prof.g_vals[j];
        if (g >= 0.5 * delta && g <= 1.0 - 0.5 * delta) k = std::min(k, -prof.gp_vals[j]);
    }
    if (!std::isfinite(k)) throw std::invalid_argument("bounds: delta band is empty on the profile grid");
    return 0.5 * prof.c_f * k;
}

BoundParams admissible_params(const ReactionSpec& spec, const FrontProfile& prof, const ProfileConstants& pc,
                              const FrontArrangement& arr, double C_emp, double eps_fraction, double delta,
                              double alpha_shrink) {
    if (!(C_emp > 0.0)) throw std::invalid_argument("bounds: C_emp must be positive");
    if (!(eps_fraction > 0.0 && eps_fraction < 1.0)) throw std::invalid_argument("bounds: eps_fraction must lie in (0, 1)");
    if (!(alpha_shrink > 0.0 && alpha_shrink <= 1.0)) throw std::invalid_argument("bounds: alpha_shrink must lie in (0, 1]");
    if (delta == 0.0) delta = spec.sigma;
    if (!(delta > 0.0) || delta > spec.sigma) throw std::invalid_argument("bounds: delta must lie in (0, sigma]");

    BoundParams p;
    p.n = arr.n();
    p.C_emp = C_emp;
    p.M = pc.M_bound;
    p.L = spec.L;
    p.sigma = spec.sigma;
    p.c_f = prof.c_f;
    p.fprime0 = spec.fprime0;
    p.fprime1 = spec.fprime1;
    p.k_profile = pc.k_min;
    p.mu = spec.mu;
    p.delta = delta;
    p.eps_fraction = eps_fraction;
    p.alpha_shrink = alpha_shrink;
    p.epsilon0 = std::min({spec.sigma / (static_cast<double>(p.n) * p.n), pc.k_min / (2.0 * C_emp * spec.L), 1.0});
    p.k_shift = shift_rate_bound(prof, delta);
    p.omega = (p.mu + p.L) / (p.mu * p.k_shift);
    p.epsilon = eps_fraction * p.epsilon0;
    p.alpha = alpha_shrink * p.alpha_of_eps(p.epsilon);
    p.alpha_sub = alpha_shrink * p.alpha_sub_of_eps(p.epsilon);
    p.admissible = true;
    return p;
}

BoundParams with_epsilon(const BoundParams& base, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("bounds: epsilon must be positive");
    BoundParams p = base;
    p.epsilon = epsilon;
    p.eps_fraction = epsilon / base.epsilon0;
    p.alpha = base.alpha_shrink * p.alpha_of_eps(epsilon);
    p.alpha_sub = base.alpha_shrink * p.alpha_sub_of_eps(epsilon);
    p.admissible = epsilon < base.epsilon0;
    return p;
}

LowerBarrier::LowerBarrier(FrontArrangement arr, FrontProfile prof)
    : arr_(std::move(arr)), prof_(std::move(prof)) {}

std::pair<double, int> LowerBarrier::eval(double t, std::span<const double> pos) const {
    const int N = arr_.N();
    const double y = pos[N - 1];
    double best = -1.0;
    int arg = 0;
    for (int i = 0; i < arr_.n(); ++i) {
        const double g = eval_g(prof_, signed_plane_coord(arr_, i, t, pos.first(N - 1), y, 1.0));
        if (g > best) {
            best = g;
            arg = i;
        }
    }
    return {best, arg};
}

UpperBarrier::UpperBarrier(FrontArrangement arr, FrontProfile prof, BoundParams params, bool allow_inadmissible)
    : arr_(std::move(arr)), prof_(std::move(prof)), params_(params),
      phi_(ImplicitSurface::phi(arr_, params.alpha)) {
    if (!allow_inadmissible) {
        if (!params_.admissible || !(params_.epsilon < params_.epsilon0))
            throw std::invalid_argument("bounds: epsilon must lie in (0, epsilon0)");
        if (params_.alpha > params_.alpha_of_eps(params_.epsilon) * (1.0 + 1e-12))
            throw std::invalid_argument("bounds: alpha exceeds alpha(epsilon)");
    }
}

UpperDetail UpperBarrier::detail(double t, std::span<const double> pos) const {
    const int dim = arr_.N() - 1;
    const Scaled s = scale_point(t, pos, dim, params_.alpha);
    const SurfaceDerivs d = phi_.derivatives(s.T, std::span<const Real>(s.X.data(), dim));
    const Real y = pos[dim];
    const Real xi = (y - d.y / static_cast<Real>(params_.alpha)) / std::sqrt(1.0L + d.grad_sq());
    UpperDetail r;
    r.xi_bar = static_cast<double>(xi);
    r.flatness = d.flatness;
    const double v = eval_g(prof_, r.xi_bar) + params_.epsilon * d.flatness;
    r.clipped = v >= 1.0;
    r.value = std::min(v, 1.0);
    return r;
}

FacetSubsolution::FacetSubsolution(FrontArrangement arr, FrontProfile prof, BoundParams params, int i,
                                   bool allow_inadmissible)
    : arr_(std::move(arr)), prof_(std::move(prof)), params_(params),
      fam_(choose_rotation_weights(arr_, i)),
      psi_(ImplicitSurface::psi(arr_, fam_, params.alpha_sub)) {
    if (!allow_inadmissible) {
        if (!params_.admissible || !(params_.epsilon < params_.epsilon0))
            throw std::invalid_argument("bounds: epsilon must lie in (0, epsilon0)");
        if (params_.alpha_sub > params_.alpha_sub_of_eps(params_.epsilon) * (1.0 + 1e-12))
            throw std::invalid_argument("bounds: alpha exceeds alpha(epsilon)");
    }
}

UpperDetail FacetSubsolution::detail(double t, std::span<const double> pos) const {
    const int dim = arr_.N() - 1;
    const Scaled s = scale_point(t, pos, dim, params_.alpha_sub);
    const SurfaceDerivs d = psi_.derivatives(s.T, std::span<const Real>(s.X.data(), dim));
    const Real y = pos[dim];
    const Real xi = (y - d.y / static_cast<Real>(params_.alpha_sub)) / std::sqrt(1.0L + d.grad_sq());
    UpperDetail r;
    r.xi_bar = static_cast<double>(xi);
    r.flatness = d.flatness;
    const double v = eval_g(prof_, r.xi_bar) - params_.epsilon * d.flatness;
    r.clipped = v <= 0.0;
    r.value = std::max(v, 0.0);
    return r;
}

ShiftedBarrier::ShiftedBarrier(SpaceTimeField base, double omega, double delta, double mu, ShiftSign sign)
    : base_(std::move(base)), omega_(omega), delta_(delta), mu_(mu), sign_(sign) {
    if (!base_) throw std::invalid_argument("bounds: empty base evaluator");
    if (!(omega > 0.0) || !(delta > 0.0) || !(mu > 0.0))
        throw std::invalid_argument("bounds: omega, delta and mu must be positive");
}

double ShiftedBarrier::time_shift(double t) const { return omega_ * delta_ * (1.0 - std::exp(-mu_ * t)); }

double ShiftedBarrier::offset(double t) const { return delta_ * std::exp(-mu_ * t); }

double ShiftedBarrier::operator()(double t, std::span<const double> pos) const {
    if (sign_ == ShiftSign::Plus) return std::min(base_(t + time_shift(t), pos) + offset(t), 1.0);
    return std::max(base_(t - time_shift(t), pos) - offset(t), 0.0);
}

}  // namespace front_forge
