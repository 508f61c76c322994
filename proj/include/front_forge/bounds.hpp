#pragma once

#include "front_forge/geometry.hpp"
#include "front_forge/profile.hpp"
#include "front_forge/reaction.hpp"
#include "front_forge/surface.hpp"

#include <functional>
#include <memory>
#include <span>

namespace front_forge {

/// A function of (t, position) with position = (x_1, ..., x_{N-1}, y).
using SpaceTimeField = std::function<double(double t, std::span<const double> pos)>;

/**
 * @brief Parameters of the explicit barriers.
 *
 * epsilon0 = min{sigma/n^2, k/(2 C L), 1},
 * alpha(eps) = min{1, -f'(0) eps / (2(6CM + c C + C)), -f'(1) eps / (...)} with c C = c_f for the
 * supersolution and 2 c_f for the facet subsolutions.
 */
struct BoundParams {
    double epsilon = 0.0;
    double alpha = 0.0;       // supersolution scale, alpha_shrink * alpha(eps)
    double alpha_sub = 0.0;   // facet subsolution scale
    double epsilon0 = 0.0;
    double C_emp = 0.0;
    double omega = 0.0;
    double mu = 0.0;
    double delta = 0.0;
    double k_profile = 0.0;   // min -g' on [-R, R]
    double k_shift = 0.0;     // lower bound of the time derivative on the transition band
    double M = 0.0;
    double L = 0.0;
    double sigma = 0.0;
    double c_f = 0.0;
    double fprime0 = 0.0;
    double fprime1 = 0.0;
    double eps_fraction = 0.5;
    double alpha_shrink = 0.5;
    int n = 0;
    bool admissible = true;

    double alpha_of_eps(double eps) const;
    double alpha_sub_of_eps(double eps) const;
};

/// Builds admissible parameters; throws if delta is outside (0, sigma] or C_emp <= 0.
BoundParams admissible_params(const ReactionSpec& spec, const FrontProfile& prof, const ProfileConstants& pc,
                              const FrontArrangement& arr, double C_emp, double eps_fraction = 0.5,
                              double delta = 0.0, double alpha_shrink = 0.5);

/// Same constants with epsilon (and the derived alphas) overridden. Marks the result
/// inadmissible when epsilon >= epsilon0 so barriers only accept it when asked to.
BoundParams with_epsilon(const BoundParams& base, double epsilon);

/// k used in omega: half of c_f times min -g' over the band {delta/2 <= g <= 1 - delta/2}.
double shift_rate_bound(const FrontProfile& prof, double delta);

/// @brief max_i g(x.nu_i cos theta_i + y sin theta_i - c_f t + tau_i).
class LowerBarrier {
public:
    LowerBarrier(FrontArrangement arr, FrontProfile prof);
    double operator()(double t, std::span<const double> pos) const { return eval(t, pos).first; }
    std::pair<double, int> eval(double t, std::span<const double> pos) const;
    const FrontArrangement& arrangement() const { return arr_; }

private:
    FrontArrangement arr_;
    FrontProfile prof_;
};

struct UpperDetail {
    double value = 0.0;
    double xi_bar = 0.0;
    double flatness = 0.0;
    bool clipped = false;
};

/// @brief min{g(xi_bar) + eps h(alpha t, alpha x), 1} built on the surface phi.
class UpperBarrier {
public:
    /// allow_inadmissible lets canary runs evaluate with epsilon >= epsilon0.
    UpperBarrier(FrontArrangement arr, FrontProfile prof, BoundParams params, bool allow_inadmissible = false);
    double operator()(double t, std::span<const double> pos) const { return detail(t, pos).value; }
    UpperDetail detail(double t, std::span<const double> pos) const;
    const BoundParams& params() const { return params_; }
    const ImplicitSurface& surface() const { return phi_; }

private:
    FrontArrangement arr_;
    FrontProfile prof_;
    BoundParams params_;
    ImplicitSurface phi_;
};

/// @brief max{g(xi_{i,*}) - eps h_i(alpha t, alpha x), 0} built on the rotated surface psi_i.
class FacetSubsolution {
public:
    FacetSubsolution(FrontArrangement arr, FrontProfile prof, BoundParams params, int i,
                     bool allow_inadmissible = false);
    double operator()(double t, std::span<const double> pos) const { return detail(t, pos).value; }
    UpperDetail detail(double t, std::span<const double> pos) const;
    const RotatedFamily& family() const { return fam_; }
    int facet() const { return fam_.i; }

private:
    FrontArrangement arr_;
    FrontProfile prof_;
    BoundParams params_;
    RotatedFamily fam_;
    ImplicitSurface psi_;
};

enum class ShiftSign { Plus, Minus };

/**
 * @brief u+(t) = min{u*(t + omega delta (1 - e^{-mu t})) + delta e^{-mu t}, 1}, and the mirrored u-.
 */
class ShiftedBarrier {
public:
    ShiftedBarrier(SpaceTimeField base, double omega, double delta, double mu, ShiftSign sign);
    double operator()(double t, std::span<const double> pos) const;
    double time_shift(double t) const;
    double offset(double t) const;

private:
    SpaceTimeField base_;
    double omega_, delta_, mu_;
    ShiftSign sign_;
};

}  // namespace front_forge
