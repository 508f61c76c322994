#pragma once

#include "front_forge/reaction.hpp"

#include <memory>
#include <string>
#include <vector>

namespace front_forge {

struct ProfileOptions {
    double Xi = 40.0;
    double dxi = 0.01;
    double tol_c = 1e-10;
    double delta0 = 1e-4;     // start at 1 - g = delta0 on the second-order manifold
    double tail_cut = 1e-4;   // below this the right tail is the two-term exponential
    double horizon = 400.0;   // max shooting length before a shot is declared undecided
};

class ProfileInterp;

/**
 * @brief Traveling wave g with speed c_f, normalized g(0) = 1/2, tabulated on [-Xi, Xi].
 *
 * Outside the table the exponential tails take over. Evaluators are pure.
 */
struct FrontProfile {
    double c_f = 0.0;
    double Xi = 0.0;
    double dxi = 0.0;
    std::vector<double> xi_grid;
    std::vector<double> g_vals, gp_vals, gpp_vals;
    double lambda_plus = 0.0;   // g ~ A+ e^{lambda_plus xi}, xi -> +inf
    double lambda_minus = 0.0;  // 1 - g ~ A- e^{lambda_minus xi}, xi -> -inf
    double tail_amp_plus = 0.0;
    double tail_quad_plus = 0.0;   // g = a E + kappa (a E)^2 on the right tail, E = e^{lambda_plus xi}
    double tail_quad_minus = 0.0;  // 1 - g = a E + kappa (a E)^2 on the left tail
    double tail_amp_minus = 0.0;
    double join_slope_mismatch = 0.0;  // relative g' jump where the two integrated halves meet at g = 1/2
    double ode_right = 0.0;            // last xi covered by integrated data
    double ode_left = 0.0;             // first xi covered by integrated data
    double c_bracket = 0.0;            // final |c_hi - c_lo|
    int shots = 0;

    std::shared_ptr<const ProfileInterp> interp;
};

struct ProfileConstants {
    double R_sigma = 0.0;
    double k_min = 0.0;
    double M_bound = 0.0;
};

FrontProfile solve_profile(const ReactionSpec& spec, const ProfileOptions& opts = {});

double eval_g(const FrontProfile& prof, double xi);
double eval_gp(const FrontProfile& prof, double xi);
double eval_gpp(const FrontProfile& prof, double xi);

ProfileConstants profile_constants(const FrontProfile& prof, const ReactionSpec& spec);

/// Largest |g'' + c g' + f(g)| over interior grid nodes.
double profile_ode_residual(const FrontProfile& prof, const ReactionSpec& spec);

/// Header JSON line {c_f, Xi, dxi, lambda_plus, lambda_minus, rows} then float64 (g, g', g'') rows.
void write_profile_table(const FrontProfile& prof, const std::string& path);

struct ProfileTable {
    double c_f = 0, Xi = 0, dxi = 0, lambda_plus = 0, lambda_minus = 0;
    std::vector<double> g, gp, gpp;
};
ProfileTable read_profile_table(const std::string& path);

}  // namespace front_forge
