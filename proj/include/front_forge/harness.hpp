#pragma once

#include "front_forge/bounds.hpp"
#include "front_forge/geometry.hpp"
#include "front_forge/grid.hpp"
#include "front_forge/pde.hpp"
#include "front_forge/profile.hpp"
#include "front_forge/reaction.hpp"
#include "front_forge/report.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace front_forge {

/// @brief Reaction, solved profile and an arrangement moving with the profile speed.
struct Instance {
    ReactionSpec spec;
    FrontProfile prof;
    ProfileConstants pc;
    FrontArrangement arr;
};

Instance make_instance(const ReactionSpec& spec, int N, std::vector<Front> fronts, const ProfileOptions& opts = {});
/// Same reaction and profile with the arrangement's shifts replaced.
Instance with_tau(const Instance& base, const std::vector<double>& tau);

/// @brief mt19937_64 with an explicit 53-bit uniform map, so streams agree across standard libraries.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 rng_;
};

/// Sampling window in scaled surface coordinates: |T| <= t_half, |X_k| <= x_half, |xi| <= xi_half.
struct SampleBox {
    double t_half = 4.0;
    double x_half = 6.0;
    double xi_half = 12.0;
};

struct Calibration {
    double C_raw = 0.0;
    double C_emp = 0.0;
    std::map<std::string, double> parts;  // largest ratio per estimate family
    long long samples_used = 0;
    long long sign_violations = 0;        // samples where a ratio that must be positive was not
};

/// Largest observed ratio over the surface estimates for phi and every psi_i (at unit scale), times safety.
/// Samples with flatness below 1e-8 are skipped; with none left (n = 1) C_raw falls back to 1.
Calibration calibrate_constant(const FrontArrangement& arr, int samples, std::uint64_t seed, double safety = 2.0,
                               const SampleBox& box = {});

struct SurfaceCheckOptions {
    int samples = 10000;
    double fd_step = 1e-4;
    double fd_tol = 1e-6;
    double residual_tol = 1e-12;
    double eig_floor = -1e-10;
    SampleBox box;
};

/// Root residual, finite-difference agreement of the analytic derivatives, and convexity of phi;
/// residual and gradient agreement for every psi_i.
std::vector<Check> surface_check(const FrontArrangement& arr, const SurfaceCheckOptions& opts, std::uint64_t seed);

/// Value of a barrier and whether the point lies in (or touches) its clip set.
using ClippedField = std::function<std::pair<double, bool>(double t, std::span<const double> pos)>;

/// u_t - Lap u - f(u) by central differences at h and h/2 combined by Richardson extrapolation;
/// nullopt when any stencil point is clipped.
std::optional<double> probe_residual(const ReactionSpec& spec, const ClippedField& u, double t,
                                     std::span<const double> pos, double h);

struct ResidualOptions {
    int samples = 10000;
    double h = 0x1.0p-6;
    double tol = 1e-5;
    SampleBox box;
    std::vector<double> canary_multiples = {2.0};                  // epsilon / epsilon0
    std::vector<double> scan_multiples = {8.0, 32.0, 128.0, 512.0};  // informational threshold scan
    bool shifted = true;                                            // also probe u+ and u-
    double shift_horizon = 0.0;                                     // 0: 5 / mu
};

/// Supersolution inequality for u_bar, subsolution inequality for every u_{i,*}, the shifted pair
/// u+ / u_i^- and the canaries.
std::vector<Check> verify_supersolution(const Instance& inst, const BoundParams& params, const ResidualOptions& opts,
                                        std::uint64_t seed);

/// @brief Box of dims[k] nodes spaced dx starting at lo.
struct GridSpec {
    std::vector<double> lo;
    std::vector<int> dims;
    double dx = 0.1;
    GridField make(double t = 0.0) const { return GridField(dims, dx, lo, t); }
};

/// Integrates from u_low(t_start) with u_low Dirichlet data up to t_end.
GridField run_from_lower(const Instance& inst, const GridSpec& grid, const SolverConfig& cfg, double t_start,
                         double t_end);

struct ConstructOptions {
    std::vector<double> start_times = {-5.0, -10.0, -20.0};
    double dt_probe = 0.05;     // the deepest run is also stored at -dt_probe
    double order_tol = 1e-9;    // floating-point floor for ordering checks
    double contraction = 2.0;   // required shrink factor of successive increments
    bool planar_lag_probe = true;
};

struct EntireRun {
    std::vector<double> start_times;
    std::vector<GridField> finals;  // u_n(0, .) in start_times order
    GridField U;                    // deepest start: the approximation of the entire solution
    GridField U_prev;               // the same run at time -dt_probe
    double dt_probe = 0.0;
    double beta = 0.0;              // sup (u_bar - u_low) over the box boundary at t = 0
    std::vector<Check> checks;
    std::map<std::string, double> constants;
};

/// Existence construction: u_n from u_low(-n) for each start time, with ordering, sandwich and
/// convergence checks.
EntireRun construct_entire(const Instance& inst, const BoundParams& params, const GridSpec& grid,
                           const SolverConfig& cfg, const ConstructOptions& opts);

struct AsymptoticsOptions {
    double bucket_width = 2.0;
    double order_tol = 1e-9;
    double r2_min = 0.95;
};

/// Bucketed sup |U - u_low| against the ridge distance proxy, and strict ordering u_low < U < 1.
std::vector<Check> verify_asymptotics(const EntireRun& run, const Instance& inst, const BoundParams& params,
                                      const AsymptoticsOptions& opts = {});

/// Time derivative floor near the polytope boundary and a translation spot check.
std::vector<Check> verify_monotonicity(const EntireRun& run, const Instance& inst, double rho = 5.0,
                                       double shift = 1.0, double order_tol = 1e-9);

struct StabilityOptions {
    double amplitude = 0.2;
    double radius = 3.0;
    std::vector<double> center;  // empty: on the ridge line above x = 0 at t = 0
    double T = 0.0;              // 0: 30 / c_f
    int checkpoints = 16;
    double burn_in_fraction = 0.25;
    double decay = 0.1;
    double frame_speed = -1.0;   // negative: speed of the highest plane above x = 0
    bool two_sided = true;
};

struct StabilityTrace {
    std::vector<double> times;
    std::vector<double> D;
    std::vector<double> D_flipped;
};

std::vector<Check> stability_experiment(const EntireRun& run, const Instance& inst, const SolverConfig& cfg,
                                        const StabilityOptions& opts, StabilityTrace* trace = nullptr);

struct VFrontOptions {
    double x_inner = 8.0;   // branch fit window in |x|
    double x_outer = 20.0;
    double slope_tol = 0.02;
    double planar_inner = 16.0;  // planar comparison for |x| in [planar_inner, x_outer]
    double planar_tol = 1e-3;
};

/// Level-set slopes of a 2D symmetric pair and closeness to the planar fronts far from the apex.
std::vector<Check> regression_vfront(const EntireRun& run, const Instance& inst, double alpha0,
                                     const VFrontOptions& opts = {});

/// max_i g(plane_i) < U on interior nodes of a 3D run, and its approach far from the ridges.
std::vector<Check> regression_pyramid(const EntireRun& run, const Instance& inst, double far_distance = 4.0);

struct TauProbeOptions {
    std::vector<double> dtaus = {0.1, 0.05};
    int front = 0;
    double start_time = -10.0;
    double ratio_lo = 1.6;
    double ratio_hi = 2.4;
    double order_tol = 1e-9;
};

std::vector<Check> tau_continuity_probe(const Instance& inst, const GridSpec& grid, const SolverConfig& cfg,
                                        const TauProbeOptions& opts);

}  // namespace front_forge
