#pragma once

#include "front_forge/bounds.hpp"
#include "front_forge/grid.hpp"
#include "front_forge/reaction.hpp"

#include <functional>
#include <string>

namespace front_forge {

enum class Scheme { ExplicitEuler, ImexCN };
enum class Boundary { DirichletFromEvaluator, HomogeneousNeumann };

struct SolverConfig {
    double dt = 0.0;             // 0: largest admissible step
    double cfl_fraction = 0.2;
    Scheme scheme = Scheme::ExplicitEuler;
    Boundary boundary = Boundary::DirichletFromEvaluator;
    int snapshot_every = 0;      // 0: no intermediate snapshots
    double frame_speed = 0.0;    // grid translates along the last axis with this speed
    double imex_tol = 1e-10;
    std::string diagnostic_dir;  // where a blow-up snapshot goes; empty disables it
};

using SnapshotSink = std::function<void(const GridField&)>;

/// Largest explicit step: cfl * dx^2 / (2N), further capped by dt L <= 0.5 and dt V <= 0.5 dx.
double max_stable_dt(const SolverConfig& cfg, const ReactionSpec& spec, double dx, int N);

/// Samples an evaluator on every node of the field at field.time.
void sample_field(GridField& field, const SpaceTimeField& eval);

/**
 * @brief Finite differences for u_t = Laplacian u + f(u) on a box.
 *
 * Explicit Euler or IMEX Crank-Nicolson; boundary values from an evaluator or reflected.
 */
class CauchySolver {
public:
    CauchySolver(ReactionSpec spec, SolverConfig cfg);

    /// One step of size dt; the boundary evaluator is called at time + dt.
    void step(GridField& field, double dt, const SpaceTimeField& boundary) const;

    /// Samples the initial evaluator at t0 and integrates to t1 with a uniform step.
    GridField solve(const SpaceTimeField& initial, GridField grid, double t0, double t1,
                    const SpaceTimeField& boundary, const SnapshotSink& sink = {}) const;

    /// Continues an existing field to t1.
    void advance(GridField& field, double t1, const SpaceTimeField& boundary, const SnapshotSink& sink = {}) const;

    /// Uniform step and count used to reach t1 from t0.
    std::pair<double, long long> plan(double t0, double t1, double dx, int N) const;

    const SolverConfig& config() const { return cfg_; }

private:
    ReactionSpec spec_;
    SolverConfig cfg_;

    void explicit_step(GridField& field, double dt, const SpaceTimeField& boundary) const;
    void imex_step(GridField& field, double dt, const SpaceTimeField& boundary) const;
    void apply_boundary(GridField& field, const SpaceTimeField& boundary) const;
    void finish_step(GridField& field, long long violations, bool non_finite) const;
};

}  // namespace front_forge
