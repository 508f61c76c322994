#include "front_forge/pde.hpp"

#include "front_forge/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace front_forge {

namespace {

// Outer "lines" run along the last axis; this describes one of them.
struct Line {
    std::size_t base = 0;                 // index of node j = 0
    bool edge = false;                    // some outer index sits on the box boundary
    std::array<std::ptrdiff_t, 3> minus{};  // neighbour offsets along outer axes (reflected at edges)
    std::array<std::ptrdiff_t, 3> plus{};
};

Line make_line(const GridField& f, std::size_t line) {
    Line L;
    const int N = f.N();
    const int ny = f.dims[N - 1];
    L.base = line * ny;
    std::size_t rem = line;
    std::array<int, 4> ijk{};
    for (int a = N - 2; a >= 0; --a) {
        ijk[a] = static_cast<int>(rem % f.dims[a]);
        rem /= f.dims[a];
    }
    for (int a = 0; a < N - 1; ++a) {
        const auto s = static_cast<std::ptrdiff_t>(f.stride(a));
        const int i = ijk[a], n = f.dims[a];
        if (i == 0 || i == n - 1) L.edge = true;
        L.minus[a] = i == 0 ? s : -s;       // reflection: ghost u_{-1} = u_{1}
        L.plus[a] = i == n - 1 ? -s : s;
    }
    return L;
}

std::size_t line_count(const GridField& f) { return f.size() / f.dims[f.N() - 1]; }

template <bool kCubic>
inline double reaction(const ReactionSpec& spec, double u) {
    if constexpr (kCubic) return u * (u - spec.theta) * (1.0 - u);
    else return eval_f(spec, u);
}

struct StepStats {
    long long violations = 0;
    bool non_finite = false;
};

// Clamps a run of values into [0, 1]; counts excursions beyond the drift guard and flags
// anything non-finite or absurdly large as a blow-up. Branch-free so it vectorizes.
inline void guard_run(double* v, int count, StepStats& st) {
    long long out = 0;
    int bad = 0;
    for (int j = 0; j < count; ++j) {
        const double x = v[j];
        bad |= !(std::abs(x) < 1e6);
        out += (x < -1e-9) + (x > 1.0 + 1e-9);
        v[j] = std::min(std::max(x, 0.0), 1.0);
    }
    st.violations += out;
    st.non_finite = st.non_finite || bad;
}

template <int N, bool kCubic>
StepStats explicit_kernel(const ReactionSpec& spec, const GridField& in, std::vector<double>& out, double dt,
                          double V, bool neumann) {
    const int ny = in.dims[N - 1];
    const double h = in.spacing;
    const double r = dt / (h * h);
    const double adv = dt * V / h;
    const double* u = in.values.data();
    double* w = out.data();
    const auto lines = static_cast<std::ptrdiff_t>(line_count(in));
    long long violations = 0;
    bool bad = false;

#pragma omp parallel for schedule(static) reduction(+ : violations) reduction(|| : bad)
    for (std::ptrdiff_t ln = 0; ln < lines; ++ln) {
        const Line L = make_line(in, static_cast<std::size_t>(ln));
        if (L.edge && !neumann) continue;
        StepStats st;
        const double* uc = u + L.base;
        double* wc = w + L.base;
        const double* am = uc + L.minus[0];
        const double* ap = uc + L.plus[0];
        const double* bm = uc + (N == 3 ? L.minus[1] : 0);
        const double* bp = uc + (N == 3 ? L.plus[1] : 0);
        const double diag = 2.0 * N;
        auto update = [=](int j, double ym, double yp) {
            const double c = uc[j];
            double lap = ym + yp + am[j] + ap[j] - diag * c;
            if constexpr (N == 3) lap += bm[j] + bp[j];
            double next = c + r * lap + dt * reaction<kCubic>(spec, c);
            if (V != 0.0) next += adv * (yp - c);  // upwind for +V w_y
            return next;
        };
        const int j0 = neumann ? 0 : 1, j1 = neumann ? ny : ny - 1;
        if (neumann) wc[0] = update(0, uc[1], uc[1]);
        for (int j = 1; j < ny - 1; ++j) wc[j] = update(j, uc[j - 1], uc[j + 1]);
        if (neumann) wc[ny - 1] = update(ny - 1, uc[ny - 2], uc[ny - 2]);
        guard_run(wc + j0, j1 - j0, st);
        violations += st.violations;
        bad = bad || st.non_finite;
    }
    return {violations, bad};
}

template <bool kCubic>
StepStats explicit_dispatch(const ReactionSpec& spec, const GridField& in, std::vector<double>& out, double dt,
                            double V, bool neumann) {
    if (in.N() == 2) return explicit_kernel<2, kCubic>(spec, in, out, dt, V, neumann);
    return explicit_kernel<3, kCubic>(spec, in, out, dt, V, neumann);
}

}  // namespace

double max_stable_dt(const SolverConfig& cfg, const ReactionSpec& spec, double dx, int N) {
    double dt = cfg.cfl_fraction * dx * dx / (2.0 * N);
    if (spec.L > 0.0) dt = std::min(dt, 0.5 / spec.L);
    if (cfg.frame_speed != 0.0) dt = std::min(dt, 0.5 * dx / std::abs(cfg.frame_speed));
    return dt;
}

void sample_field(GridField& field, const SpaceTimeField& eval) {
    const auto n = static_cast<std::ptrdiff_t>(field.size());
    const double t = field.time;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
        double pos[4];
        field.position(static_cast<std::size_t>(idx), pos);
        field.values[idx] = eval(t, std::span<const double>(pos, field.N()));
    }
}

CauchySolver::CauchySolver(ReactionSpec spec, SolverConfig cfg) : spec_(std::move(spec)), cfg_(std::move(cfg)) {
    if (!(cfg_.cfl_fraction > 0.0) || cfg_.cfl_fraction > 1.0)
        throw std::invalid_argument("pde: cfl_fraction must lie in (0, 1]");
    if (cfg_.dt < 0.0) throw std::invalid_argument("pde: dt must be nonnegative");
    if (cfg_.snapshot_every < 0) throw std::invalid_argument("pde: snapshot_every must be nonnegative");
}

std::pair<double, long long> CauchySolver::plan(double t0, double t1, double dx, int N) const {
    if (!(t1 >= t0)) throw std::invalid_argument("pde: t1 must not precede t0");
    double dt_max = max_stable_dt(cfg_, spec_, dx, N);
    if (cfg_.dt > 0.0) {
        if (cfg_.scheme == Scheme::ExplicitEuler && cfg_.dt > dt_max * (1.0 + 1e-12))
            throw std::invalid_argument("pde: dt exceeds the explicit stability bound");
        dt_max = cfg_.dt;
    }
    if (t1 == t0) return {0.0, 0};
    const auto steps = static_cast<long long>(std::ceil((t1 - t0) / dt_max - 1e-9));
    return {(t1 - t0) / static_cast<double>(steps), steps};
}

void CauchySolver::apply_boundary(GridField& field, const SpaceTimeField& boundary) const {
    if (cfg_.boundary != Boundary::DirichletFromEvaluator) return;
    if (!boundary) throw std::invalid_argument("pde: Dirichlet boundary needs an evaluator");
    const int N = field.N();
    const int ny = field.dims[N - 1];
    const auto lines = static_cast<std::ptrdiff_t>(line_count(field));
    const double t = field.time;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ln = 0; ln < lines; ++ln) {
        const Line L = make_line(field, static_cast<std::size_t>(ln));
        double pos[4];
        auto set = [&](int j) {
            const std::size_t c = L.base + j;
            field.position(c, pos);
            field.values[c] = boundary(t, std::span<const double>(pos, N));
        };
        if (L.edge) {
            for (int j = 0; j < ny; ++j) set(j);
        } else {
            set(0);
            set(ny - 1);
        }
    }
}

void CauchySolver::finish_step(GridField& field, long long violations, bool non_finite) const {
    field.clamp_violations += violations;
    if (!non_finite) return;
    NumericalError err("blow-up at t = " + std::to_string(field.time));
    if (!cfg_.diagnostic_dir.empty()) {
        std::filesystem::create_directories(cfg_.diagnostic_dir);
        std::ostringstream name;
        name << cfg_.diagnostic_dir << "/blowup_t" << field.time << ".ffg";
        write_grid(field, name.str());
        err.set_snapshot(name.str());
    }
    throw err;
}

void CauchySolver::explicit_step(GridField& field, double dt, const SpaceTimeField& boundary) const {
    thread_local std::vector<double> next;
    next.resize(field.size());
    const bool neumann = cfg_.boundary == Boundary::HomogeneousNeumann;
    const StepStats st = spec_.kind == ReactionKind::Cubic
                             ? explicit_dispatch<true>(spec_, field, next, dt, cfg_.frame_speed, neumann)
                             : explicit_dispatch<false>(spec_, field, next, dt, cfg_.frame_speed, neumann);
    field.values.swap(next);
    field.time += dt;
    field.origin[field.N() - 1] += cfg_.frame_speed * dt;
    apply_boundary(field, boundary);
    finish_step(field, st.violations, st.non_finite);
}

void CauchySolver::imex_step(GridField& field, double dt, const SpaceTimeField& boundary) const {
    const int N = field.N();
    const int ny = field.dims[N - 1];
    const double h = field.spacing;
    const double r = 0.5 * dt / (h * h);
    const double V = cfg_.frame_speed;
    const bool neumann = cfg_.boundary == Boundary::HomogeneousNeumann;
    const auto n = static_cast<Eigen::Index>(field.size());
    const double* u = field.values.data();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * (2 * N + 1));
    Eigen::VectorXd rhs(n);
    std::vector<std::size_t> dirichlet_rows;
    for (std::size_t ln = 0; ln < line_count(field); ++ln) {
        const Line L = make_line(field, ln);
        for (int j = 0; j < ny; ++j) {
            const std::size_t c = L.base + j;
            const bool bnode = L.edge || j == 0 || j == ny - 1;
            if (bnode && !neumann) {
                trip.emplace_back(c, c, 1.0);
                dirichlet_rows.push_back(c);
                continue;
            }
            std::array<std::ptrdiff_t, 8> nb{};
            int m = 0;
            nb[m++] = j == 0 ? 1 : -1;
            nb[m++] = j == ny - 1 ? -1 : 1;
            for (int a = 0; a < N - 1; ++a) {
                nb[m++] = L.minus[a];
                nb[m++] = L.plus[a];
            }
            double lap = -2.0 * N * u[c];
            trip.emplace_back(c, c, 1.0 + 2.0 * N * r);
            for (int k = 0; k < m; ++k) {
                lap += u[c + nb[k]];
                trip.emplace_back(c, c + nb[k], -r);
            }
            const double yp = j == ny - 1 ? u[c - 1] : u[c + 1];
            double b = u[c] + r * lap + dt * eval_f(spec_, u[c]);
            if (V != 0.0) b += dt * V * (yp - u[c]) / h;
            rhs[c] = b;
        }
    }
    field.time += dt;
    field.origin[N - 1] += V * dt;
    if (!neumann) {
        apply_boundary(field, boundary);
        for (std::size_t c : dirichlet_rows) rhs[c] = field.values[c];
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::DiagonalPreconditioner<double>> solver;
    solver.setTolerance(cfg_.imex_tol);
    solver.compute(A);
    Eigen::Map<Eigen::VectorXd> guess(field.values.data(), n);
    Eigen::VectorXd x = solver.solveWithGuess(rhs, guess);
    if (solver.info() != Eigen::Success) throw NumericalError("pde: implicit solve did not converge");
    StepStats st;
    std::copy(x.data(), x.data() + n, field.values.begin());
    guard_run(field.values.data(), static_cast<int>(n), st);
    finish_step(field, st.violations, st.non_finite);
}

void CauchySolver::step(GridField& field, double dt, const SpaceTimeField& boundary) const {
    if (field.N() < 2 || field.N() > 3) throw std::invalid_argument("pde: only N = 2 or 3 grids are supported");
    if (!(dt > 0.0)) throw std::invalid_argument("pde: dt must be positive");
    if (cfg_.scheme == Scheme::ExplicitEuler) explicit_step(field, dt, boundary);
    else imex_step(field, dt, boundary);
}

void CauchySolver::advance(GridField& field, double t1, const SpaceTimeField& boundary, const SnapshotSink& sink) const {
    const auto [dt, steps] = plan(field.time, t1, field.spacing, field.N());
    const double t0 = field.time;
    for (long long s = 1; s <= steps; ++s) {
        step(field, dt, boundary);
        if (s == steps) field.time = t1;
        else field.time = t0 + dt * static_cast<double>(s);
        if (sink && cfg_.snapshot_every > 0 && s % cfg_.snapshot_every == 0 && s != steps) sink(field);
    }
    if (sink) sink(field);
}

GridField CauchySolver::solve(const SpaceTimeField& initial, GridField grid, double t0, double t1,
                              const SpaceTimeField& boundary, const SnapshotSink& sink) const {
    if (!initial) throw std::invalid_argument("pde: missing initial evaluator");
    grid.time = t0;
    grid.clamp_violations = 0;
    sample_field(grid, initial);
    if (sink) sink(grid);
    advance(grid, t1, boundary, sink);
    return grid;
}

}  // namespace front_forge
