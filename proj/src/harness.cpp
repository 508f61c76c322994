#include "front_forge/harness.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace front_forge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFlatFloor = 1e-8;

double dyadic(double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 8)), -8); }

std::string tag(const std::string& base, double v) {
    std::ostringstream s;
    s << base << "[" << v << "]";
    return s.str();
}

std::string tag(const std::string& base, int i) { return base + "[" + std::to_string(i) + "]"; }

Check info(Check c) {
    c.informational = true;
    return c;
}

template <class V>
double norm2(const V& v, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += v[k] * v[k];
    return std::sqrt(s);
}

double frobenius(const SurfaceDerivs& d) {
    double s = 0.0;
    for (int a = 0; a < d.dim; ++a)
        for (int b = 0; b < d.dim; ++b) s += d.hess_at(a, b) * d.hess_at(a, b);
    return std::sqrt(s);
}

double min_eigenvalue(const SurfaceDerivs& d) {
    if (d.dim == 1) return d.hess[0];
    Eigen::MatrixXd H(d.dim, d.dim);
    for (int a = 0; a < d.dim; ++a)
        for (int b = 0; b < d.dim; ++b) H(a, b) = d.hess_at(a, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SpaceTimeField lower_field(const Instance& inst) {
    auto lb = std::make_shared<LowerBarrier>(inst.arr, inst.prof);
    return [lb](double t, std::span<const double> pos) { return (*lb)(t, pos); };
}

SpaceTimeField upper_field(const Instance& inst, const BoundParams& params) {
    auto ub = std::make_shared<UpperBarrier>(inst.arr, inst.prof, params);
    return [ub](double t, std::span<const double> pos) { return (*ub)(t, pos); };
}

GridField sampled(const GridField& like, double t, const SpaceTimeField& f) {
    GridField g = like;
    g.time = t;
    sample_field(g, f);
    return g;
}

struct Extreme {
    double value = 0.0;
    long long used = 0;
    long long discarded = 0;
};

// Point near a surface: scaled (T, X) and normal offset xi, mapped back to lab coordinates and
// rounded to a dyadic lattice so every stencil offset is exact.
struct Placement {
    double t = 0.0;
    std::array<double, 4> pos{};
};

Placement place(const ImplicitSurface& surf, double alpha, double t_lab, double t_base, const double* X, int dim,
                double xi) {
    std::array<Real, kMaxX> Xs{};
    for (int k = 0; k < dim; ++k) Xs[k] = X[k];
    const SurfaceDerivs d = surf.derivatives(static_cast<Real>(alpha) * t_base, std::span<const Real>(Xs.data(), dim));
    Placement p;
    p.t = dyadic(t_lab);
    for (int k = 0; k < dim; ++k) p.pos[k] = dyadic(X[k] / alpha);
    p.pos[dim] = dyadic(static_cast<double>(d.y / static_cast<Real>(alpha)) + xi * std::sqrt(1.0 + d.grad_sq()));
    return p;
}

// sign = +1 tracks the minimum residual (supersolutions), -1 the maximum (subsolutions).
template <class Placer>
Extreme sweep(const ReactionSpec& spec, const ClippedField& u, Placer&& placer, int samples, Sampler& rng,
              double h, int sign, int N) {
    Extreme e;
    e.value = sign > 0 ? kInf : -kInf;
    for (int s = 0; s < samples; ++s) {
        const Placement p = placer(rng);
        const auto r = probe_residual(spec, u, p.t, std::span<const double>(p.pos.data(), N), h);
        if (!r) {
            ++e.discarded;
            continue;
        }
        ++e.used;
        e.value = sign > 0 ? std::min(e.value, *r) : std::max(e.value, *r);
    }
    return e;
}

Check residual_check(const std::string& name, const std::string& anchor, const Extreme& e, bool super, double tol) {
    Check c = super ? make_check(name, anchor, e.value, ">=", -tol, e.used) : make_check(name, anchor, e.value, "<=", tol, e.used);
    c.measured.push_back(static_cast<double>(e.discarded));
    c.note = "measured = [extreme residual, discarded samples]";
    if (e.used == 0) {
        c.pass = false;
        c.note += "; no usable samples";
    }
    return c;
}

ClippedField clipped_upper(std::shared_ptr<const UpperBarrier> ub) {
    return [ub](double t, std::span<const double> pos) {
        const auto d = ub->detail(t, pos);
        return std::pair{d.value, d.clipped};
    };
}

ClippedField clipped_sub(std::shared_ptr<const FacetSubsolution> sb) {
    return [sb](double t, std::span<const double> pos) {
        const auto d = sb->detail(t, pos);
        return std::pair{d.value, d.clipped};
    };
}

// Interior node indices; the Dirichlet layer is excluded from every field comparison.
std::vector<std::size_t> interior_nodes(const GridField& g) {
    std::vector<std::size_t> out;
    out.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g.on_boundary(i)) out.push_back(i);
    return out;
}

double sup_abs_diff(const GridField& a, const GridField& b, const std::vector<std::size_t>& nodes) {
    double s = 0.0;
    for (auto i : nodes) s = std::max(s, std::abs(a.values[i] - b.values[i]));
    return s;
}

double min_diff(const GridField& a, const GridField& b, const std::vector<std::size_t>& nodes) {
    double s = kInf;
    for (auto i : nodes) s = std::min(s, a.values[i] - b.values[i]);
    return s;
}

// Least squares y = a + b x; returns (b, R^2).
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) return {std::nan(""), 0.0};
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    const double b = sxy / sxx;
    const double r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return {b, r2};
}

}  // namespace

Instance make_instance(const ReactionSpec& spec, int N, std::vector<Front> fronts, const ProfileOptions& opts) {
    Instance inst;
    inst.spec = spec;
    inst.prof = solve_profile(spec, opts);
    inst.pc = profile_constants(inst.prof, spec);
    inst.arr = make_arrangement(N, std::move(fronts), inst.prof.c_f);
    return inst;
}

Instance with_tau(const Instance& base, const std::vector<double>& tau) {
    Instance inst = base;
    inst.arr = base.arr.with_tau(tau);
    return inst;
}

Calibration calibrate_constant(const FrontArrangement& arr, int samples, std::uint64_t seed, double safety,
                               const SampleBox& box) {
    if (samples <= 0) throw std::invalid_argument("calibration: samples must be positive");
    if (!(safety >= 1.0)) throw std::invalid_argument("calibration: safety factor must be >= 1");
    const int dim = arr.N() - 1;
    const int n = arr.n();
    const double c = arr.c_f();
    const auto phi = ImplicitSurface::phi(arr, 1.0);
    std::vector<ImplicitSurface> psis;
    if (n >= 2)
        for (int i = 0; i < n; ++i) psis.push_back(ImplicitSurface::psi(arr, choose_rotation_weights(arr, i), 1.0));

    Calibration cal;
    for (const char* key : {"phi_speed", "phi_curvature", "phi_plane", "psi_speed", "psi_curvature"}) cal.parts[key] = 0.0;
    auto bump = [&](const char* key, double v) { cal.parts[key] = std::max(cal.parts[key], v); };

    Sampler rng(seed);
    double X[kMaxX] = {};
    for (int s = 0; s < samples; ++s) {
        const double T = rng.uniform(-box.t_half, box.t_half);
        for (int k = 0; k < dim; ++k) X[k] = rng.uniform(-box.x_half, box.x_half);
        const std::span<const double> xs(X, dim);
        bool used = false;

        const SurfaceDerivs d = phi.derivatives(T, xs);
        if (d.flatness >= kFlatFloor) {
            const double h = d.flatness;
            const double r = (d.dt / std::sqrt(1.0 + d.grad_sq()) - c) / h;
            if (r > 0.0) bump("phi_speed", std::max(r, 1.0 / r));
            else ++cal.sign_violations;
            bump("phi_curvature", (norm2(d.grad_dt, dim) + frobenius(d)) / h);
            int top = 0;
            double best = -kInf;
            for (int j = 0; j < n; ++j) {
                const double ph = phi.plane_height(j, T, xs);
                if (ph > best) {
                    best = ph;
                    top = j;
                }
            }
            double gerr = 0.0;
            for (int k = 0; k < dim; ++k) {
                const double e = d.grad[k] + arr.wx(top, k) / arr.wy(top);
                gerr += e * e;
            }
            bump("phi_plane", (std::abs(d.dt - c / arr.wy(top)) + std::sqrt(gerr)) / h);
            used = true;
        }
        for (const auto& psi : psis) {
            const SurfaceDerivs p = psi.derivatives(T, xs);
            if (p.flatness < kFlatFloor) continue;
            const double r = (c - p.dt / std::sqrt(1.0 + p.grad_sq())) / p.flatness;
            if (r > 0.0) bump("psi_speed", std::max(r, 1.0 / r));
            else ++cal.sign_violations;
            bump("psi_curvature", (norm2(p.grad_dt, dim) + frobenius(p)) / p.flatness);
            used = true;
        }
        if (used) ++cal.samples_used;
    }
    cal.C_raw = 1.0;
    for (const auto& [k, v] : cal.parts) cal.C_raw = std::max(cal.C_raw, v);
    cal.C_emp = safety * cal.C_raw;
    return cal;
}

std::vector<Check> surface_check(const FrontArrangement& arr, const SurfaceCheckOptions& opts, std::uint64_t seed) {
    if (opts.samples <= 0) throw std::invalid_argument("surface check: samples must be positive");
    const int dim = arr.N() - 1;
    const int n = arr.n();
    const auto phi = ImplicitSurface::phi(arr, 1.0);
    const Real h = opts.fd_step;

    double res = 0.0, e_dt = 0.0, e_grad = 0.0, e_hess = 0.0, e_gdt = 0.0, eig = kInf, above = kInf;
    double psi_res = 0.0, psi_grad = 0.0;
    std::vector<ImplicitSurface> psis;
    if (n >= 2)
        for (int i = 0; i < n; ++i) psis.push_back(ImplicitSurface::psi(arr, choose_rotation_weights(arr, i), 1.0));

    Sampler rng(seed);
    std::array<Real, kMaxX> X{};
    for (int s = 0; s < opts.samples; ++s) {
        const Real T = rng.uniform(-opts.box.t_half, opts.box.t_half);
        for (int k = 0; k < dim; ++k) X[k] = rng.uniform(-opts.box.x_half, opts.box.x_half);
        const std::span<const Real> xs(X.data(), dim);
        const SurfaceDerivs d = phi.derivatives(T, xs);
        res = std::max(res, d.residual);

        const double fd_dt = static_cast<double>((phi.solve_height(T + h, xs) - phi.solve_height(T - h, xs)) / (2 * h));
        e_dt = std::max(e_dt, std::abs(fd_dt - d.dt));
        for (int k = 0; k < dim; ++k) {
            auto Xp = X, Xm = X;
            Xp[k] += h;
            Xm[k] -= h;
            const std::span<const Real> sp(Xp.data(), dim), sm(Xm.data(), dim);
            const double fd = static_cast<double>((phi.solve_height(T, sp) - phi.solve_height(T, sm)) / (2 * h));
            e_grad = std::max(e_grad, std::abs(fd - d.grad[k]));
            const SurfaceDerivs dp = phi.derivatives(T, sp), dm = phi.derivatives(T, sm);
            for (int a = 0; a < dim; ++a) {
                const double fdh = (dp.grad[a] - dm.grad[a]) / (2.0 * static_cast<double>(h));
                e_hess = std::max(e_hess, std::abs(fdh - d.hess_at(a, k)));
            }
        }
        const SurfaceDerivs dtp = phi.derivatives(T + h, xs), dtm = phi.derivatives(T - h, xs);
        for (int a = 0; a < dim; ++a)
            e_gdt = std::max(e_gdt, std::abs((dtp.grad[a] - dtm.grad[a]) / (2.0 * static_cast<double>(h)) - d.grad_dt[a]));
        eig = std::min(eig, min_eigenvalue(d));

        double xd[kMaxX];
        for (int k = 0; k < dim; ++k) xd[k] = static_cast<double>(X[k]);
        const std::span<const double> xds(xd, dim);
        above = std::min(above, static_cast<double>(d.y) - phi.envelope(static_cast<double>(T), xds));

        for (const auto& psi : psis) {
            const SurfaceDerivs p = psi.derivatives(T, xs);
            psi_res = std::max(psi_res, p.residual);
            for (int k = 0; k < dim; ++k) {
                auto Xp = X, Xm = X;
                Xp[k] += h;
                Xm[k] -= h;
                const double fd = static_cast<double>(
                    (psi.solve_height(T, std::span<const Real>(Xp.data(), dim)) -
                     psi.solve_height(T, std::span<const Real>(Xm.data(), dim))) / (2 * h));
                psi_grad = std::max(psi_grad, std::abs(fd - p.grad[k]));
            }
        }
    }
    const long long S = opts.samples;
    std::vector<Check> out;
    out.push_back(make_check("surface.phi.root_residual", "implicit-surface-equation", res, "<=", opts.residual_tol, S));
    out.push_back(make_check("surface.phi.dt_vs_fd", "surface-derivative-formulas", e_dt, "<=", opts.fd_tol, S));
    out.push_back(make_check("surface.phi.grad_vs_fd", "surface-derivative-formulas", e_grad, "<=", opts.fd_tol, S));
    out.push_back(make_check("surface.phi.hess_vs_fd", "surface-derivative-formulas", e_hess, "<=", opts.fd_tol, S));
    out.push_back(make_check("surface.phi.grad_dt_vs_fd", "surface-derivative-formulas", e_gdt, "<=", opts.fd_tol, S));
    out.push_back(make_check("surface.phi.min_hessian_eigenvalue", "surface-convexity", eig, ">=", opts.eig_floor, S));
    out.push_back(make_check("surface.phi.above_planes", "surface-inside-polytope", above, ">=", -1e-12, S));
    if (!psis.empty()) {
        const long long P = S * static_cast<long long>(psis.size());
        out.push_back(make_check("surface.psi.root_residual", "rotated-surface-equation", psi_res, "<=", opts.residual_tol, P));
        out.push_back(make_check("surface.psi.grad_vs_fd", "rotated-surface-derivatives", psi_grad, "<=", opts.fd_tol, P));
    }
    return out;
}

std::optional<double> probe_residual(const ReactionSpec& spec, const ClippedField& u, double t,
                                     std::span<const double> pos, double h) {
    const int N = static_cast<int>(pos.size());
    if (N < 1 || N > kMaxSpaceDim) throw std::invalid_argument("probe: bad dimension");
    std::array<double, kMaxSpaceDim> p{};
    std::copy(pos.begin(), pos.end(), p.begin());
    const std::span<const double> ps(p.data(), N);

    const auto c0 = u(t, ps);
    if (c0.second) return std::nullopt;
    double ut[2] = {0, 0}, lap[2] = {0, 0};
    for (int level = 0; level < 2; ++level) {
        const double s = level == 0 ? h : 0.5 * h;
        const auto tp = u(t + s, ps), tm = u(t - s, ps);
        if (tp.second || tm.second) return std::nullopt;
        ut[level] = (tp.first - tm.first) / (2.0 * s);
        for (int a = 0; a < N; ++a) {
            p[a] = pos[a] + s;
            const auto up = u(t, ps);
            p[a] = pos[a] - s;
            const auto um = u(t, ps);
            p[a] = pos[a];
            if (up.second || um.second) return std::nullopt;
            lap[level] += (up.first - 2.0 * c0.first + um.first) / (s * s);
        }
    }
    const double ut_r = (4.0 * ut[1] - ut[0]) / 3.0;
    const double lap_r = (4.0 * lap[1] - lap[0]) / 3.0;
    return ut_r - lap_r - eval_f(spec, c0.first);
}

std::vector<Check> verify_supersolution(const Instance& inst, const BoundParams& params, const ResidualOptions& opts,
                                        std::uint64_t seed) {
    if (opts.samples <= 0) throw std::invalid_argument("residual: samples must be positive");
    const int N = inst.arr.N(), dim = N - 1, n = inst.arr.n();
    const auto& spec = inst.spec;
    const auto& box = opts.box;
    std::vector<Check> out;

    auto surface_placer = [&](const ImplicitSurface& surf, double alpha) {
        return [&surf, alpha, dim, &box](Sampler& rng) {
            const double T = rng.uniform(-box.t_half, box.t_half);
            double X[kMaxX];
            for (int k = 0; k < dim; ++k) X[k] = rng.uniform(-box.x_half, box.x_half);
            const double xi = rng.uniform(-box.xi_half, box.xi_half);
            return place(surf, alpha, T / alpha, T / alpha, X, dim, xi);
        };
    };
    auto super_sweep = [&](const BoundParams& p, std::uint64_t s) {
        auto ub = std::make_shared<const UpperBarrier>(inst.arr, inst.prof, p, true);
        Sampler rng(s);
        return sweep(spec, clipped_upper(ub), surface_placer(ub->surface(), p.alpha), opts.samples, rng, opts.h, +1, N);
    };
    auto sub_sweep = [&](const BoundParams& p, int i, std::uint64_t s) {
        auto sb = std::make_shared<const FacetSubsolution>(inst.arr, inst.prof, p, i, true);
        const auto psi = ImplicitSurface::psi(inst.arr, sb->family(), p.alpha_sub);
        Sampler rng(s);
        return sweep(spec, clipped_sub(sb), surface_placer(psi, p.alpha_sub), opts.samples, rng, opts.h, -1, N);
    };

    // Admissible barriers.
    UpperBarrier(inst.arr, inst.prof, params);  // validates the parameters
    out.push_back(residual_check("super.u_bar.min_residual", "supersolution-inequality", super_sweep(params, seed), true, opts.tol));
    if (n == 1) {
        // A single front: u_bar is the planar front itself and solves the equation exactly. It has no
        // intrinsic scale, so it is probed at unit scale where lab coordinates stay small.
        auto ub = std::make_shared<const UpperBarrier>(inst.arr, inst.prof, params);
        const auto plane = ImplicitSurface::phi(inst.arr, 1.0);
        Sampler a(seed), b(seed);
        const auto lo = sweep(spec, clipped_upper(ub), surface_placer(plane, 1.0), opts.samples, a, opts.h, +1, N);
        const auto hi = sweep(spec, clipped_upper(ub), surface_placer(plane, 1.0), opts.samples, b, opts.h, -1, N);
        Check c = make_check("super.planar_exact", "planar-front-equation", std::max(std::abs(lo.value), std::abs(hi.value)),
                             "<=", 1e-9, lo.used);
        c.note = "max |N| for the single planar front";
        out.push_back(c);
    } else {
        // u_low < u_bar at points spread around the surface.
        const UpperBarrier ub(inst.arr, inst.prof, params);
        const LowerBarrier lb(inst.arr, inst.prof);
        auto placer = surface_placer(ub.surface(), params.alpha);
        Sampler rng(seed + 29);
        double gap = kInf;
        for (int s = 0; s < opts.samples; ++s) {
            const Placement p = placer(rng);
            const std::span<const double> pos(p.pos.data(), N);
            gap = std::min(gap, ub(p.t, pos) - lb(p.t, pos));
        }
        Check c = make_check("super.lower_below_upper", "barrier-ordering", gap, ">", 0.0, opts.samples);
        c.note = "min (u_bar - u_low) over sampled points";
        out.push_back(c);
    }
    if (n >= 2)
        for (int i = 0; i < n; ++i)
            out.push_back(residual_check(tag("super.u_sub.max_residual", i), "facet-subsolution-inequality",
                                         sub_sweep(params, i, seed + 101 + i), false, opts.tol));

    // Time-shifted pair, valid for t >= 0.
    if (opts.shifted) {
        const double horizon = opts.shift_horizon > 0.0 ? opts.shift_horizon : 5.0 / params.mu;
        auto ub = std::make_shared<const UpperBarrier>(inst.arr, inst.prof, params);
        const ShiftedBarrier plus([ub](double t, std::span<const double> x) { return (*ub)(t, x); }, params.omega,
                                  params.delta, params.mu, ShiftSign::Plus);
        const ClippedField uplus = [ub, plus](double t, std::span<const double> pos) {
            const auto d = ub->detail(t + plus.time_shift(t), pos);
            const double v = d.value + plus.offset(t);
            return std::pair{std::min(v, 1.0), d.clipped || v >= 1.0};
        };
        auto shifted_placer = [&, horizon](const ImplicitSurface& surf, double alpha, const ShiftedBarrier& sb, double dir) {
            return [&surf, alpha, dim, &box, &sb, dir, horizon, h = opts.h](Sampler& rng) {
                const double t = rng.uniform(h, horizon);
                double X[kMaxX];
                for (int k = 0; k < dim; ++k) X[k] = rng.uniform(-box.x_half, box.x_half);
                const double xi = rng.uniform(-box.xi_half, box.xi_half);
                return place(surf, alpha, t, t + dir * sb.time_shift(t), X, dim, xi);
            };
        };
        {
            Sampler rng(seed + 7);
            const auto e = sweep(spec, uplus, shifted_placer(ub->surface(), params.alpha, plus, +1.0), opts.samples, rng,
                                 opts.h, +1, N);
            out.push_back(residual_check("super.u_plus.min_residual", "shifted-supersolution", e, true, opts.tol));
        }
        if (n >= 2)
            for (int i = 0; i < n; ++i) {
                auto sb = std::make_shared<const FacetSubsolution>(inst.arr, inst.prof, params, i);
                const auto psi = ImplicitSurface::psi(inst.arr, sb->family(), params.alpha_sub);
                const ShiftedBarrier minus([sb](double t, std::span<const double> x) { return (*sb)(t, x); },
                                           params.omega, params.delta, params.mu, ShiftSign::Minus);
                const ClippedField uminus = [sb, minus](double t, std::span<const double> pos) {
                    const auto d = sb->detail(t - minus.time_shift(t), pos);
                    const double v = d.value - minus.offset(t);
                    return std::pair{std::max(v, 0.0), d.clipped || v <= 0.0};
                };
                Sampler rng(seed + 211 + i);
                const auto e = sweep(spec, uminus, shifted_placer(psi, params.alpha_sub, minus, -1.0), opts.samples,
                                     rng, opts.h, -1, N);
                out.push_back(residual_check(tag("super.u_minus.max_residual", i), "shifted-facet-subsolution", e,
                                             false, opts.tol));
            }
    }

    // Canaries: parameters outside the admissible range must show a violation. With one front the
    // correction term vanishes, so there is nothing to break.
    if (n == 1) return out;
    for (double m : opts.canary_multiples) {
        const BoundParams bad = with_epsilon(params, m * params.epsilon0);
        const auto e = super_sweep(bad, seed + 13);
        Check c = make_check(tag("super.canary.u_bar.eps_multiple", m), "supersolution-inequality", e.value, "<",
                             -opts.tol, e.used);
        c.note = "passes only if the inadmissible epsilon produces a residual below -tol";
        out.push_back(c);
        const auto es = sub_sweep(bad, 0, seed + 17);
        Check cs = make_check(tag("super.canary.u_sub.eps_multiple", m), "facet-subsolution-inequality", es.value, ">",
                              opts.tol, es.used);
        cs.note = "passes only if the inadmissible epsilon produces a residual above tol";
        out.push_back(cs);
    }
    // Power canary: the correction term with the wrong sign.
    BoundParams flipped = params;
    flipped.epsilon = -params.epsilon;
    const auto e = super_sweep(flipped, seed + 19);
    Check c = info(make_check("super.canary.u_bar.flipped_correction", "supersolution-inequality", e.value, "<",
                              -opts.tol, e.used));
    c.note = "u_bar with -eps h; shows the probe resolves the correction term";
    out.push_back(c);
    for (double m : opts.scan_multiples) {
        const auto es = super_sweep(with_epsilon(params, m * params.epsilon0), seed + 23);
        out.push_back(info(make_check(tag("super.scan.u_bar.eps_multiple", m), "supersolution-inequality", es.value,
                                      ">=", -opts.tol, es.used)));
    }
    return out;
}

GridField run_from_lower(const Instance& inst, const GridSpec& grid, const SolverConfig& cfg, double t_start,
                         double t_end) {
    SolverConfig c = cfg;
    c.frame_speed = 0.0;
    c.boundary = Boundary::DirichletFromEvaluator;
    const CauchySolver solver(inst.spec, c);
    const auto ul = lower_field(inst);
    return solver.solve(ul, grid.make(), t_start, t_end, ul);
}

EntireRun construct_entire(const Instance& inst, const BoundParams& params, const GridSpec& grid,
                           const SolverConfig& cfg, const ConstructOptions& opts) {
    if (opts.start_times.empty()) throw std::invalid_argument("construct: need at least one start time");
    for (std::size_t k = 0; k < opts.start_times.size(); ++k) {
        if (!(opts.start_times[k] < 0.0)) throw std::invalid_argument("construct: start times must be negative");
        if (k > 0 && !(opts.start_times[k] < opts.start_times[k - 1]))
            throw std::invalid_argument("construct: start times must be strictly decreasing");
    }
    if (!(opts.dt_probe > 0.0) || opts.dt_probe >= -opts.start_times.back())
        throw std::invalid_argument("construct: dt_probe must lie in (0, |deepest start|)");

    EntireRun run;
    run.start_times = opts.start_times;
    run.dt_probe = opts.dt_probe;
    SolverConfig c = cfg;
    c.frame_speed = 0.0;
    c.boundary = Boundary::DirichletFromEvaluator;
    const CauchySolver solver(inst.spec, c);
    const auto ul = lower_field(inst);

    for (std::size_t k = 0; k < opts.start_times.size(); ++k) {
        const double t0 = opts.start_times[k];
        if (k + 1 == opts.start_times.size()) {
            GridField f = solver.solve(ul, grid.make(), t0, -opts.dt_probe, ul);
            run.U_prev = f;
            solver.advance(f, 0.0, ul);
            run.finals.push_back(f);
        } else {
            run.finals.push_back(solver.solve(ul, grid.make(), t0, 0.0, ul));
        }
    }
    run.U = run.finals.back();

    const auto nodes = interior_nodes(run.U);
    const GridField low = sampled(run.U, 0.0, ul);
    const GridField up = sampled(run.U, 0.0, upper_field(inst, params));
    run.beta = 0.0;
    for (std::size_t i = 0; i < up.size(); ++i)
        if (up.on_boundary(i)) run.beta = std::max(run.beta, up.values[i] - low.values[i]);
    run.constants["beta"] = run.beta;

    for (std::size_t k = 0; k < run.finals.size(); ++k) {
        const auto& f = run.finals[k];
        const double n_k = -opts.start_times[k];
        Check lo = make_check(tag("construct.sandwich_lower", n_k), "sandwich-ordering", min_diff(f, low, nodes), ">=",
                              -opts.order_tol, static_cast<long long>(nodes.size()));
        lo.note = "min (u_n - u_low) at t = 0 over interior nodes";
        run.checks.push_back(lo);
        double over = -kInf;
        for (auto i : nodes) over = std::max(over, f.values[i] - up.values[i] - run.beta);
        Check hi = make_check(tag("construct.sandwich_upper", n_k), "sandwich-ordering", over, "<=", 0.0,
                              static_cast<long long>(nodes.size()));
        hi.note = "max (u_n - u_bar - beta)";
        run.checks.push_back(hi);
        run.constants[tag("clamp_violations", n_k)] = static_cast<double>(f.clamp_violations);
    }

    std::vector<double> inc;
    for (std::size_t k = 0; k + 1 < run.finals.size(); ++k) {
        const auto& a = run.finals[k];
        const auto& b = run.finals[k + 1];
        const double n_k = -opts.start_times[k + 1];
        Check m = make_check(tag("construct.monotone_in_n", n_k), "monotone-construction", min_diff(b, a, nodes), ">=",
                             -opts.order_tol, static_cast<long long>(nodes.size()));
        m.note = "min (u_next - u_prev) at t = 0";
        run.checks.push_back(m);
        inc.push_back(sup_abs_diff(a, b, nodes));
        run.constants[tag("increment", n_k)] = inc.back();
    }
    for (std::size_t k = 0; k + 1 < inc.size(); ++k) {
        const double ratio = inc[k + 1] > 0.0 ? inc[k] / inc[k + 1] : kInf;
        Check r = make_check(tag("construct.increment_contraction", -opts.start_times[k + 2]), "monotone-construction",
                             ratio, ">=", opts.contraction, static_cast<long long>(nodes.size()));
        r.measured.push_back(inc[k]);
        r.measured.push_back(inc[k + 1]);
        r.note = "measured = [ratio, earlier increment, later increment]";
        run.checks.push_back(r);
    }

    if (opts.planar_lag_probe) {
        // Discretization lag of a single planar front on a small box with the same spacing.
        Instance single = inst;
        single.arr = make_arrangement(inst.arr.N(), {inst.arr.front(0)}, inst.prof.c_f);
        GridSpec small = grid;
        for (std::size_t a = 0; a < grid.dims.size(); ++a) {
            small.dims[a] = std::min(grid.dims[a], 128);
            const double centre = grid.lo[a] + 0.5 * grid.dx * (grid.dims[a] - 1);
            small.lo[a] = centre - 0.5 * grid.dx * (small.dims[a] - 1);
        }
        const GridField f = run_from_lower(single, small, cfg, opts.start_times.back(), 0.0);
        const GridField g1 = sampled(f, 0.0, lower_field(single));
        const double lag = min_diff(f, g1, interior_nodes(f));
        Check c = info(make_check("construct.planar_front_lag", "discretization", lag, ">=", -opts.order_tol,
                                  static_cast<long long>(f.size())));
        c.note = "min (u - g) for one planar front from the deepest start; sets the floor of the ordering checks";
        run.checks.push_back(c);
        run.constants["planar_front_lag"] = lag;
    }
    return run;
}

std::vector<Check> verify_asymptotics(const EntireRun& run, const Instance& inst, const BoundParams& params,
                                      const AsymptoticsOptions& opts) {
    const GridField& U = run.U;
    const int N = U.N();
    const GridField low = sampled(U, 0.0, lower_field(inst));
    const auto nodes = interior_nodes(U);

    std::vector<double> sup;
    double lower_gap = kInf, top = -kInf;
    double pos[4];
    for (auto i : nodes) {
        U.position(i, pos);
        const double d = ridge_distance_proxy(inst.arr, 0.0, std::span<const double>(pos, N - 1), pos[N - 1]);
        const auto b = static_cast<std::size_t>(d / opts.bucket_width);
        if (b >= sup.size()) sup.resize(b + 1, -1.0);
        sup[b] = std::max(sup[b], std::abs(U.values[i] - low.values[i]));
        lower_gap = std::min(lower_gap, U.values[i] - low.values[i]);
        top = std::max(top, U.values[i]);
    }
    std::vector<double> centers, logs, present;
    for (std::size_t b = 0; b < sup.size(); ++b)
        if (sup[b] >= 0.0) {
            present.push_back(sup[b]);
            if (b >= 1 && sup[b] > 0.0) {
                centers.push_back((b + 0.5) * opts.bucket_width);
                logs.push_back(std::log(sup[b]));
            }
        }
    const auto S = static_cast<long long>(nodes.size());
    std::vector<Check> out;

    double worst_rise = -kInf;
    for (std::size_t k = 1; k + 1 < present.size(); ++k) worst_rise = std::max(worst_rise, present[k + 1] - present[k]);
    Check mono = make_check("asym.bucket_sup_nonincreasing", "entire-solution-asymptotics",
                            present.size() > 2 ? worst_rise : 0.0, "<=", opts.order_tol, S);
    mono.note = "largest rise between consecutive buckets beyond the first";
    out.push_back(mono);

    const double n = inst.arr.n();
    const double budget = (n * n + 1.0) * params.epsilon + run.beta;
    Check far = make_check("asym.far_bucket", "entire-solution-asymptotics", present.empty() ? kInf : present.back(),
                           "<=", budget, S);
    far.note = "farthest bucket sup against (n^2 + 1) eps + beta";
    out.push_back(far);

    const auto [slope, r2] = linear_fit(centers, logs);
    out.push_back(make_check("asym.log_fit_slope", "entire-solution-asymptotics", slope, "<", 0.0,
                             static_cast<long long>(centers.size())));
    out.push_back(make_check("asym.log_fit_r2", "entire-solution-asymptotics", r2, ">=", opts.r2_min,
                             static_cast<long long>(centers.size())));
    out.push_back(make_check("asym.strict_lower_order", "entire-solution-ordering", lower_gap, ">", 0.0, S));
    out.push_back(make_check("asym.strict_upper_order", "entire-solution-ordering", top, "<", 1.0, S));
    Check profile = info(make_check("asym.bucket_sups", "entire-solution-asymptotics",
                                    present.empty() ? 0.0 : present.front(), ">=", 0.0, S));
    profile.measured = present;
    profile.note = "sup |U - u_low| per ridge-distance bucket of width " + std::to_string(opts.bucket_width);
    out.push_back(profile);
    return out;
}

std::vector<Check> verify_monotonicity(const EntireRun& run, const Instance& inst, double rho, double shift,
                                       double order_tol) {
    const GridField& U = run.U;
    const int N = U.N();
    if (run.U_prev.size() != U.size()) throw std::invalid_argument("monotonicity: missing earlier snapshot");
    const auto nodes = interior_nodes(U);
    double k_rho = kInf;
    long long count = 0;
    double pos[4];
    for (auto i : nodes) {
        U.position(i, pos);
        const double q = min_plane_coord(inst.arr, 0.0, std::span<const double>(pos, N - 1), pos[N - 1]).first;
        if (std::abs(q) > rho) continue;
        ++count;
        k_rho = std::min(k_rho, (U.values[i] - run.U_prev.values[i]) / run.dt_probe);
    }
    std::vector<Check> out;
    Check k = make_check("mono.time_derivative_floor", "time-monotonicity", k_rho, ">", 0.0, count);
    k.note = "k(rho): min discrete time derivative where |min_i q_i| <= rho = " + std::to_string(rho);
    out.push_back(k);

    // U(0, x - x0) >= U(0, x) for x0 = s e_y, which satisfies min_i x0.e_i >= 0.
    const int s = std::max(1, static_cast<int>(std::lround(shift / U.spacing)));
    double worst = kInf;
    long long m = 0;
    for (auto i : nodes) {
        auto ijk = U.unravel(i);
        if (ijk[N - 1] - s < 1) continue;
        ijk[N - 1] -= s;
        worst = std::min(worst, U.values[U.index(ijk)] - U.values[i]);
        ++m;
    }
    double step = kInf;
    for (auto i : nodes) step = std::min(step, U.values[i] - run.U_prev.values[i]);
    Check ts = make_check("mono.time_translation", "translation-monotonicity", step, ">=", -order_tol,
                          static_cast<long long>(nodes.size()));
    ts.note = "min U(0, x) - U(-dt_probe, x) over all interior nodes";
    out.push_back(ts);

    Check tr = make_check("mono.translation", "translation-monotonicity", worst, ">=", -order_tol, m);
    tr.note = "min U(0, x - x0) - U(0, x) with x0 = " + std::to_string(s * U.spacing) + " e_y";
    out.push_back(tr);
    return out;
}

std::vector<Check> stability_experiment(const EntireRun& run, const Instance& inst, const SolverConfig& cfg,
                                        const StabilityOptions& opts, StabilityTrace* trace) {
    const int N = run.U.N();
    if (opts.checkpoints < 2) throw std::invalid_argument("stability: need at least two checkpoints");
    const double c = inst.prof.c_f;
    const double T = opts.T > 0.0 ? opts.T : 30.0 / c;

    std::vector<double> zero(N - 1, 0.0);
    int top = 0;
    double best = -kInf;
    for (int j = 0; j < inst.arr.n(); ++j) {
        const double y = -inst.arr.front(j).tau / inst.arr.wy(j);
        if (y > best) {
            best = y;
            top = j;
        }
    }
    const double V = opts.frame_speed >= 0.0 ? opts.frame_speed : c / inst.arr.wy(top);
    std::vector<double> center = opts.center;
    if (center.empty()) {
        center.assign(N, 0.0);
        center[N - 1] = best;
    }
    if (static_cast<int>(center.size()) != N) throw std::invalid_argument("stability: center has wrong dimension");

    SolverConfig sc = cfg;
    sc.frame_speed = V;
    sc.boundary = Boundary::DirichletFromEvaluator;
    const CauchySolver solver(inst.spec, sc);
    const auto ul = lower_field(inst);
    const auto nodes = interior_nodes(run.U);

    auto perturbed = [&](double sign, long long& clamped) {
        GridField u = run.U;
        double pos[4];
        clamped = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            u.position(i, pos);
            double r2 = 0.0;
            for (int a = 0; a < N; ++a) r2 += (pos[a] - center[a]) * (pos[a] - center[a]);
            const double r = std::sqrt(r2);
            if (r >= opts.radius) continue;
            const double bump = std::cos(0.5 * M_PI * r / opts.radius);
            const double v = u.values[i] + sign * opts.amplitude * bump * bump;
            if (v < 0.0 || v > 1.0) ++clamped;
            u.values[i] = std::clamp(v, 0.0, 1.0);
        }
        return u;
    };

    // The reference and both perturbed fields advance together between checkpoints.
    StabilityTrace tr;
    long long clamped = 0, clamped_flip = 0;
    GridField ref = run.U;
    std::vector<GridField> us;
    us.push_back(perturbed(+1.0, clamped));
    if (opts.two_sided) us.push_back(perturbed(-1.0, clamped_flip));
    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.D.push_back(sup_abs_diff(us[0], ref, nodes));
        if (us.size() > 1) tr.D_flipped.push_back(sup_abs_diff(us[1], ref, nodes));
    };
    record(0.0);
    for (int k = 1; k <= opts.checkpoints; ++k) {
        const double t = T * k / opts.checkpoints;
        solver.advance(ref, t, ul);
        for (auto& u : us) solver.advance(u, t, ul);
        record(t);
    }

    std::vector<Check> out;
    auto judge = [&](const std::vector<double>& D, const std::string& suffix, bool informational) {
        const double ratio = D.front() > 0.0 ? D.back() / D.front() : 0.0;
        Check d = make_check("stability.decay" + suffix, "stability-of-entire-solution", ratio, "<=", opts.decay,
                             static_cast<long long>(nodes.size()));
        d.measured.push_back(D.front());
        d.measured.push_back(D.back());
        d.note = "measured = [D(T)/D(0), D(0), D(T)], T = " + std::to_string(T);
        d.informational = informational;
        out.push_back(d);
        const auto first = static_cast<std::size_t>(std::ceil(opts.burn_in_fraction * opts.checkpoints));
        double rise = -kInf;
        for (std::size_t k = first; k + 1 < D.size(); ++k) rise = std::max(rise, D[k + 1] - D[k]);
        Check m = make_check("stability.monotone_after_burn_in" + suffix, "stability-of-entire-solution",
                             first + 1 < D.size() ? rise : 0.0, "<=", 0.0, static_cast<long long>(D.size()));
        m.informational = informational;
        m.note = "largest increase of D between checkpoints after burn-in";
        out.push_back(m);
    };
    judge(tr.D, "", false);
    if (opts.two_sided) judge(tr.D_flipped, ".flipped", true);
    Check cl = info(make_check("stability.clamped_nodes", "stability-of-entire-solution", static_cast<double>(clamped),
                               ">=", 0.0, static_cast<long long>(run.U.size())));
    cl.measured.push_back(static_cast<double>(clamped_flip));
    cl.note = "initial nodes clamped into [0, 1] (bump, flipped bump)";
    out.push_back(cl);
    Check dt = info(make_check("stability.D_trace", "stability-of-entire-solution", tr.D.front(), ">=", 0.0,
                               static_cast<long long>(tr.D.size())));
    dt.measured = tr.D;
    dt.note = "D at " + std::to_string(opts.checkpoints + 1) + " equally spaced checkpoints on [0, T]";
    out.push_back(dt);
    if (trace) *trace = tr;
    return out;
}

std::vector<Check> regression_vfront(const EntireRun& run, const Instance& inst, double alpha0,
                                     const VFrontOptions& opts) {
    const GridField& U = run.U;
    if (U.N() != 2 || inst.arr.n() != 2) throw std::invalid_argument("vfront: needs a 2D pair");
    const int nx = U.dims[0], ny = U.dims[1];
    const double dx = U.spacing;
    const double x_lo = U.origin[0], x_hi = U.origin[0] + dx * (nx - 1);
    const double outer = std::min({opts.x_outer, -x_lo - 2.0, x_hi - 2.0});

    std::vector<double> xr, yr, xl, yl;
    for (int i = 1; i < nx - 1; ++i) {
        const double x = x_lo + dx * i;
        const double ax = std::abs(x);
        if (ax < opts.x_inner || ax > outer) continue;
        // lowest crossing of 1/2 going up the column
        for (int j = 1; j < ny - 2; ++j) {
            const double a = U.values[U.index({i, j, 0, 0})], b = U.values[U.index({i, j + 1, 0, 0})];
            if (a >= 0.5 && b < 0.5) {
                const double y = U.origin[1] + dx * (j + (a - 0.5) / (a - b));
                (x > 0 ? xr : xl).push_back(x);
                (x > 0 ? yr : yl).push_back(y);
                break;
            }
        }
    }
    const double cot = 1.0 / std::tan(alpha0);
    const auto [br, r2r] = linear_fit(xr, yr);
    const auto [bl, r2l] = linear_fit(xl, yl);
    std::vector<Check> out;
    Check cr = make_check("vfront.slope_right", "v-shaped-front", std::abs(br - cot) / cot, "<=", opts.slope_tol,
                          static_cast<long long>(xr.size()));
    cr.measured.push_back(br);
    cr.note = "relative error of the right branch slope against cot(alpha0); measured[1] = slope";
    out.push_back(cr);
    Check cl = make_check("vfront.slope_left", "v-shaped-front", std::abs(bl + cot) / cot, "<=", opts.slope_tol,
                          static_cast<long long>(xl.size()));
    cl.measured.push_back(bl);
    cl.note = "relative error of the left branch slope against -cot(alpha0); measured[1] = slope";
    out.push_back(cl);
    out.push_back(info(make_check("vfront.branch_symmetry", "v-shaped-front", std::abs(br + bl), "<=", 1e-6,
                                  static_cast<long long>(xr.size() + xl.size()))));

    const GridField low = sampled(U, 0.0, lower_field(inst));
    double planar = 0.0;
    long long m = 0;
    for (auto i : interior_nodes(U)) {
        const auto ijk = U.unravel(i);
        const double ax = std::abs(x_lo + dx * ijk[0]);
        if (ax < opts.planar_inner || ax > outer) continue;
        planar = std::max(planar, std::abs(U.values[i] - low.values[i]));
        ++m;
    }
    Check p = make_check("vfront.planar_far_from_apex", "v-shaped-front", planar, "<=", opts.planar_tol, m);
    p.note = "sup |U - max_i g(plane_i)| for |x| in [" + std::to_string(opts.planar_inner) + ", " + std::to_string(outer) + "]";
    out.push_back(p);
    return out;
}

std::vector<Check> regression_pyramid(const EntireRun& run, const Instance& inst, double far_distance) {
    const GridField& U = run.U;
    if (U.N() != 3) throw std::invalid_argument("pyramid: needs a 3D run");
    const GridField low = sampled(U, 0.0, lower_field(inst));
    const auto nodes = interior_nodes(U);
    double gap = kInf, far_sup = 0.0, all_sup = 0.0;
    long long far = 0;
    double pos[4];
    for (auto i : nodes) {
        const double d = U.values[i] - low.values[i];
        gap = std::min(gap, d);
        all_sup = std::max(all_sup, std::abs(d));
        U.position(i, pos);
        if (ridge_distance_proxy(inst.arr, 0.0, std::span<const double>(pos, 2), pos[2]) >= far_distance) {
            far_sup = std::max(far_sup, std::abs(d));
            ++far;
        }
    }
    std::vector<Check> out;
    Check lb = make_check("pyramid.strict_lower_bound", "pyramidal-front", gap, ">", 0.0,
                          static_cast<long long>(nodes.size()));
    lb.note = "min (U - max_i g(plane_i)) over interior nodes";
    out.push_back(lb);
    Check ap = info(make_check("pyramid.far_from_ridges", "pyramidal-front", far_sup, "<", all_sup, far));
    ap.measured.push_back(all_sup);
    ap.note = "sup |U - u_low| at ridge distance >= " + std::to_string(far_distance) + " against the global sup";
    out.push_back(ap);
    return out;
}

std::vector<Check> tau_continuity_probe(const Instance& inst, const GridSpec& grid, const SolverConfig& cfg,
                                        const TauProbeOptions& opts) {
    if (opts.dtaus.size() < 2) throw std::invalid_argument("tau probe: need two step sizes");
    if (opts.front < 0 || opts.front >= inst.arr.n()) throw std::invalid_argument("tau probe: bad front index");
    const GridField base = run_from_lower(inst, grid, cfg, opts.start_time, 0.0);
    const auto nodes = interior_nodes(base);
    std::vector<double> tau;
    for (const auto& f : inst.arr.fronts()) tau.push_back(f.tau);

    std::vector<Check> out;
    std::vector<double> sups;
    for (double dtau : opts.dtaus) {
        auto t2 = tau;
        t2[opts.front] += dtau;
        const GridField moved = run_from_lower(with_tau(inst, t2), grid, cfg, opts.start_time, 0.0);
        sups.push_back(sup_abs_diff(moved, base, nodes));
        double rise = -kInf;
        for (auto i : nodes) rise = std::max(rise, moved.values[i] - base.values[i]);
        Check d = make_check(tag("tau.decreasing", dtau), "monotone-in-shift", rise, "<=", opts.order_tol,
                             static_cast<long long>(nodes.size()));
        d.note = "max (U(tau + dtau e_i) - U(tau))";
        out.push_back(d);
        Check k = info(make_check(tag("tau.lipschitz_K", dtau), "continuity-in-shift", sups.back() / dtau, ">=", 0.0,
                                  static_cast<long long>(nodes.size())));
        k.measured.push_back(sups.back());
        k.note = "measured = [sup difference / dtau, sup difference]";
        out.push_back(k);
    }
    const double ratio = sups[1] > 0.0 ? sups[0] / sups[1] : kInf;
    const double expected = opts.dtaus[0] / opts.dtaus[1];
    Check lo = make_check("tau.ratio_lower", "continuity-in-shift", ratio, ">=", opts.ratio_lo, 2);
    lo.note = "sup difference ratio between the two step sizes (step ratio " + std::to_string(expected) + ")";
    out.push_back(lo);
    out.push_back(make_check("tau.ratio_upper", "continuity-in-shift", ratio, "<=", opts.ratio_hi, 2));
    return out;
}

}  // namespace front_forge
