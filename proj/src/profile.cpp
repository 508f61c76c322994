#include "front_forge/profile.hpp"

#include "front_forge/errors.hpp"

#include <json.hpp>

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/interpolators/quintic_hermite.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>

namespace front_forge {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;
using Hermite = boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>;
using Quintic = boost::math::interpolators::cardinal_quintic_hermite<std::vector<double>>;

class ProfileInterp {
public:
    ProfileInterp(const FrontProfile& p, std::vector<double> gppp)
        : x0_(p.xi_grid.front()),
          xf_(p.xi_grid.front() + (p.xi_grid.size() - 1) / (1.0 / p.dxi)),
          g_(std::vector<double>(p.g_vals), std::vector<double>(p.gp_vals), std::vector<double>(p.gpp_vals), x0_, p.dxi),
          gp_(std::vector<double>(p.gp_vals), std::vector<double>(p.gpp_vals), x0_, p.dxi),
          gpp_(std::vector<double>(p.gpp_vals), std::move(gppp), x0_, p.dxi),
          lp_(p.lambda_plus), lm_(p.lambda_minus),
          kq_(p.tail_quad_plus),
          kqm_(p.tail_quad_minus),
          ap_(p.tail_amp_plus * std::exp(p.lambda_plus * xf_)),
          am_(p.tail_amp_minus * std::exp(p.lambda_minus * x0_)) {}

    // order 0, 1, 2 -> g, g', g''
    double eval(double xi, int order) const {
        if (xi > xf_) {
            const double e = ap_ * std::exp(lp_ * (xi - xf_));
            const double q = kq_ * e * e;
            return order == 0 ? e + q : order == 1 ? lp_ * (e + 2.0 * q) : lp_ * lp_ * (e + 4.0 * q);
        }
        if (xi < x0_) {
            const double e = am_ * std::exp(lm_ * (xi - x0_));
            const double q = kqm_ * e * e;
            return order == 0 ? 1.0 - e - q : order == 1 ? -lm_ * (e + 2.0 * q) : -lm_ * lm_ * (e + 4.0 * q);
        }
        return order == 0 ? g_(xi) : order == 1 ? gp_(xi) : gpp_(xi);
    }

private:
    double x0_, xf_;
    Quintic g_;
    Hermite gp_, gpp_;
    double lp_, lm_, kq_, kqm_, ap_, am_;
};

namespace {

enum class Shot { Overshoot, Undershoot, Undecided };

struct Rhs {
    const ReactionSpec* spec;
    double c;
    void operator()(const State& s, State& ds, double) const {
        ds[0] = s[1];
        ds[1] = -c * s[1] - eval_f(*spec, s[0]);
    }
};

auto make_stepper() {
    return odeint::make_dense_output(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
}

// Amplitude a with a E + kappa (a E)^2 = value.
double quad_tail_amp(double value, double E, double kappa) {
    if (kappa == 0.0) return value / E;
    return 2.0 * value / (E * (1.0 + std::sqrt(1.0 + 4.0 * kappa * value)));
}

double root_plus(double c, double fp0) { return 0.5 * (-c - std::sqrt(c * c - 4.0 * fp0)); }
double root_minus(double c, double fp1) { return 0.5 * (-c + std::sqrt(c * c - 4.0 * fp1)); }

// f'' at the ends from one-sided second-order differences of f', so tabulated f is never
// evaluated outside [0, 1].
double fsecond_at(const ReactionSpec& spec, double u) {
    const double eta = 1e-4, d = u < 0.5 ? eta : -eta;
    return (-3.0 * eval_fprime(spec, u) + 4.0 * eval_fprime(spec, u + d) - eval_fprime(spec, u + 2.0 * d)) / (2.0 * d);
}

// Tail expansions to second order: g = a E + kappa_plus (a E)^2 near 0 and
// 1 - g = a E + kappa_minus (a E)^2 near 1, with E the linear decay mode.
double kappa_plus(const ReactionSpec& spec, double lp) {
    return -0.5 * fsecond_at(spec, 0.0) / (2.0 * lp * lp - spec.fprime0);
}
double kappa_minus(const ReactionSpec& spec, double lm) {
    return 0.5 * fsecond_at(spec, 1.0) / (2.0 * lm * lm - spec.fprime1);
}

// On the unstable manifold of 1, at 1 - g = delta0.
State start_state(const ReactionSpec& spec, double c, double delta0) {
    const double lm = root_minus(c, spec.fprime1), k = kappa_minus(spec, lm);
    const double a = quad_tail_amp(delta0, 1.0, k);
    return {1.0 - delta0, -lm * (a + 2.0 * k * a * a)};
}

Shot classify(const State& s) {
    if (s[0] < 0.0) return Shot::Overshoot;
    if (s[1] >= 0.0) return Shot::Undershoot;
    return Shot::Undecided;
}

Shot shoot(const ReactionSpec& spec, double c, const ProfileOptions& o) {
    Rhs rhs{&spec, c};
    auto st = make_stepper();
    st.initialize(start_state(spec, c, o.delta0), 0.0, 1e-3);
    while (st.current_time() < o.horizon) {
        st.do_step(rhs);
        Shot k = classify(st.current_state());
        if (k != Shot::Undecided) return k;
    }
    // Strong damping lets the orbit settle onto the node at theta without g' changing
    // sign; it never reached 0, so it is an undershoot.
    return st.current_state()[0] > 0.0 ? Shot::Undershoot : Shot::Undecided;
}

// Time between t_above (g > level) and t_below where the dense output crosses `level`; works in
// either integration direction.
template <class Stepper>
double locate_level(const Stepper& st, double t_above, double t_below, double level) {
    State s;
    for (int it = 0; it < 200 && std::abs(t_above - t_below) > 1e-15 * std::max(1.0, std::abs(t_below)); ++it) {
        double mid = 0.5 * (t_above + t_below);
        st.calc_state(mid, s);
        (s[0] > level ? t_above : t_below) = mid;
    }
    return 0.5 * (t_above + t_below);
}

// Controlled stepping that lands exactly on each requested time; dense output between steps is only
// fourth order and would leave g, g', g'' slightly inconsistent.
class NodeStepper {
public:
    NodeStepper(Rhs rhs, State s, double dir) : rhs_(rhs), s_(s), dt_(dir * 1e-3) {}
    const State& advance_to(double target) {
        while ((dt_ > 0 && t_ < target) || (dt_ < 0 && t_ > target)) {
            double h = dt_ > 0 ? std::min(dt_, target - t_) : std::max(dt_, target - t_);
            const bool clipped = h != dt_;
            if (ctl_.try_step(rhs_, s_, t_, h) == odeint::success) {
                if (!clipped || std::abs(h) > std::abs(dt_)) dt_ = h;
            } else {
                dt_ = h;
            }
        }
        return s_;
    }

private:
    Rhs rhs_;
    State s_;
    double t_ = 0.0, dt_;
    decltype(odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>())) ctl_ =
        odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
};

}  // namespace

FrontProfile solve_profile(const ReactionSpec& spec, const ProfileOptions& o) {
    if (!(o.Xi > 0.0) || !(o.dxi > 0.0) || o.dxi > o.Xi)
        throw std::invalid_argument("profile: need 0 < dxi <= Xi");
    if (!(o.tol_c > 0.0)) throw std::invalid_argument("profile: tol_c must be positive");

    FrontProfile p;
    int shots = 0;
    auto probe = [&](double c) { ++shots; return shoot(spec, c, o); };

    // Orientation probes.
    double lo = 0.0, hi = 1.0;
    Shot k_lo = probe(lo), k_hi = probe(hi);
    for (int grow = 0; k_hi == k_lo && grow < 8; ++grow) {
        hi *= 2.0;
        k_hi = probe(hi);
    }
    if (k_lo == k_hi || k_lo == Shot::Undecided || k_hi == Shot::Undecided)
        throw NumericalError("bisection bracket failure");

    // Coarse scan: the classification must switch exactly once.
    {
        Shot prev = k_lo;
        int switches = 0;
        for (int j = 1; j <= 16; ++j) {
            Shot k = probe(lo + (hi - lo) * j / 16.0);
            if (k == Shot::Undecided) continue;
            if (k != prev) ++switches;
            prev = k;
        }
        if (switches != 1) throw NumericalError("bisection bracket failure");
    }

    // Bisect to tol_c, then keep refining so the tabulated trajectory tracks the
    // heteroclinic deep into the right tail.
    const double tight = std::min(o.tol_c, 1e-14);
    while (hi - lo > tight) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        Shot k = probe(mid);
        if (k == Shot::Undecided) { lo = hi = mid; break; }
        if (k == k_lo) lo = mid; else hi = mid;
    }
    const double c = 0.5 * (lo + hi);
    p.c_f = c;
    p.c_bracket = hi - lo;
    p.shots = shots;
    p.lambda_plus = root_plus(c, spec.fprime0);
    p.lambda_minus = root_minus(c, spec.fprime1);

    // The left half comes forward from the state near 1 and the right half backward from the
    // two-term tail near 0; both directions are stable, and the halves meet at g = 1/2.
    Rhs rhs{&spec, c};
    const double lm = p.lambda_minus, lp = p.lambda_plus;
    const double kappa = kappa_plus(spec, lp), kappa_m = kappa_minus(spec, lm);
    p.tail_quad_plus = kappa;
    p.tail_quad_minus = kappa_m;
    const double a_cut = quad_tail_amp(o.tail_cut, 1.0, kappa);
    const State left_start = start_state(spec, c, o.delta0);
    const State right_start = {o.tail_cut, lp * (a_cut + 2.0 * kappa * a_cut * a_cut)};

    auto find_half = [&](const State& x0, double dir) {
        auto st = make_stepper();
        st.initialize(x0, 0.0, dir * 1e-3);
        while (std::abs(st.current_time()) < o.horizon) {
            auto [t0, t1] = st.do_step(rhs);
            const State& s = st.current_state();
            if (dir > 0 && s[0] <= 0.5) return locate_level(st, t0, t1, 0.5);
            if (dir < 0 && s[0] >= 0.5) return locate_level(st, t1, t0, 0.5);
            if (dir > 0 && classify(s) != Shot::Undecided) break;
            if (dir < 0 && (s[0] >= 1.0 || s[1] >= 0.0)) break;
        }
        throw NumericalError("profile: trajectory did not reach g = 1/2");
    };
    // Grid.
    const int n = static_cast<int>(std::llround(2.0 * o.Xi / o.dxi)) + 1;
    p.dxi = o.dxi;
    p.xi_grid.resize(n);
    for (int j = 0; j < n; ++j) p.xi_grid[j] = -o.Xi + j * o.dxi;
    p.Xi = p.xi_grid.back();
    p.g_vals.assign(n, 0.0);
    p.gp_vals.assign(n, 0.0);
    p.gpp_vals.assign(n, 0.0);
    std::vector<double> gppp(n, 0.0);
    int j0 = 0;  // first node with xi >= 0
    while (j0 < n && p.xi_grid[j0] < 0.0) ++j0;

    auto fill = [&](int j, const State& s) {
        p.g_vals[j] = s[0];
        p.gp_vals[j] = s[1];
        p.gpp_vals[j] = -c * s[1] - eval_f(spec, s[0]);
        gppp[j] = -c * p.gpp_vals[j] - eval_fprime(spec, s[0]) * s[1];
    };
    // Each half fills its nodes and ends on g = 1/2. The crossing is polished on that same run:
    // two integrations with different step sequences disagree at the level of the tolerance,
    // which would show up as a jump at the join.
    auto run_left = [&](double half) {
        NodeStepper ns(rhs, left_start, +1.0);
        for (int j = 0; j < j0; ++j)
            if (p.xi_grid[j] + half >= 0.0) fill(j, ns.advance_to(p.xi_grid[j] + half));
        return State(ns.advance_to(half));
    };
    auto run_right = [&](double half) {
        NodeStepper ns(rhs, right_start, -1.0);
        for (int j = n - 1; j >= j0; --j)
            if (p.xi_grid[j] + half <= 0.0) fill(j, ns.advance_to(p.xi_grid[j] + half));
        return State(ns.advance_to(half));
    };
    auto settle = [](auto&& run, double t) {
        for (int it = 0; it < 8; ++it) {
            const State s = run(t);
            const double d = (s[0] - 0.5) / s[1];
            if (std::abs(d) <= 1e-15 * std::max(1.0, std::abs(t))) return std::pair{t, s};
            t -= d;
        }
        return std::pair{t, run(t)};
    };
    const auto [s_half, left_end] = settle(run_left, find_half(left_start, +1.0));
    const auto [r_half, right_end] = settle(run_right, find_half(right_start, -1.0));
    p.join_slope_mismatch = std::abs(left_end[1] - right_end[1]) / std::abs(right_end[1]);

    const double xi_start = -s_half;
    const double xi_cut = -r_half;
    p.ode_left = xi_start;
    p.ode_right = xi_cut;
    const double am = quad_tail_amp(o.delta0, 1.0, kappa_m) * std::exp(lm * s_half);  // 1 - g = am E + kappa_m (am E)^2
    const double ap = a_cut * std::exp(-lp * xi_cut);                                 // g = ap E + kappa (ap E)^2
    for (int j = 0; j < n; ++j) {
        const double xi = p.xi_grid[j];
        if (xi < xi_start) {
            const double e = am * std::exp(lm * xi), q = kappa_m * e * e;
            p.g_vals[j] = 1.0 - e - q;
            p.gp_vals[j] = -lm * (e + 2.0 * q);
            p.gpp_vals[j] = -lm * lm * (e + 4.0 * q);
            gppp[j] = -lm * lm * lm * (e + 8.0 * q);
        } else if (xi > xi_cut) {
            const double e = ap * std::exp(lp * xi), q = kappa * e * e;
            p.g_vals[j] = e + q;
            p.gp_vals[j] = lp * (e + 2.0 * q);
            p.gpp_vals[j] = lp * lp * (e + 4.0 * q);
            gppp[j] = lp * lp * lp * (e + 8.0 * q);
        }
    }

    for (int j = 0; j < n; ++j) {
        if (!(p.gp_vals[j] < 0.0) || !(p.g_vals[j] > 0.0) || !(p.g_vals[j] < 1.0))
            throw NumericalError("profile monotonicity failure");
    }

    p.tail_amp_plus = ap;
    p.tail_amp_minus = am;
    p.interp = std::make_shared<ProfileInterp>(p, std::move(gppp));
    return p;
}

double eval_g(const FrontProfile& prof, double xi) {
    double g = prof.interp->eval(xi, 0);
    constexpr double tiny = std::numeric_limits<double>::min();
    return std::clamp(g, tiny, std::nextafter(1.0, 0.0));
}

double eval_gp(const FrontProfile& prof, double xi) { return prof.interp->eval(xi, 1); }

double eval_gpp(const FrontProfile& prof, double xi) { return prof.interp->eval(xi, 2); }

ProfileConstants profile_constants(const FrontProfile& prof, const ReactionSpec& spec) {
    auto invert = [&](double level) {
        double a = -prof.Xi, b = prof.Xi;
        while (eval_g(prof, a) < level) a *= 2.0;
        while (eval_g(prof, b) > level) b *= 2.0;
        for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
            double m = 0.5 * (a + b);
            (eval_g(prof, m) > level ? a : b) = m;
        }
        return b;
    };
    ProfileConstants k;
    const double r_plus = invert(spec.sigma);
    const double r_minus = -invert(1.0 - spec.sigma);
    k.R_sigma = std::max({r_plus, r_minus, 0.0});

    k.k_min = std::min(-eval_gp(prof, -k.R_sigma), -eval_gp(prof, k.R_sigma));
    for (std::size_t j = 0; j < prof.xi_grid.size(); ++j) {
        const double xi = prof.xi_grid[j];
        if (std::abs(xi) <= k.R_sigma) k.k_min = std::min(k.k_min, -prof.gp_vals[j]);
        const double a = std::abs(prof.gp_vals[j]), b = std::abs(prof.gpp_vals[j]);
        k.M_bound = std::max(k.M_bound, a + a * std::abs(xi) + b * std::abs(xi) + b * xi * xi);
    }
    if (!(k.k_min > 0.0)) throw NumericalError("profile: k_min is not positive");
    return k;
}

double profile_ode_residual(const FrontProfile& prof, const ReactionSpec& spec) {
    double r = 0.0;
    for (std::size_t j = 1; j + 1 < prof.xi_grid.size(); ++j) {
        const double res = prof.gpp_vals[j] + prof.c_f * prof.gp_vals[j] + eval_f(spec, prof.g_vals[j]);
        r = std::max(r, std::abs(res));
    }
    return r;
}

void write_profile_table(const FrontProfile& prof, const std::string& path) {
    static_assert(std::endian::native == std::endian::little, "payload is written in host order");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("profile: cannot write " + path);
    nlohmann::json h = {{"c_f", prof.c_f},
                        {"Xi", prof.Xi},
                        {"dxi", prof.dxi},
                        {"lambda_plus", prof.lambda_plus},
                        {"lambda_minus", prof.lambda_minus},
                        {"rows", prof.xi_grid.size()},
                        {"schema", "ff-profile-v1"}};
    out << h.dump() << '\n';
    for (std::size_t j = 0; j < prof.xi_grid.size(); ++j) {
        const double row[3] = {prof.g_vals[j], prof.gp_vals[j], prof.gpp_vals[j]};
        out.write(reinterpret_cast<const char*>(row), sizeof(row));
    }
    if (!out) throw std::runtime_error("profile: short write to " + path);
}

ProfileTable read_profile_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("profile: cannot read " + path);
    std::string line;
    std::getline(in, line);
    auto h = nlohmann::json::parse(line);
    ProfileTable t;
    t.c_f = h.at("c_f");
    t.Xi = h.at("Xi");
    t.dxi = h.at("dxi");
    t.lambda_plus = h.at("lambda_plus");
    t.lambda_minus = h.at("lambda_minus");
    const std::size_t rows = h.at("rows");
    t.g.resize(rows);
    t.gp.resize(rows);
    t.gpp.resize(rows);
    for (std::size_t j = 0; j < rows; ++j) {
        double row[3];
        in.read(reinterpret_cast<char*>(row), sizeof(row));
        if (!in) throw std::runtime_error("profile: truncated payload in " + path);
        t.g[j] = row[0];
        t.gp[j] = row[1];
        t.gpp[j] = row[2];
    }
    return t;
}

}  // namespace front_forge
