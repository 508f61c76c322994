#include "front_forge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace front_forge {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

FrontArrangement make_arrangement(int N, std::vector<Front> fronts, double c_f) {
    if (N < 2 || N > kMaxSpaceDim)
        throw std::invalid_argument("geometry: N must lie in [2, " + std::to_string(kMaxSpaceDim) + "]");
    if (fronts.empty()) throw std::invalid_argument("geometry: need at least one front");
    if (!std::isfinite(c_f)) throw std::invalid_argument("geometry: c_f must be finite");

    FrontArrangement a;
    a.N_ = N;
    a.c_f_ = c_f;
    const int n = static_cast<int>(fronts.size());
    a.wx_.assign(static_cast<std::size_t>(n) * kMaxSpaceDim, 0.0);
    a.wy_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        Front& f = fronts[i];
        const std::string tag = "geometry: front " + std::to_string(i);
        if (static_cast<int>(f.nu.size()) != N - 1) throw std::invalid_argument(tag + ": nu must have N-1 components");
        const double norm = std::sqrt(dot(f.nu, f.nu));
        if (std::abs(norm - 1.0) > 1e-12) throw std::invalid_argument(tag + ": nu must be a unit vector");
        if (!(f.theta > 0.0) || f.theta > std::numbers::pi / 2 + 1e-15)
            throw std::invalid_argument(tag + ": theta must lie in (0, pi/2]");
        if (!std::isfinite(f.tau)) throw std::invalid_argument(tag + ": tau must be finite");
        for (int k = 0; k < N - 1; ++k) a.wx_[i * kMaxSpaceDim + k] = f.nu[k] * std::cos(f.theta);
        a.wy_[i] = std::sin(f.theta);
    }
    a.fronts_ = std::move(fronts);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dot(a.direction(i), a.direction(j)) > 1.0 - 1e-12)
                throw std::invalid_argument("geometry: fronts " + std::to_string(i) + " and " +
                                            std::to_string(j) + " share a direction");
        }
    }
    return a;
}

std::vector<double> FrontArrangement::direction(int i) const {
    std::vector<double> e(N_);
    for (int k = 0; k < N_ - 1; ++k) e[k] = wx(i, k);
    e[N_ - 1] = wy(i);
    return e;
}

FrontArrangement FrontArrangement::with_tau(const std::vector<double>& tau) const {
    if (static_cast<int>(tau.size()) != n()) throw std::invalid_argument("geometry: tau size mismatch");
    FrontArrangement b = *this;
    for (int i = 0; i < n(); ++i) b.fronts_[i].tau = tau[i];
    return b;
}

FrontArrangement arrangement_from_raw(const std::vector<std::vector<double>>& e,
                                      const std::vector<double>& e0,
                                      const std::vector<double>& tau, double c_f) {
    const int N = static_cast<int>(e0.size());
    if (e.size() != tau.size()) throw std::invalid_argument("geometry: tau size mismatch");
    const double n0 = std::sqrt(dot(e0, e0));
    if (!(n0 > 0.0)) throw std::invalid_argument("geometry: e0 must be nonzero");

    // v = e0/|e0| - e_N; H = I - 2 v v^T / v.v maps e0/|e0| onto e_N.
    std::vector<double> v(N);
    for (int k = 0; k < N; ++k) v[k] = e0[k] / n0;
    v[N - 1] -= 1.0;
    const double vv = dot(v, v);

    std::vector<Front> fronts;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (static_cast<int>(e[i].size()) != N) throw std::invalid_argument("geometry: e_i has wrong dimension");
        std::vector<double> r = e[i];
        const double ne = std::sqrt(dot(r, r));
        for (double& c : r) c /= ne;
        if (vv > 1e-30) {
            const double s = 2.0 * dot(v, r) / vv;
            for (int k = 0; k < N; ++k) r[k] -= s * v[k];
        }
        if (!(r[N - 1] > 0.0)) throw std::invalid_argument("geometry: e_i . e0 must be positive");
        Front f;
        f.tau = tau[i];
        std::vector<double> xpart(r.begin(), r.end() - 1);
        const double c = std::sqrt(dot(xpart, xpart));
        f.theta = std::atan2(r[N - 1], c);
        f.nu.assign(N - 1, 0.0);
        if (c > 1e-14) {
            for (int k = 0; k < N - 1; ++k) f.nu[k] = xpart[k] / c;
        } else {
            f.nu[0] = 1.0;
            f.theta = std::numbers::pi / 2;
        }
        fronts.push_back(std::move(f));
    }
    return make_arrangement(N, std::move(fronts), c_f);
}

FrontArrangement symmetric_pair(double alpha0, double c_f, double tau) {
    return make_arrangement(2, {{{1.0}, alpha0, tau}, {{-1.0}, alpha0, tau}}, c_f);
}

double signed_plane_coord(const FrontArrangement& arr, int i, double t, std::span<const double> x,
                          double y, double scale) {
    double q = arr.wy(i) * y - arr.c_f() * t + scale * arr.front(i).tau;
    for (int k = 0; k < arr.N() - 1; ++k) q += arr.wx(i, k) * x[k];
    return q;
}

std::pair<double, int> min_plane_coord(const FrontArrangement& arr, double t, std::span<const double> x,
                                       double y, double scale) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int i = 0; i < arr.n(); ++i) {
        double q = signed_plane_coord(arr, i, t, x, y, scale);
        if (q < best) {
            best = q;
            arg = i;
        }
    }
    return {best, arg};
}

double ridge_distance_proxy(const FrontArrangement& arr, double t, std::span<const double> x, double y,
                            double scale) {
    if (arr.n() < 2) throw std::invalid_argument("no ridges");
    // Space-time normals n_i = (-c_f, nu_i cos theta_i, sin theta_i); |n_i|^2 = c_f^2 + 1.
    const double c = arr.c_f();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> q(arr.n());
    for (int i = 0; i < arr.n(); ++i) q[i] = signed_plane_coord(arr, i, t, x, y, scale);
    for (int i = 0; i < arr.n(); ++i) {
        for (int j = i + 1; j < arr.n(); ++j) {
            double gij = c * c + arr.wy(i) * arr.wy(j);
            for (int k = 0; k < arr.N() - 1; ++k) gij += arr.wx(i, k) * arr.wx(j, k);
            const double gii = c * c + 1.0, gjj = c * c + 1.0;
            const double det = gii * gjj - gij * gij;
            // r^T G^{-1} r with G the 2x2 Gram matrix.
            const double d2 = (gjj * q[i] * q[i] - 2.0 * gij * q[i] * q[j] + gii * q[j] * q[j]) / det;
            best = std::min(best, std::sqrt(std::max(d2, 0.0)));
        }
    }
    return best;
}

RotatedFamily choose_rotation_weights(const FrontArrangement& arr, int i) {
    if (i < 0 || i >= arr.n()) throw std::out_of_range("geometry: facet index out of range");
    const int n = arr.n();
    const auto ei = arr.direction(i);
    double bound2 = std::numeric_limits<double>::infinity();
    for (int l = 0; l < n; ++l) {
        if (l == i) continue;
        const double d = dot(ei, arr.direction(l));
        if (d >= 1.0) throw std::invalid_argument("geometry: degenerate arrangement");
        bound2 = std::min(bound2, (1.0 - d) / (2.0 - d));
    }
    RotatedFamily fam;
    fam.i = i;
    fam.gamma.assign(n, 1.0);
    fam.lambda.assign(n, 0.0);
    const double si = arr.wy(i);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double bound1 = si / (si + arr.wy(j));
        fam.lambda[j] = 0.5 * std::min(bound1, bound2);
        fam.gamma[j] = 1.0 - fam.lambda[j];
    }
    return fam;
}

std::pair<double, double> rotation_slack(const FrontArrangement& arr, const RotatedFamily& fam) {
    const int i = fam.i;
    const auto ei = arr.direction(i);
    double s1 = std::numeric_limits<double>::infinity();
    double s2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < arr.n(); ++j) {
        s1 = std::min(s1, fam.gamma[j] * arr.wy(i) - fam.lambda[j] * arr.wy(j));
        if (j == i) continue;
        for (int l = 0; l < arr.n(); ++l) {
            if (l == i) continue;
            s2 = std::min(s2, fam.gamma[j] * (1.0 - dot(ei, arr.direction(l))) - fam.lambda[j]);
        }
    }
    return {s1, s2};
}

double rotated_coord(const FrontArrangement& arr, const RotatedFamily& fam, int j, double t,
                     std::span<const double> x, double y, double scale) {
    return -fam.gamma[j] * signed_plane_coord(arr, fam.i, t, x, y, scale) +
           fam.lambda[j] * signed_plane_coord(arr, j, t, x, y, scale);
}

}  // namespace front_forge
