#include "front_forge/surface.hpp"

#include "front_forge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace front_forge {

namespace {

struct XBuf {
    std::array<Real, kMaxX> v{};
    std::span<const Real> span(int dim) const { return {v.data(), static_cast<std::size_t>(dim)}; }
};

XBuf widen(std::span<const double> x, int dim) {
    XBuf b;
    for (int k = 0; k < dim; ++k) b.v[k] = x[k];
    return b;
}

constexpr int kStackTerms = 64;

// Scratch space that stays on the stack for typical arrangement sizes.
struct Scratch {
    std::array<Real, kStackTerms> buf;
    std::vector<Real> heap;
    Real* p;
    explicit Scratch(int n) : p(buf.data()) {
        if (n > kStackTerms) {
            heap.resize(n);
            p = heap.data();
        }
    }
};

}  // namespace

ImplicitSurface ImplicitSurface::phi(const FrontArrangement& arr, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("surface: alpha must be positive");
    ImplicitSurface s;
    s.kind_ = SurfaceKind::Phi;
    s.dim_ = arr.N() - 1;
    const int n = arr.n();
    s.ct_.assign(n, -static_cast<Real>(arr.c_f()));
    s.wx_.assign(static_cast<std::size_t>(n) * kMaxX, 0.0L);
    s.wy_.resize(n);
    s.d_.resize(n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < s.dim_; ++k) s.wx_[j * kMaxX + k] = arr.wx(j, k);
        s.wy_[j] = arr.wy(j);
        s.d_[j] = static_cast<Real>(alpha) * arr.front(j).tau;
    }
    return s;
}

ImplicitSurface ImplicitSurface::psi(const FrontArrangement& arr, const RotatedFamily& fam, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("surface: alpha must be positive");
    const int n = arr.n();
    if (static_cast<int>(fam.gamma.size()) != n || static_cast<int>(fam.lambda.size()) != n)
        throw std::invalid_argument("surface: rotated family does not match the arrangement");
    const int i = fam.i;
    ImplicitSurface s;
    s.kind_ = SurfaceKind::Psi;
    s.dim_ = arr.N() - 1;
    s.ct_.resize(n);
    s.wx_.assign(static_cast<std::size_t>(n) * kMaxX, 0.0L);
    s.wy_.resize(n);
    s.d_.resize(n);
    const Real c = arr.c_f();
    const Real a = alpha;
    for (int j = 0; j < n; ++j) {
        const Real g = fam.gamma[j], l = fam.lambda[j];
        s.ct_[j] = (g - l) * c;
        for (int k = 0; k < s.dim_; ++k)
            s.wx_[j * kMaxX + k] = -g * static_cast<Real>(arr.wx(i, k)) + l * static_cast<Real>(arr.wx(j, k));
        s.wy_[j] = -g * static_cast<Real>(arr.wy(i)) + l * static_cast<Real>(arr.wy(j));
        s.d_[j] = a * (-g * static_cast<Real>(arr.front(i).tau) + l * static_cast<Real>(arr.front(j).tau));
        if (!(s.wy_[j] < 0.0L))
            throw std::invalid_argument("surface: rotated weights violate gamma sin(theta_i) > lambda sin(theta_j)");
    }
    return s;
}

Real ImplicitSurface::affine_no_y(int j, Real t, std::span<const Real> x) const {
    Real v = ct_[j] * t + d_[j];
    for (int k = 0; k < dim_; ++k) v += wx_[j * kMaxX + k] * x[k];
    return v;
}

double ImplicitSurface::plane_height(int j, double t, std::span<const double> x) const {
    const XBuf b = widen(x, dim_);
    return static_cast<double>(-affine_no_y(j, t, b.span(dim_)) / wy_[j]);
}

double ImplicitSurface::envelope(double t, std::span<const double> x) const {
    double e = plane_height(0, t, x);
    for (int j = 1; j < terms(); ++j) {
        double h = plane_height(j, t, x);
        e = kind_ == SurfaceKind::Phi ? std::max(e, h) : std::min(e, h);
    }
    return e;
}

double ImplicitSurface::level(double t, std::span<const double> x, double y) const {
    const XBuf b = widen(x, dim_);
    Real s = 0.0L;
    for (int j = 0; j < terms(); ++j) s += std::exp(-(affine_no_y(j, t, b.span(dim_)) + wy_[j] * y));
    return static_cast<double>(s);
}

Real ImplicitSurface::solve_height(Real t, std::span<const Real> x) const {
    const int n = terms();
    Scratch sb(n);
    Real* b = sb.p;
    Real y0 = 0.0L, min_abs_w = std::numeric_limits<Real>::infinity();
    for (int j = 0; j < n; ++j) {
        b[j] = affine_no_y(j, t, x);
        const Real h = -b[j] / wy_[j];
        if (j == 0) y0 = h;
        else y0 = kind_ == SurfaceKind::Phi ? std::max(y0, h) : std::min(y0, h);
        min_abs_w = std::min(min_abs_w, std::abs(wy_[j]));
    }
    if (n == 1) return y0;

    const Real width = std::log(static_cast<Real>(n)) / min_abs_w;
    Real lo = kind_ == SurfaceKind::Phi ? y0 : y0 - width;
    Real hi = kind_ == SurfaceKind::Phi ? y0 + width : y0;

    // G(y) = log sum exp(-l_j), monotone in y and nonnegative at the envelope end.
    auto G = [&](Real y, Real& dG) {
        Real m = -std::numeric_limits<Real>::infinity();
        for (int j = 0; j < n; ++j) m = std::max(m, -(b[j] + wy_[j] * y));
        Real s = 0.0L, sw = 0.0L;
        for (int j = 0; j < n; ++j) {
            const Real p = std::exp(-(b[j] + wy_[j] * y) - m);
            s += p;
            sw += p * wy_[j];
        }
        dG = -sw / s;
        return m + std::log(s);
    };
    // Phi: G decreasing in y. Psi: G increasing.
    const bool decreasing = kind_ == SurfaceKind::Phi;
    const Real eps = std::numeric_limits<Real>::epsilon();
    Real y = 0.5L * (lo + hi);
    Real best_y = y, best_g = std::numeric_limits<Real>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        Real dG;
        const Real g = G(y, dG);
        if (std::abs(g) < best_g) {
            best_g = std::abs(g);
            best_y = y;
        }
        if (std::abs(g) <= 4.0L * eps) return y;
        if ((g > 0.0L) == decreasing) lo = y; else hi = y;
        Real next = y - g / dG;
        if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
        if (next == y || hi - lo <= 4.0L * eps * std::max<Real>(1.0L, std::abs(y))) return best_y;
        y = next;
    }
    if (best_g <= newton_tol) return best_y;
    throw NumericalError("surface solve failed");
}

SurfaceDerivs ImplicitSurface::derivatives(Real t, std::span<const Real> x) const {
    SurfaceDerivs r;
    r.dim = dim_;
    r.y = solve_height(t, x);
    const int n = terms();

    Scratch sp(n);
    Real* p = sp.p;
    Real total = 0.0L;
    for (int j = 0; j < n; ++j) {
        p[j] = std::exp(-(affine_no_y(j, t, x) + wy_[j] * r.y));
        total += p[j];
    }
    r.residual = static_cast<double>(std::abs(total - 1.0L));
    Real D = 0.0L, sq = 0.0L;
    for (int j = 0; j < n; ++j) {
        p[j] /= total;
        D += p[j] * wy_[j];
        sq += p[j] * p[j];
    }
    r.flatness = static_cast<double>(std::max<Real>(0.0L, 1.0L - sq));

    // Y_z = -sum_j p_j dl_j/dz / D
    Real st = 0.0L;
    std::array<Real, kMaxX> sx{};
    for (int j = 0; j < n; ++j) {
        st += p[j] * ct_[j];
        for (int k = 0; k < dim_; ++k) sx[k] += p[j] * wx_[j * kMaxX + k];
    }
    const Real Yt = -st / D;
    std::array<Real, kMaxX> Yx{};
    for (int k = 0; k < dim_; ++k) Yx[k] = -sx[k] / D;

    // Y_zz' = sum_j p_j Dl_jz Dl_jz' / D, Dl_jz = dl_j/dz + wy_j Y_z
    Real Ytt = 0.0L;
    std::array<Real, kMaxX> Ytx{};
    std::array<Real, kMaxX * kMaxX> Yxx{};
    for (int j = 0; j < n; ++j) {
        const Real a_t = ct_[j] + wy_[j] * Yt;
        std::array<Real, kMaxX> a_x{};
        for (int k = 0; k < dim_; ++k) a_x[k] = wx_[j * kMaxX + k] + wy_[j] * Yx[k];
        Ytt += p[j] * a_t * a_t;
        for (int k = 0; k < dim_; ++k) {
            Ytx[k] += p[j] * a_t * a_x[k];
            for (int m = 0; m < dim_; ++m) Yxx[k * kMaxX + m] += p[j] * a_x[k] * a_x[m];
        }
    }
    r.dt = static_cast<double>(Yt);
    r.dtt = static_cast<double>(Ytt / D);
    for (int k = 0; k < dim_; ++k) {
        r.grad[k] = static_cast<double>(Yx[k]);
        r.grad_dt[k] = static_cast<double>(Ytx[k] / D);
        for (int m = 0; m < dim_; ++m) r.hess[k * kMaxX + m] = static_cast<double>(Yxx[k * kMaxX + m] / D);
    }
    return r;
}

double ImplicitSurface::flatness(Real t, std::span<const Real> x) const {
    return derivatives(t, x).flatness;
}

double ImplicitSurface::solve_height(double t, std::span<const double> x) const {
    const XBuf b = widen(x, dim_);
    return static_cast<double>(solve_height(static_cast<Real>(t), b.span(dim_)));
}

SurfaceDerivs ImplicitSurface::derivatives(double t, std::span<const double> x) const {
    const XBuf b = widen(x, dim_);
    return derivatives(static_cast<Real>(t), b.span(dim_));
}

double ImplicitSurface::flatness(double t, std::span<const double> x) const {
    const XBuf b = widen(x, dim_);
    return derivatives(static_cast<Real>(t), b.span(dim_)).flatness;
}

}  // namespace front_forge
