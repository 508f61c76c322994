#pragma once

#include "front_forge/geometry.hpp"

#include <array>
#include <span>
#include <vector>

namespace front_forge {

inline constexpr int kMaxX = kMaxSpaceDim - 1;

/// Extended precision used for surface heights: callers divide them by alpha, which can be ~1e-6.
using Real = long double;

/// @brief Height and derivatives of y = Y(t, x) on an implicit surface, plus its flatness.
struct SurfaceDerivs {
    int dim = 0;          // N - 1
    Real y = 0.0;
    double dt = 0.0;
    double dtt = 0.0;
    std::array<double, kMaxX> grad{};
    std::array<double, kMaxX> grad_dt{};
    std::array<double, kMaxX * kMaxX> hess{};  // row-major dim x dim
    double flatness = 0.0;  // h for phi, h-hat_i for psi_i
    double residual = 0.0;  // |sum e^{-q} - 1| at the returned height

    double grad_sq() const {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += grad[k] * grad[k];
        return s;
    }
    double hess_at(int a, int b) const { return hess[a * kMaxX + b]; }
    double laplacian() const {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += hess_at(k, k);
        return s;
    }
};

enum class SurfaceKind { Phi, Psi };

/**
 * @brief Level set sum_j exp(-l_j(t, x, y)) = 1 for affine l_j, solved for y.
 *
 * Phi uses l_j = q_j (plane coordinates with shifts alpha tau_j). Psi_i uses the rotated
 * planes l_j = -gamma_ij q_i + lambda_ij q_j. The solve is alpha-agnostic: callers evaluate
 * at scaled arguments (alpha t, alpha x).
 */
class ImplicitSurface {
public:
    static ImplicitSurface phi(const FrontArrangement& arr, double alpha);
    static ImplicitSurface psi(const FrontArrangement& arr, const RotatedFamily& fam, double alpha);

    SurfaceKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int terms() const { return static_cast<int>(wy_.size()); }
    double newton_tol = 1e-13;
    int max_iter = 60;

    Real solve_height(Real t, std::span<const Real> x) const;
    SurfaceDerivs derivatives(Real t, std::span<const Real> x) const;
    double flatness(Real t, std::span<const Real> x) const;

    double solve_height(double t, std::span<const double> x) const;
    SurfaceDerivs derivatives(double t, std::span<const double> x) const;
    double flatness(double t, std::span<const double> x) const;

    /// sum_j exp(-l_j) at an arbitrary (t, x, y).
    double level(double t, std::span<const double> x, double y) const;
    /// Height where l_j = 0 for a single term j.
    double plane_height(int j, double t, std::span<const double> x) const;
    /// max_j (phi) or min_j (psi) of the plane heights.
    double envelope(double t, std::span<const double> x) const;

private:
    SurfaceKind kind_ = SurfaceKind::Phi;
    int dim_ = 1;
    std::vector<Real> ct_, wx_, wy_, d_;  // l_j = ct_j t + wx_j.x + wy_j y + d_j

    Real affine_no_y(int j, Real t, std::span<const Real> x) const;
};

}  // namespace front_forge
