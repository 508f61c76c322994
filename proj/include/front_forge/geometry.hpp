#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace front_forge {

inline constexpr int kMaxSpaceDim = 4;  // N; the transverse variable x has N - 1 components

/// @brief One planar front: unit nu in R^{N-1}, angle theta in (0, pi/2], shift tau.
struct Front {
    std::vector<double> nu;
    double theta = 0.0;
    double tau = 0.0;
};

/**
 * @brief n moving hyperplanes x.nu_i cos(theta_i) + y sin(theta_i) - c_f t + tau_i = 0 in R^N.
 *
 * Built through make_arrangement, which enforces unit nu, theta in (0, pi/2] and distinct
 * directions e_i = (nu_i cos theta_i, sin theta_i).
 */
class FrontArrangement {
public:
    FrontArrangement() = default;

    int N() const { return N_; }
    int n() const { return static_cast<int>(fronts_.size()); }
    double c_f() const { return c_f_; }
    const std::vector<Front>& fronts() const { return fronts_; }
    const Front& front(int i) const { return fronts_.at(i); }

    /// e_i as an N-vector.
    std::vector<double> direction(int i) const;
    /// Coefficient of x_k in the i-th plane coordinate.
    double wx(int i, int k) const { return wx_[i * kMaxSpaceDim + k]; }
    double wy(int i) const { return wy_[i]; }

    /// Same fronts with tau_i replaced.
    FrontArrangement with_tau(const std::vector<double>& tau) const;

    friend FrontArrangement make_arrangement(int, std::vector<Front>, double);

private:
    int N_ = 0;
    double c_f_ = 0.0;
    std::vector<Front> fronts_;
    std::vector<double> wx_;  // n * kMaxSpaceDim, nu_i cos theta_i
    std::vector<double> wy_;  // sin theta_i
};

FrontArrangement make_arrangement(int N, std::vector<Front> fronts, double c_f);

/**
 * @brief Arrangement from raw unit directions e_i in R^N and a reference axis e0 with e_i.e0 > 0.
 *
 * A Householder reflection maps e0 to the last axis; nu_i and theta_i are read off there.
 */
FrontArrangement arrangement_from_raw(const std::vector<std::vector<double>>& e,
                                      const std::vector<double>& e0,
                                      const std::vector<double>& tau, double c_f);

/// Symmetric 2D pair (nu = +1, -1) at angle alpha0 with zero shifts.
FrontArrangement symmetric_pair(double alpha0, double c_f, double tau = 0.0);

/// x.nu_i cos theta_i + y sin theta_i - c_f t + scale * tau_i
double signed_plane_coord(const FrontArrangement& arr, int i, double t, std::span<const double> x,
                          double y, double scale = 1.0);

/// Minimum plane coordinate and its index (lowest index on ties).
std::pair<double, int> min_plane_coord(const FrontArrangement& arr, double t, std::span<const double> x,
                                       double y, double scale = 1.0);

/// Lower bound for the space-time distance to the ridge set: min over pairs of the distance to
/// {q_i = 0, q_j = 0}.
double ridge_distance_proxy(const FrontArrangement& arr, double t, std::span<const double> x, double y,
                            double scale = 1.0);

/// @brief Weights of the rotated planes Q_ij = -gamma_ij q_i + lambda_ij q_j for a fixed facet i.
struct RotatedFamily {
    int i = 0;
    std::vector<double> gamma;
    std::vector<double> lambda;
};

RotatedFamily choose_rotation_weights(const FrontArrangement& arr, int i);

/// Smallest slack of the two strict inequality families the weights must satisfy.
std::pair<double, double> rotation_slack(const FrontArrangement& arr, const RotatedFamily& fam);

/// -gamma_ij q_i + lambda_ij q_j
double rotated_coord(const FrontArrangement& arr, const RotatedFamily& fam, int j, double t,
                     std::span<const double> x, double y, double scale = 1.0);

}  // namespace front_forge
