#pragma once

#include <memory>
#include <string>
#include <vector>

namespace front_forge {

enum class ReactionKind { Cubic, Tabulated };

class TabulatedF;

/**
 * @brief Bistable nonlinearity f with zeros 0 < theta < 1 and the derived constants.
 *
 * Immutable after construction. Evaluators are pure.
 */
struct ReactionSpec {
    ReactionKind kind = ReactionKind::Cubic;
    double theta = 0.0;
    double fprime0 = 0.0;
    double fprime1 = 0.0;
    double sigma = 0.0;
    double L = 0.0;
    double mu = 0.0;
    double integral_f = 0.0;

    std::shared_ptr<const TabulatedF> table;  // only for Tabulated
};

/// f(u) = u(u - theta)(1 - u); requires 0 < theta < 1/2.
ReactionSpec make_cubic(double theta);

/// Monotone cubic interpolation through (u, f(u)) samples covering [0, 1].
ReactionSpec make_tabulated(const std::vector<double>& u, const std::vector<double>& f);

/// Reads "u,f" CSV rows (header line optional) and builds a tabulated spec.
ReactionSpec load_tabulated_csv(const std::string& path);

double eval_f(const ReactionSpec& spec, double u);
double eval_fprime(const ReactionSpec& spec, double u);

/// Largest sigma in (0, 1/8] with f' <= f'(0)/2 on [0, 4 sigma] and f' <= f'(1)/2 on [1 - 4 sigma, 1].
double largest_sigma(const ReactionSpec& spec, int samples = 10001);

/// True if both sigma inequalities hold on a uniform grid of the given size.
bool sigma_admissible(const ReactionSpec& spec, double sigma, int samples = 10001);

}  // namespace front_forge
