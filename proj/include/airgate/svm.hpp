#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace airgate {

/// exp(-gamma * |x - y|^2)
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

struct SmoOptions {
    double c_pos = 10.0;  // box bound for y = +1
    double c_neg = 10.0;  // box bound for y = -1
    double tolerance = 1e-3;
    std::size_t max_iterations = 0;  // 0: 100 * n
};

/// Dual solution of the soft-margin problem
///   max  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij
///   s.t. 0 <= a_i <= C_{y_i},  sum a_i y_i = 0
/// on a precomputed n x n kernel matrix (row-major).
struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;  // decision(x) = sum a_i y_i K(x_i, x) + bias
    std::size_t iterations = 0;
    bool converged = false;
    double max_violation = 0.0;  // final max_{I_up} -y G - min_{I_low} -y G
    double objective = 0.0;
};

/// Sequential minimal optimization with maximal-violating-pair selection.
/// Stops when the violation drops to options.tolerance or the iteration cap
/// is reached (converged == false).
SmoResult smo_solve(std::span<const double> kernel, std::span<const int> y, const SmoOptions& options);

double dual_objective(std::span<const double> kernel, std::span<const int> y, std::span<const double> alpha);

/// Largest first-order KKT violation of alpha: the gap between the most
/// violating up/low pair (0 at an exact optimum).
double kkt_violation(std::span<const double> kernel, std::span<const int> y, std::span<const double> alpha,
                     const SmoOptions& options);

}  // namespace airgate
