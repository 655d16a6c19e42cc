#pragma once

#include <cstdint>
#include <vector>

namespace qgan {

// Least-squares fit of the depth-1 normal-loader circuit to a target
// probability vector: min_zeta sum_i (p_zeta^i - q^i)^2. Gradient descent
// with parameter-shift gradients and backtracking line search; the best of
// `restarts` random starts wins. Intended for small grids only.
struct FitProblem {
  std::vector<double> target;  // q, sums to 1, length 2^qubits
  int qubits = 3;
  int restarts = 10;
  int max_iterations = 300;
  double tolerance = 1e-14;  // stop when the residual improvement falls below
  std::uint64_t seed = 0;
};

struct FitResult {
  std::vector<double> angles;  // 2n angles, layer-major
  double residual = 0.0;
  std::vector<double> history;  // residual after each accepted step (best restart)
};

FitResult fit_normal_init(const FitProblem& problem);

// Residual of a given angle vector against a target (the fit objective).
double fit_residual(const std::vector<double>& angles, const std::vector<double>& target,
                    int qubits);

// Discretized normal target for the fit: cells [v - s/2, v + s/2) on the grid
// induced by [lo, hi], renormalized.
std::vector<double> discretized_normal(double mean, double stddev, int qubits, double lo,
                                       double hi);

}  // namespace qgan
