#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qgan/generator.hpp"
#include "qgan/statevector.hpp"

namespace qgan {

// State-preparation source for the oracle's grid register.
struct GeneratorLoader {
  AnsatzShape shape;
  std::vector<double> theta;
  InputStateSpec input;
};

// European-call amplitude-estimation problem on the grid {0..2^n-1}:
// expected payoff E[max(S - K, 0)] with S read in grid units. The oracle acts
// on n + 2 qubits: grid register [0, n), comparator ancilla n, payoff
// ancilla n + 1. No extra work qubits are needed (the comparator is evaluated
// basis-wise).
struct QaeProblem {
  int grid_qubits = 3;
  std::uint64_t strike = 2;  // K, in grid units
  int evaluation_qubits = 8;

  std::vector<double> probabilities;         // exact loader, used when no generator
  std::optional<GeneratorLoader> generator;  // trained loader

  int comparator_qubit() const { return grid_qubits; }
  int payoff_qubit() const { return grid_qubits + 1; }
  int oracle_qubits() const { return grid_qubits + 2; }
  double payoff_scale() const;  // 2^n - K - 1
  void validate() const;
};

// Unitary preparing sum_i sqrt(p_i)|i> on the grid register.
Circuit build_loader(const QaeProblem& problem);

// Oracle A: loader, comparator (ancilla flips for i > K), then the payoff
// rotation RY(2 asin(sqrt(f(i)))) with f(i) = (i-K)/(2^n-K-1) on the payoff
// ancilla, controlled on the comparator. P[payoff ancilla = 1] equals
// sum_{i>K} p_i f(i).
Circuit build_oracle_a(const QaeProblem& problem);

// Grover operator with eigenphases +-2*asin(sqrt(a)) on the span of the good
// and bad components of A|0>.
Circuit grover_operator(const QaeProblem& problem);

// P[|1>] on the payoff ancilla of A|0>, by exact statevector readout.
double oracle_good_probability(const QaeProblem& problem);

struct QaeResult {
  double amplitude = 0.0;        // sin^2(pi y / 2^m) of the most likely outcome y
  double payoff = 0.0;           // amplitude * (2^n - K - 1)
  std::uint64_t grid_outcome = 0;
  double amplitude_error_bound = 0.0;  // phase-grid bound mapped through sin^2
  double ci_half_width = 0.0;          // bound scaled to payoff units
  int evaluation_qubits = 0;
  std::vector<double> evaluation_distribution;  // outcome distribution over 2^m
};

// Phase estimation on the Grover operator with m evaluation qubits; exact
// readout (argmax of the evaluation-register distribution, ties toward
// smaller y).
QaeResult run_qae(const QaeProblem& problem);

struct McResult {
  double estimate = 0.0;
  double ci_half_width = 0.0;  // 1.96 * stderr
  std::size_t samples = 0;
};

// Classical baseline: mean payoff of grid-value samples with a 95% CI.
McResult monte_carlo_payoff(const std::vector<std::uint64_t>& samples, std::uint64_t strike);

}  // namespace qgan
