#include "qgan/qae.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgan {

namespace {

constexpr int kMaxSimulatedQubits = 20;

}  // namespace

double QaeProblem::payoff_scale() const {
  return static_cast<double>((1ULL << grid_qubits) - 1 - strike);
}

void QaeProblem::validate() const {
  if (grid_qubits < 1) throw std::invalid_argument("grid needs at least one qubit");
  const std::uint64_t grid = 1ULL << grid_qubits;
  if (strike >= grid - 1) {
    throw std::invalid_argument(
        "strike must be < 2^n - 1: the payoff normalization f(i) = (i-K)/(2^n-K-1) degenerates");
  }
  if (evaluation_qubits < 1) throw std::invalid_argument("need at least one evaluation qubit");
  if (generator.has_value()) {
    generator->shape.validate();
    if (generator->shape.qubit_count != grid_qubits) {
      throw std::invalid_argument("generator loader must act on the grid register");
    }
  } else {
    if (probabilities.size() != grid) {
      throw std::invalid_argument("probability loader must have 2^n entries");
    }
  }
}

Circuit build_loader(const QaeProblem& problem) {
  Circuit loader;
  if (problem.generator.has_value()) {
    const GeneratorLoader& g = *problem.generator;
    loader.append(input_circuit(g.input, g.shape));
    loader.append(build_circuit(g.shape, g.theta));
  } else {
    loader.add(CircuitOp{HouseholderLoad::from_probabilities(problem.probabilities)});
  }
  return loader;
}

Circuit build_oracle_a(const QaeProblem& problem) {
  problem.validate();
  Circuit a = build_loader(problem);

  IntegerComparator cmp;
  cmp.grid_qubits = problem.grid_qubits;
  cmp.threshold = problem.strike;
  cmp.target_qubit = problem.comparator_qubit();
  a.add(CircuitOp{cmp});

  GridControlledRY rot;
  rot.grid_qubits = problem.grid_qubits;
  rot.control_qubit = problem.comparator_qubit();
  rot.target_qubit = problem.payoff_qubit();
  const std::uint64_t grid = 1ULL << problem.grid_qubits;
  rot.angles.resize(grid);
  const double scale = problem.payoff_scale();
  for (std::uint64_t i = 0; i < grid; ++i) {
    const double f = std::clamp(
        (static_cast<double>(i) - static_cast<double>(problem.strike)) / scale, 0.0, 1.0);
    rot.angles[i] = 2.0 * std::asin(std::sqrt(f));
  }
  a.add(CircuitOp{rot});
  return a;
}

Circuit grover_operator(const QaeProblem& problem) {
  const Circuit a = build_oracle_a(problem);
  const std::uint64_t oracle_mask = (1ULL << problem.oracle_qubits()) - 1;
  const std::uint64_t payoff_bit = 1ULL << problem.payoff_qubit();

  // The reflection about the bad component |psi_0>|0> acts on the reachable
  // span exactly like -S_chi with S_chi flipping payoff-ancilla-|1> states,
  // so Q = A S_0 A^dag S_bad is realized as the composition below; the
  // trailing mask-0 reflection carries the overall sign (a real relative
  // phase once Q is controlled).
  Circuit q;
  q.add(GateOp::phase_reflection(payoff_bit, payoff_bit));  // S_chi
  q.append(a.adjoint());
  q.add(GateOp::phase_reflection(oracle_mask, 0));          // S_0
  q.append(a);
  q.add(GateOp::phase_reflection(0, 0));                    // global -1
  return q;
}

double oracle_good_probability(const QaeProblem& problem) {
  Statevector state(problem.oracle_qubits());
  apply_inplace(state, build_oracle_a(problem));
  const std::uint64_t payoff_bit = 1ULL << problem.payoff_qubit();
  double p = 0.0;
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    if (i & payoff_bit) p += std::norm(state.amplitudes[i]);
  }
  return p;
}

QaeResult run_qae(const QaeProblem& problem) {
  problem.validate();
  const int m = problem.evaluation_qubits;
  const int total = problem.oracle_qubits() + m;
  if (total > kMaxSimulatedQubits) {
    throw std::invalid_argument("problem needs " + std::to_string(total) +
                                " qubits, above the simulator limit of " +
                                std::to_string(kMaxSimulatedQubits));
  }

  Statevector state(total);
  apply_inplace(state, build_oracle_a(problem));
  const int eval_first = problem.oracle_qubits();
  for (int j = 0; j < m; ++j) apply_inplace(state, GateOp::h(eval_first + j));

  const Circuit q = grover_operator(problem);
  for (int j = 0; j < m; ++j) {
    const std::uint64_t cbit = 1ULL << (eval_first + j);
    const std::uint64_t reps = 1ULL << j;
    for (std::uint64_t r = 0; r < reps; ++r) apply_inplace(state, q, cbit);
  }

  apply_inverse_qft(state, eval_first, m);

  QaeResult result;
  result.evaluation_qubits = m;
  result.evaluation_distribution = marginal_probabilities(state, eval_first, m);

  std::uint64_t best = 0;
  for (std::uint64_t y = 1; y < result.evaluation_distribution.size(); ++y) {
    if (result.evaluation_distribution[y] > result.evaluation_distribution[best]) best = y;
  }
  result.grid_outcome = best;

  const double phase = std::numbers::pi * static_cast<double>(best) /
                       static_cast<double>(1ULL << m);
  const double s = std::sin(phase);
  result.amplitude = s * s;
  result.payoff = result.amplitude * problem.payoff_scale();

  // |a_hat - a| <= 2 sqrt(a(1-a)) pi/2^m + pi^2/4^m (the pi/2^m phase-grid
  // error pushed through sin^2)
  const double grid_step = std::numbers::pi / static_cast<double>(1ULL << m);
  result.amplitude_error_bound =
      2.0 * std::sqrt(result.amplitude * (1.0 - result.amplitude)) * grid_step +
      grid_step * grid_step;
  result.ci_half_width = result.amplitude_error_bound * problem.payoff_scale();
  return result;
}

McResult monte_carlo_payoff(const std::vector<std::uint64_t>& samples, std::uint64_t strike) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  double mean = 0.0;
  for (std::uint64_t s : samples) {
    mean += s > strike ? static_cast<double>(s - strike) : 0.0;
  }
  const double n = static_cast<double>(samples.size());
  mean /= n;
  double var = 0.0;
  for (std::uint64_t s : samples) {
    const double payoff = s > strike ? static_cast<double>(s - strike) : 0.0;
    var += (payoff - mean) * (payoff - mean);
  }
  var = samples.size() > 1 ? var / (n - 1.0) : 0.0;

  McResult r;
  r.estimate = mean;
  r.ci_half_width = 1.96 * std::sqrt(var / n);
  r.samples = samples.size();
  return r;
}

}  // namespace qgan
