#include "qgan/init_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "qgan/distributions.hpp"
#include "qgan/generator.hpp"
#include "qgan/rng.hpp"
#include "qgan/statevector.hpp"

namespace qgan {

namespace {

std::vector<double> loader_probabilities(const std::vector<double>& angles, int qubits) {
  Statevector state(qubits);
  for (const GateOp& g : normal_loader_circuit(qubits, angles)) apply_inplace(state, g);
  return state.probabilities();
}

double residual_of(const std::vector<double>& p, const std::vector<double>& q) {
  double r = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    r += d * d;
  }
  return r;
}

FitResult fit_single(const FitProblem& problem, std::uint64_t seed) {
  Rng rng(seed);
  const int n = problem.qubits;
  std::vector<double> angles(2 * n);
  for (double& a : angles) a = rng.uniform(-std::numbers::pi, std::numbers::pi);

  FitResult result;
  double residual = residual_of(loader_probabilities(angles, n), problem.target);
  result.history.push_back(residual);

  std::vector<double> grad(angles.size());
  std::vector<double> shifted = angles;
  double step = 0.5;
  for (int iter = 0; iter < problem.max_iterations; ++iter) {
    // grad_a = sum_i 2 (p_i - q_i) * dp_i/da  via the parameter-shift rule
    const std::vector<double> p = loader_probabilities(angles, n);
    for (std::size_t a = 0; a < angles.size(); ++a) {
      shifted = angles;
      shifted[a] += std::numbers::pi / 2.0;
      const std::vector<double> plus = loader_probabilities(shifted, n);
      shifted[a] = angles[a] - std::numbers::pi / 2.0;
      const std::vector<double> minus = loader_probabilities(shifted, n);
      double acc = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc += 2.0 * (p[i] - problem.target[i]) * 0.5 * (plus[i] - minus[i]);
      }
      grad[a] = acc;
    }
    double gnorm2 = 0.0;
    for (double g : grad) gnorm2 += g * g;
    if (gnorm2 < 1e-24) break;

    // backtracking line search
    step = std::min(step * 2.0, 4.0);
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      std::vector<double> trial = angles;
      for (std::size_t a = 0; a < trial.size(); ++a) trial[a] -= step * grad[a];
      const double trial_res = residual_of(loader_probabilities(trial, n), problem.target);
      if (trial_res < residual) {
        const double gain = residual - trial_res;
        angles = std::move(trial);
        residual = trial_res;
        result.history.push_back(residual);
        accepted = true;
        if (gain < problem.tolerance) {
          result.angles = angles;
          result.residual = residual;
          return result;
        }
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  result.angles = std::move(angles);
  result.residual = residual;
  return result;
}

}  // namespace

double fit_residual(const std::vector<double>& angles, const std::vector<double>& target,
                    int qubits) {
  return residual_of(loader_probabilities(angles, qubits), target);
}

std::vector<double> discretized_normal(double mean, double stddev, int qubits, double lo,
                                       double hi) {
  if (stddev <= 0.0) throw std::invalid_argument("stddev must be > 0");
  const std::uint64_t points = 1ULL << qubits;
  const double slope = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> p(points);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < points; ++i) {
    const double v = lo + slope * static_cast<double>(i);
    p[i] = std::max(
        normal_cdf(v + slope / 2, mean, stddev) - normal_cdf(v - slope / 2, mean, stddev), 0.0);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

FitResult fit_normal_init(const FitProblem& problem) {
  if (problem.qubits < 1 || problem.qubits > 4) {
    throw std::invalid_argument("normal-init fit supports at most 4 qubits");
  }
  if (problem.target.size() != (1ULL << problem.qubits)) {
    throw std::invalid_argument("target length must be 2^qubits");
  }
  double sum = 0.0;
  for (double q : problem.target) sum += q;
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("target must sum to 1");
  if (problem.restarts < 1) throw std::invalid_argument("need at least one restart");

  std::vector<FitResult> results(problem.restarts);
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(problem.restarts));
  std::vector<std::thread> pool;
  std::size_t next = 0;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&results, &problem, w, workers]() {
      for (std::size_t r = w; r < results.size(); r += workers) {
        results[r] = fit_single(problem, derive_seed(problem.seed, r));
      }
    });
  }
  (void)next;
  for (std::thread& t : pool) t.join();

  const auto best = std::min_element(results.begin(), results.end(),
                                     [](const FitResult& a, const FitResult& b) {
                                       return a.residual < b.residual;
                                     });
  return *best;
}

}  // namespace qgan
