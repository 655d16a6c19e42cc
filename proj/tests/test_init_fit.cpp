#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgan/generator.hpp"
#include "qgan/init_fit.hpp"
#include "qgan/statevector.hpp"

using namespace qgan;

namespace {

std::vector<double> loader_probs(const std::vector<double>& angles, int qubits) {
  Statevector s(qubits);
  for (const GateOp& g : normal_loader_circuit(qubits, angles)) apply_inplace(s, g);
  return s.probabilities();
}

// Target statistics behind the published angle vectors (see README): the
// lognormal uses the moments of the [0,7]-truncated law, the triangular its
// exact moments, the bimodal the raw mixture moments.
const std::vector<double> kLognormalAngles{0.3580, 1.0903, 1.5255, 1.3651, 1.4932, -0.9092};
const std::vector<double> kTriangularAngles{1.5343, 1.6183, 0.8559, -0.4041, 0.4953, 1.2238};
const std::vector<double> kBimodalAngles{0.4683, 0.8200, 1.4512, 1.1875, 1.3883, -0.8418};

constexpr double kLognormalMean = 2.589896, kLognormalStd = 1.707501;
constexpr double kTriangularMean = 3.0, kTriangularStd = 1.4719601;  // sqrt(39/18)
constexpr double kBimodalMean = 2.0, kBimodalStd = 1.6955824;        // sqrt(2.875)

}  // namespace

TEST_CASE("realizable targets are recovered to numerical precision") {
  Rng rng(1);
  std::vector<double> hidden(6);
  for (double& a : hidden) a = rng.uniform(-1.5, 1.5);
  FitProblem problem;
  problem.qubits = 3;
  problem.target = loader_probs(hidden, 3);
  problem.seed = 7;
  const FitResult r = fit_normal_init(problem);
  CHECK(r.residual < 1e-8);
  const std::vector<double> fitted = loader_probs(r.angles, 3);
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    CHECK(std::abs(fitted[i] - problem.target[i]) < 1e-4);
  }
}

TEST_CASE("fitting the three benchmark stat-sets reaches small residuals") {
  const struct {
    double mean, stddev;
  } cases[] = {{kLognormalMean, kLognormalStd},
               {kTriangularMean, kTriangularStd},
               {kBimodalMean, kBimodalStd}};
  for (const auto& c : cases) {
    FitProblem problem;
    problem.qubits = 3;
    problem.target = discretized_normal(c.mean, c.stddev, 3, 0.0, 7.0);
    problem.seed = 11;
    const FitResult r = fit_normal_init(problem);
    CHECK(r.residual <= 1e-3);
  }
}

TEST_CASE("published angle vectors reproduce their targets") {
  const struct {
    const std::vector<double>* angles;
    double mean, stddev;
  } cases[] = {{&kLognormalAngles, kLognormalMean, kLognormalStd},
               {&kTriangularAngles, kTriangularMean, kTriangularStd},
               {&kBimodalAngles, kBimodalMean, kBimodalStd}};
  for (const auto& c : cases) {
    const std::vector<double> q = discretized_normal(c.mean, c.stddev, 3, 0.0, 7.0);
    CHECK(fit_residual(*c.angles, q, 3) <= 1e-3);
  }
}

TEST_CASE("residual history is non-increasing") {
  FitProblem problem;
  problem.qubits = 3;
  problem.target = discretized_normal(kLognormalMean, kLognormalStd, 3, 0.0, 7.0);
  problem.seed = 3;
  const FitResult r = fit_normal_init(problem);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i] <= r.history[i - 1]);
  }
  CHECK(r.history.back() == doctest::Approx(r.residual));
}

TEST_CASE("oversized problems are rejected") {
  FitProblem problem;
  problem.qubits = 5;
  problem.target.assign(32, 1.0 / 32);
  CHECK_THROWS_AS(fit_normal_init(problem), std::invalid_argument);
}

TEST_CASE("target validation") {
  FitProblem problem;
  problem.qubits = 3;
  problem.target.assign(8, 0.25);  // sums to 2
  CHECK_THROWS_AS(fit_normal_init(problem), std::invalid_argument);
  problem.target.assign(4, 0.25);  // wrong length
  CHECK_THROWS_AS(fit_normal_init(problem), std::invalid_argument);
}
