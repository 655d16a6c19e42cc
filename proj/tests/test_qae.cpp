#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "qgan/distributions.hpp"
#include "qgan/qae.hpp"

using namespace qgan;

namespace {

constexpr double kPi = std::numbers::pi;

QaeProblem point_mass_problem(int n, std::uint64_t at, std::uint64_t strike) {
  QaeProblem p;
  p.grid_qubits = n;
  p.strike = strike;
  p.probabilities.assign(1ULL << n, 0.0);
  p.probabilities[at] = 1.0;
  return p;
}

double expected_good_probability(const std::vector<double>& probs, std::uint64_t strike) {
  const double scale = static_cast<double>(probs.size() - 1 - strike);
  double a = 0.0;
  for (std::size_t i = strike + 1; i < probs.size(); ++i) {
    a += probs[i] * (static_cast<double>(i) - static_cast<double>(strike)) / scale;
  }
  return a;
}

std::vector<double> random_probabilities(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) {
    x = rng.uniform();
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

}  // namespace

TEST_CASE("oracle on point masses") {
  SUBCASE("i=5, K=2: f = 3/5") {
    const QaeProblem p = point_mass_problem(3, 5, 2);
    const double a = oracle_good_probability(p);
    CHECK(a == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(a * p.payoff_scale() == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("i <= K gives zero") {
    for (std::uint64_t i = 0; i <= 2; ++i) {
      CHECK(oracle_good_probability(point_mass_problem(3, i, 2)) ==
            doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("oracle on the uniform distribution") {
  QaeProblem p;
  p.grid_qubits = 3;
  p.strike = 2;
  p.probabilities.assign(8, 0.125);
  CHECK(oracle_good_probability(p) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(oracle_good_probability(p) * p.payoff_scale() == doctest::Approx(1.875).epsilon(1e-12));
}

TEST_CASE("oracle equals the expectation formula for random inputs") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    for (std::uint64_t strike = 0; strike <= 6; ++strike) {
      QaeProblem p;
      p.grid_qubits = 3;
      p.strike = strike;
      p.probabilities = random_probabilities(8, rng);
      CHECK(std::abs(oracle_good_probability(p) -
                     expected_good_probability(p.probabilities, strike)) < 1e-10);
    }
  }
}

TEST_CASE("degenerate strike is rejected") {
  QaeProblem p;
  p.grid_qubits = 3;
  p.strike = 7;
  p.probabilities.assign(8, 0.125);
  CHECK_THROWS_AS(build_oracle_a(p), std::invalid_argument);
  p.strike = 8;
  CHECK_THROWS_AS(build_oracle_a(p), std::invalid_argument);
}

TEST_CASE("grover operator is unitary on toy problems") {
  Rng rng(5);
  QaeProblem p;
  p.grid_qubits = 2;
  p.strike = 1;
  p.probabilities = random_probabilities(4, rng);
  const Circuit q = grover_operator(p);

  // columns of Q stay orthonormal: apply Q to every basis state and check
  // Q^dag Q = I column by column
  const int qubits = p.oracle_qubits();
  const std::uint64_t dim = 1ULL << qubits;
  std::vector<std::vector<cdouble>> columns(dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    Statevector s = Statevector::basis_state(qubits, j);
    apply_inplace(s, q);
    columns[j] = s.amplitudes;
  }
  for (std::uint64_t a = 0; a < dim; ++a) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      cdouble dot{0.0, 0.0};
      for (std::uint64_t i = 0; i < dim; ++i) dot += std::conj(columns[a][i]) * columns[b][i];
      const cdouble expect = a == b ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
      CHECK(std::abs(dot - expect) < 1e-10);
    }
  }
}

TEST_CASE("grover operator rotates the good/bad span by twice the amplitude angle") {
  Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    QaeProblem p;
    p.grid_qubits = 3;
    p.strike = 2;
    p.probabilities = random_probabilities(8, rng);

    const int qubits = p.oracle_qubits();
    const std::uint64_t payoff_bit = 1ULL << p.payoff_qubit();
    Statevector psi(qubits);
    apply_inplace(psi, build_oracle_a(p));

    // split A|0> into bad (ancilla 0) and good (ancilla 1) components
    Statevector bad(qubits), good(qubits);
    bad.amplitudes.assign(bad.dim(), {0.0, 0.0});
    good.amplitudes.assign(good.dim(), {0.0, 0.0});
    for (std::uint64_t i = 0; i < psi.dim(); ++i) {
      (i & payoff_bit ? good : bad).amplitudes[i] = psi.amplitudes[i];
    }
    const double a = good.norm_sq();
    const double nb = std::sqrt(bad.norm_sq()), ng = std::sqrt(good.norm_sq());
    for (auto& x : bad.amplitudes) x /= nb;
    for (auto& x : good.amplitudes) x /= ng;

    // restrict Q to span{bad, good}
    const Circuit q = grover_operator(p);
    Statevector qb = bad, qg = good;
    apply_inplace(qb, q);
    apply_inplace(qg, q);
    auto overlap = [](const Statevector& x, const Statevector& y) {
      cdouble dot{0.0, 0.0};
      for (std::uint64_t i = 0; i < x.dim(); ++i) dot += std::conj(x.amplitudes[i]) * y.amplitudes[i];
      return dot;
    };
    const cdouble m00 = overlap(bad, qb), m01 = overlap(bad, qg);
    const cdouble m10 = overlap(good, qb), m11 = overlap(good, qg);

    // the span is invariant: Q|bad>, Q|good> have no residual outside it
    const double res_b = std::abs(qb.norm_sq() - std::norm(m00) - std::norm(m10));
    const double res_g = std::abs(qg.norm_sq() - std::norm(m01) - std::norm(m11));
    CHECK(res_b < 1e-10);
    CHECK(res_g < 1e-10);

    // eigenphases of the 2x2 restriction: +-2 asin(sqrt(a))
    const cdouble tr = m00 + m11;
    const cdouble det = m00 * m11 - m01 * m10;
    const cdouble disc = std::sqrt(tr * tr - 4.0 * det);
    const cdouble l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
    const double theta_a = std::asin(std::sqrt(a));
    CHECK(std::abs(std::abs(l1) - 1.0) < 1e-8);
    CHECK(std::abs(std::abs(l2) - 1.0) < 1e-8);
    const double phase1 = std::abs(std::arg(l1));
    const double phase2 = std::abs(std::arg(l2));
    CHECK(std::abs(phase1 - 2.0 * theta_a) < 1e-8);
    CHECK(std::abs(phase2 - 2.0 * theta_a) < 1e-8);
  }
}

TEST_CASE("zero amplitude stays zero under grover powers") {
  QaeProblem p = point_mass_problem(3, 1, 2);  // mass below the strike: a = 0
  const Circuit q = grover_operator(p);
  Statevector s(p.oracle_qubits());
  apply_inplace(s, build_oracle_a(p));
  for (int power = 0; power < 4; ++power) {
    double good = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      if (i & (1ULL << p.payoff_qubit())) good += std::norm(s.amplitudes[i]);
    }
    CHECK(good < 1e-12);
    apply_inplace(s, q);
  }
}

TEST_CASE("QAE returns exactly representable amplitudes with certainty") {
  // n=1, K=0: f(1) = 1, so a = p_1; choose p_1 = sin^2(pi y0 / 2^m)
  const int m = 4;
  const std::uint64_t y0 = 3;
  const double a = std::pow(std::sin(kPi * y0 / (1 << m)), 2);
  QaeProblem p;
  p.grid_qubits = 1;
  p.strike = 0;
  p.evaluation_qubits = m;
  p.probabilities = {1.0 - a, a};

  const QaeResult r = run_qae(p);
  CHECK(r.amplitude == doctest::Approx(a).epsilon(1e-9));
  const double mass = r.evaluation_distribution[y0] +
                      r.evaluation_distribution[(1ULL << m) - y0];
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((r.grid_outcome == y0 || r.grid_outcome == (1ULL << m) - y0));
}

TEST_CASE("QAE with one evaluation qubit on a = 0") {
  QaeProblem p = point_mass_problem(3, 1, 2);
  p.evaluation_qubits = 1;
  const QaeResult r = run_qae(p);
  CHECK(r.grid_outcome == 0);
  CHECK(r.payoff == doctest::Approx(0.0));
}

TEST_CASE("QAE error stays within the phase-grid bound") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    QaeProblem p;
    p.grid_qubits = 2;
    p.strike = rng.below(2);
    p.evaluation_qubits = 6;
    p.probabilities = random_probabilities(4, rng);
    const double a = oracle_good_probability(p);
    const QaeResult r = run_qae(p);
    const double bound = 2.0 * std::sqrt(a * (1.0 - a)) * kPi / (1 << 6) +
                         std::pow(kPi / (1 << 6), 2);
    CHECK(std::abs(r.amplitude - a) <= bound + 1e-12);
  }
}

TEST_CASE("resource limits are enforced") {
  QaeProblem p;
  p.grid_qubits = 8;
  p.strike = 2;
  p.evaluation_qubits = 12;
  p.probabilities.assign(256, 1.0 / 256);
  CHECK_THROWS_AS(run_qae(p), std::invalid_argument);
}

TEST_CASE("monte carlo payoff") {
  SUBCASE("all samples at the strike") {
    const McResult r = monte_carlo_payoff(std::vector<std::uint64_t>(100, 2), 2);
    CHECK(r.estimate == 0.0);
    CHECK(r.ci_half_width == 0.0);
  }
  SUBCASE("1024 draws from the analytic lognormal law") {
    TargetSpec spec;  // lognormal(1,1) on [0,7]
    const std::vector<double> law = analytic_discretized(spec);
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < law.size(); ++i) {
      const double pay = std::max(static_cast<double>(i) - 2.0, 0.0);
      mean += law[i] * pay;
      second += law[i] * pay * pay;
    }
    const double sigma = std::sqrt(second - mean * mean);
    const auto samples = sample_target(spec, 1024, 2029);
    const McResult r = monte_carlo_payoff(samples, 2);
    CHECK(std::abs(r.estimate - mean) <= 3.0 * 1.96 * sigma / 32.0);
    CHECK(r.ci_half_width == doctest::Approx(1.96 * sigma / 32.0).epsilon(0.25));
  }
  SUBCASE("quadrupling the sample count halves the interval") {
    TargetSpec spec;
    Rng rng(3001);
    double ratio_sum = 0.0;
    const int reps = 50;
    for (int rep = 0; rep < reps; ++rep) {
      const auto small = sample_target(spec, 1024, rng);
      const auto large = sample_target(spec, 4096, rng);
      ratio_sum += monte_carlo_payoff(small, 2).ci_half_width /
                   monte_carlo_payoff(large, 2).ci_half_width;
    }
    CHECK(ratio_sum / reps == doctest::Approx(2.0).epsilon(0.2));
  }
  SUBCASE("empty samples rejected") {
    CHECK_THROWS_AS(monte_carlo_payoff({}, 2), std::invalid_argument);
  }
}

TEST_CASE("generator-backed loader") {
  GeneratorLoader loader;
  loader.shape = AnsatzShape::univariate(3, 1);
  loader.theta.assign(6, 0.0);
  loader.input = InputStateSpec::uniform();
  QaeProblem p;
  p.grid_qubits = 3;
  p.strike = 2;
  p.generator = loader;
  // theta = 0 on a uniform input keeps the distribution uniform
  CHECK(oracle_good_probability(p) == doctest::Approx(0.375).epsilon(1e-10));
}
