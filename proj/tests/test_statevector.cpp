#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "qgan/statevector.hpp"

using namespace qgan;

namespace {

constexpr double kPi = std::numbers::pi;

Statevector random_state(int qubits, Rng& rng, double min_prob = 0.0) {
  for (;;) {
    Statevector s(qubits);
    double norm = 0.0;
    for (auto& a : s.amplitudes) {
      a = cdouble{rng.normal(), rng.normal()};
      norm += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm);
    for (auto& a : s.amplitudes) a *= inv;
    if (min_prob <= 0.0) return s;
    bool ok = true;
    for (const auto& a : s.amplitudes) ok = ok && std::norm(a) >= min_prob;
    if (ok) return s;
  }
}

}  // namespace

TEST_CASE("single-qubit gates on basis states") {
  CHECK_THROWS_AS(apply_gate(Statevector(1), GateOp::ry(1, kPi)), std::invalid_argument);

  // RY(pi)|0> = |1>
  Statevector s = apply_gate(Statevector(1), GateOp::ry(0, kPi));
  CHECK(s.probabilities()[1] == doctest::Approx(1.0).epsilon(1e-12));

  // RY(pi/2)|0> -> (0.5, 0.5)
  s = apply_gate(Statevector(1), GateOp::ry(0, kPi / 2));
  CHECK(s.probabilities()[0] == doctest::Approx(0.5));
  CHECK(s.probabilities()[1] == doctest::Approx(0.5));

  // H on each of 3 qubits: all amplitudes 1/sqrt(8)
  Statevector u(3);
  for (int q = 0; q < 3; ++q) u = apply_gate(std::move(u), GateOp::h(q));
  for (const auto& a : u.amplitudes) {
    CHECK(a.real() == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));
    CHECK(a.imag() == doctest::Approx(0.0));
  }
}

TEST_CASE("CZ flips the |11> phase and is symmetric") {
  Statevector s = Statevector::basis_state(2, 3);
  s = apply_gate(std::move(s), GateOp::cz(0, 1));
  CHECK(s.amplitudes[3].real() == doctest::Approx(-1.0));

  Rng rng(7);
  const Statevector t = random_state(3, rng);
  const Statevector ab = apply_gate(t, GateOp::cz(0, 2));
  const Statevector ba = apply_gate(t, GateOp::cz(2, 0));
  for (std::size_t i = 0; i < t.dim(); ++i) {
    CHECK(ab.amplitudes[i] == ba.amplitudes[i]);
  }
}

TEST_CASE("probabilities") {
  CHECK(Statevector(3).probabilities()[0] == 1.0);
  Statevector u(3);
  for (int q = 0; q < 3; ++q) u = apply_gate(std::move(u), GateOp::h(q));
  for (double p : u.probabilities()) CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
  double sum = 0.0;
  for (double p : u.probabilities()) sum += p;
  CHECK(std::abs(sum - 1.0) < 1e-10);
}

TEST_CASE("sampling") {
  SUBCASE("point mass") {
    const Statevector s = Statevector::basis_state(1, 1);
    const auto counts = sample(s, 100, 42);
    CHECK(counts[0] == 0);
    CHECK(counts[1] == 100);
  }
  SUBCASE("uniform within 5 sigma") {
    Statevector u(3);
    for (int q = 0; q < 3; ++q) u = apply_gate(std::move(u), GateOp::h(q));
    const auto counts = sample(u, 8000, 1);
    const double sigma = std::sqrt(8000.0 * 0.125 * 0.875);
    for (auto c : counts) {
      CHECK(std::abs(static_cast<double>(c) - 1000.0) <= 5.0 * sigma);
    }
  }
  SUBCASE("seed determinism") {
    Rng rng(9);
    const Statevector s = random_state(3, rng);
    CHECK(sample(s, 500, 123) == sample(s, 500, 123));
  }
  SUBCASE("zero shots rejected") {
    CHECK_THROWS_AS(sample(Statevector(1), 0, 0), std::invalid_argument);
  }
}

TEST_CASE("sampling chi-square against exact probabilities") {
  // alpha = 0.001, 7 degrees of freedom
  constexpr double kCritical = 24.3219;
  Rng rng(2024);
  for (int rep = 0; rep < 3; ++rep) {
    const Statevector s = random_state(3, rng, 1e-3);
    const std::vector<double> p = s.probabilities();
    const auto counts = sample(s, 100000, rng);
    double chi2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double expected = p[i] * 100000.0;
      const double d = static_cast<double>(counts[i]) - expected;
      chi2 += d * d / expected;
    }
    CHECK(chi2 < kCritical);
  }
}

TEST_CASE("unitarity over long random circuits") {
  Rng rng(5);
  Statevector s = random_state(3, rng);
  for (int i = 0; i < 10000; ++i) {
    const int pick = static_cast<int>(rng.below(6));
    const int a = static_cast<int>(rng.below(3));
    int b = static_cast<int>(rng.below(3));
    if (b == a) b = (b + 1) % 3;
    switch (pick) {
      case 0: apply_inplace(s, GateOp::ry(a, rng.uniform(-kPi, kPi))); break;
      case 1: apply_inplace(s, GateOp::h(a)); break;
      case 2: apply_inplace(s, GateOp::x(a)); break;
      case 3: apply_inplace(s, GateOp::cz(a, b)); break;
      case 4: apply_inplace(s, GateOp::cx(a, b)); break;
      default: apply_inplace(s, GateOp::controlled_ry(a, b, rng.uniform(-kPi, kPi))); break;
    }
  }
  CHECK(std::abs(s.norm_sq() - 1.0) < 1e-10);
}

TEST_CASE("controlled operator powers") {
  Circuit x_on_0;
  x_on_0.add(GateOp::x(0));

  SUBCASE("control |0> leaves the state unchanged") {
    Statevector s = Statevector::basis_state(2, 0);
    s = apply_operator_power_controlled(std::move(s), x_on_0, 1, 1);
    CHECK(s.probabilities()[0] == doctest::Approx(1.0));
  }
  SUBCASE("control |1> applies the operator") {
    Statevector s = Statevector::basis_state(2, 2);  // control qubit 1 set
    s = apply_operator_power_controlled(std::move(s), x_on_0, 1, 1);
    CHECK(s.probabilities()[3] == doctest::Approx(1.0));
  }
  SUBCASE("power 2 of RY(pi/2) equals RY(pi)") {
    Circuit ry_half;
    ry_half.add(GateOp::ry(0, kPi / 2));
    Statevector s = Statevector::basis_state(2, 2);
    s = apply_operator_power_controlled(std::move(s), ry_half, 2, 1);
    const Statevector ref = apply_gate(Statevector::basis_state(2, 2), GateOp::ry(0, kPi));
    for (std::size_t i = 0; i < s.dim(); ++i) {
      CHECK(std::abs(s.amplitudes[i] - ref.amplitudes[i]) < 1e-12);
    }
  }
  SUBCASE("overlapping control rejected") {
    CHECK_THROWS_AS(apply_operator_power_controlled(Statevector(2), x_on_0, 1, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("phase reflection") {
  // mask over both qubits, value 0: flips only |00>
  Statevector s(2);
  for (int q = 0; q < 2; ++q) apply_inplace(s, GateOp::h(q));
  apply_inplace(s, GateOp::phase_reflection(3, 0));
  CHECK(s.amplitudes[0].real() == doctest::Approx(-0.5));
  CHECK(s.amplitudes[1].real() == doctest::Approx(0.5));

  // mask 0: global -1
  apply_inplace(s, GateOp::phase_reflection(0, 0));
  CHECK(s.amplitudes[1].real() == doctest::Approx(-0.5));
}

TEST_CASE("Householder loader") {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const HouseholderLoad load = HouseholderLoad::from_probabilities(p);
  Statevector s(2);
  apply_inplace(s, CircuitOp{load});
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(s.amplitudes[i].real() == doctest::Approx(std::sqrt(p[i])).epsilon(1e-12));
  }
  // self-inverse
  apply_inplace(s, CircuitOp{load});
  CHECK(s.amplitudes[0].real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("QFT matches the direct Fourier sum and inverts cleanly") {
  Rng rng(11);
  for (int m = 1; m <= 4; ++m) {
    const std::uint64_t dim = 1ULL << m;
    Statevector s = random_state(m, rng);
    const Statevector in = s;
    apply_qft(s, 0, m);
    for (std::uint64_t x = 0; x < dim; ++x) {
      cdouble expect{0.0, 0.0};
      for (std::uint64_t y = 0; y < dim; ++y) {
        const double phase = 2.0 * kPi * static_cast<double>(x * y) / static_cast<double>(dim);
        expect += in.amplitudes[y] * std::polar(1.0, phase);
      }
      expect /= std::sqrt(static_cast<double>(dim));
      CHECK(std::abs(s.amplitudes[x] - expect) < 1e-10);
    }
  }
  for (int m = 1; m <= 8; ++m) {
    Statevector s = random_state(m, rng);
    const Statevector in = s;
    apply_qft(s, 0, m);
    apply_inverse_qft(s, 0, m);
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      CHECK(std::abs(s.amplitudes[i] - in.amplitudes[i]) < 1e-10);
    }
  }
}

TEST_CASE("QFT acts on an embedded register only") {
  Rng rng(13);
  Statevector s = random_state(5, rng);
  // forward then inverse over qubits [2,5) is the identity and must leave
  // the low qubits untouched
  const Statevector in = s;
  apply_qft(s, 2, 3);
  apply_inverse_qft(s, 2, 3);
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    CHECK(std::abs(s.amplitudes[i] - in.amplitudes[i]) < 1e-10);
  }
}

TEST_CASE("marginal probabilities") {
  Statevector s(3);
  apply_inplace(s, GateOp::h(2));
  const std::vector<double> m = marginal_probabilities(s, 2, 1);
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.5));
  const std::vector<double> low = marginal_probabilities(s, 0, 2);
  CHECK(low[0] == doctest::Approx(1.0));
}
