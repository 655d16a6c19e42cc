#include "qgan/generator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgan {

AnsatzShape AnsatzShape::univariate(int n, int k) {
  AnsatzShape s;
  s.qubit_count = n;
  s.depth = k;
  s.registers = {n};
  s.validate();
  return s;
}

AnsatzShape AnsatzShape::multivariate(std::vector<int> registers, int k) {
  AnsatzShape s;
  s.qubit_count = 0;
  for (int r : registers) s.qubit_count += r;
  s.depth = k;
  s.registers = std::move(registers);
  s.validate();
  return s;
}

void AnsatzShape::validate() const {
  if (qubit_count < 1) throw std::invalid_argument("ansatz needs at least one qubit");
  if (depth < 0) throw std::invalid_argument("ansatz depth must be >= 0");
  if (registers.empty()) throw std::invalid_argument("registers must be nonempty");
  int total = 0;
  for (int r : registers) {
    if (r < 1) throw std::invalid_argument("register sizes must be >= 1");
    total += r;
  }
  if (total != qubit_count) throw std::invalid_argument("register sizes must sum to qubit count");
}

InputStateSpec InputStateSpec::uniform() {
  InputStateSpec s;
  s.kind = Kind::Uniform;
  s.param_init = ParamInit::Perturb;
  return s;
}

InputStateSpec InputStateSpec::zero() {
  InputStateSpec s;
  s.kind = Kind::Zero;
  s.param_init = ParamInit::RandomUniform;
  return s;
}

InputStateSpec InputStateSpec::fitted_normal(double mu, double sigma,
                                             std::vector<double> angles) {
  InputStateSpec s;
  s.kind = Kind::FittedNormal;
  s.param_init = ParamInit::Perturb;
  s.mu = mu;
  s.sigma = sigma;
  s.fitted_angles = std::move(angles);
  return s;
}

std::vector<GateOp> build_circuit(const AnsatzShape& shape, const std::vector<double>& theta) {
  shape.validate();
  if (static_cast<int>(theta.size()) != shape.parameter_count()) {
    throw std::invalid_argument("theta size does not match ansatz shape");
  }
  const int n = shape.qubit_count;
  std::vector<GateOp> gates;
  gates.reserve(static_cast<std::size_t>(shape.parameter_count()) +
                static_cast<std::size_t>(shape.depth) * n);
  for (int q = 0; q < n; ++q) gates.push_back(GateOp::ry(q, theta[shape.parameter_index(q, 0)]));
  for (int layer = 1; layer <= shape.depth; ++layer) {
    if (n == 2) {
      gates.push_back(GateOp::cz(0, 1));
    } else if (n > 2) {
      for (int i = 0; i < n; ++i) gates.push_back(GateOp::cz(i, (i + 1) % n));
    }
    for (int q = 0; q < n; ++q) {
      gates.push_back(GateOp::ry(q, theta[shape.parameter_index(q, layer)]));
    }
  }
  return gates;
}

std::vector<GateOp> normal_loader_circuit(int qubit_count, const std::vector<double>& angles) {
  if (static_cast<int>(angles.size()) != 2 * qubit_count) {
    throw std::invalid_argument("normal loader needs 2n angles");
  }
  std::vector<GateOp> gates;
  for (int q = 0; q < qubit_count; ++q) gates.push_back(GateOp::ry(q, angles[q]));
  for (int q = 0; q + 1 < qubit_count; ++q) gates.push_back(GateOp::cz(q, q + 1));
  for (int q = 0; q < qubit_count; ++q) gates.push_back(GateOp::ry(q, angles[qubit_count + q]));
  return gates;
}

std::vector<GateOp> input_circuit(const InputStateSpec& input, const AnsatzShape& shape) {
  switch (input.kind) {
    case InputStateSpec::Kind::Zero:
      return {};
    case InputStateSpec::Kind::Uniform: {
      std::vector<GateOp> gates;
      for (int q = 0; q < shape.qubit_count; ++q) gates.push_back(GateOp::h(q));
      return gates;
    }
    case InputStateSpec::Kind::FittedNormal:
      if (input.fitted_angles.empty()) {
        throw std::runtime_error("fitted-normal input has no fitted angles; run the fit first");
      }
      return normal_loader_circuit(shape.qubit_count, input.fitted_angles);
  }
  throw std::logic_error("unreachable");
}

Statevector prepare_input(const InputStateSpec& input, const AnsatzShape& shape) {
  Statevector state(shape.qubit_count);
  for (const GateOp& g : input_circuit(input, shape)) apply_inplace(state, g);
  return state;
}

Statevector generator_state(const AnsatzShape& shape, const std::vector<double>& theta,
                            const InputStateSpec& input) {
  Statevector state = prepare_input(input, shape);
  for (const GateOp& g : build_circuit(shape, theta)) apply_inplace(state, g);
  return state;
}

std::vector<double> generator_probabilities(const AnsatzShape& shape,
                                            const std::vector<double>& theta,
                                            const InputStateSpec& input) {
  return generator_state(shape, theta, input).probabilities();
}

EmpiricalDistribution sample_generator(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input, std::uint64_t shots,
                                       Rng& rng) {
  const Statevector state = generator_state(shape, theta, input);
  EmpiricalDistribution d;
  d.registers = shape.registers;
  d.counts = sample(state, shots, rng);
  d.total = shots;
  return d;
}

EmpiricalDistribution sample_generator(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input, std::uint64_t shots,
                                       std::uint64_t seed) {
  Rng rng(seed);
  return sample_generator(shape, theta, input, shots, rng);
}

std::vector<double> initial_parameters(const InputStateSpec& input, const AnsatzShape& shape,
                                       Rng& rng) {
  std::vector<double> theta(shape.parameter_count());
  if (input.param_init == InputStateSpec::ParamInit::Perturb) {
    if (input.perturb_delta <= 0.0) throw std::invalid_argument("perturb delta must be > 0");
    for (double& t : theta) t = rng.uniform(-input.perturb_delta, input.perturb_delta);
  } else {
    for (double& t : theta) t = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return theta;
}

}  // namespace qgan
