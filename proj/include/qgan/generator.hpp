#pragma once

#include <cstdint>
#include <vector>

#include "qgan/distributions.hpp"
#include "qgan/statevector.hpp"

namespace qgan {

// Variational form of the quantum generator: a first layer of single-qubit
// R_Y rotations followed by `depth` repetitions of [CZ entangling block,
// R_Y layer]. The entangling block applies CZ from qubit i to (i+1) mod n;
// for n == 2 a single CZ is emitted (the mod rule would duplicate the pair),
// for n == 1 the block is empty.
struct AnsatzShape {
  int qubit_count = 3;            // n
  int depth = 1;                  // k
  std::vector<int> registers{3};  // per-dimension qubit counts, sum == n

  static AnsatzShape univariate(int n, int k);
  static AnsatzShape multivariate(std::vector<int> registers, int k);

  int parameter_count() const { return (depth + 1) * qubit_count; }
  // theta is stored row-major over the (qubit, layer) matrix
  int parameter_index(int qubit, int layer) const { return qubit * (depth + 1) + layer; }
  void validate() const;
};

struct InputStateSpec {
  enum class Kind { Uniform, FittedNormal, Zero };
  enum class ParamInit { Perturb, RandomUniform };

  Kind kind = Kind::Uniform;
  ParamInit param_init = ParamInit::Perturb;
  double perturb_delta = 0.1;

  // FittedNormal: target statistics plus the angles produced by the
  // least-squares fit (see init_fit). Preparing the state requires angles.
  double mu = 0.0;
  double sigma = 1.0;
  std::vector<double> fitted_angles;

  static InputStateSpec uniform();
  static InputStateSpec zero();
  static InputStateSpec fitted_normal(double mu, double sigma, std::vector<double> angles);
};

std::vector<GateOp> build_circuit(const AnsatzShape& shape, const std::vector<double>& theta);

// Depth-1 loader used for the fitted-normal input state: R_Y layer, CZ chain
// (0,1),(1,2),...,(n-2,n-1), R_Y layer. Takes 2n angles, layer-major.
std::vector<GateOp> normal_loader_circuit(int qubit_count, const std::vector<double>& angles);

std::vector<GateOp> input_circuit(const InputStateSpec& input, const AnsatzShape& shape);
Statevector prepare_input(const InputStateSpec& input, const AnsatzShape& shape);

Statevector generator_state(const AnsatzShape& shape, const std::vector<double>& theta,
                            const InputStateSpec& input);
std::vector<double> generator_probabilities(const AnsatzShape& shape,
                                            const std::vector<double>& theta,
                                            const InputStateSpec& input);

EmpiricalDistribution sample_generator(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input, std::uint64_t shots, Rng& rng);
EmpiricalDistribution sample_generator(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input, std::uint64_t shots,
                                       std::uint64_t seed);

// Initial parameter draw: Perturb -> U[-delta, +delta] per angle,
// RandomUniform -> U[-pi, pi] per angle.
std::vector<double> initial_parameters(const InputStateSpec& input, const AnsatzShape& shape,
                                       Rng& rng);

}  // namespace qgan
