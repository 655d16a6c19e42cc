#pragma once

#include <cstdint>
#include <vector>

#include "qgan/discriminator.hpp"
#include "qgan/distributions.hpp"
#include "qgan/generator.hpp"

namespace qgan {

// Maps a flat grid index to the discriminator input: one coordinate per
// register, each normalized to [0, 1] by its register's top index.
struct GridEncoder {
  std::vector<int> registers{3};

  int dimension() const { return static_cast<int>(registers.size()); }
  std::vector<double> encode(std::uint64_t index) const;
  // all grid points, row-major (grid_size x dimension)
  std::vector<double> encode_all() const;
  std::uint64_t grid_size() const;
};

struct TrainingConfig {
  int epochs = 2000;
  int batch_size = 2000;
  int shots = 2000;             // generated-batch measurements per step
  int gradient_shots = 8000;    // shots per shifted distribution estimate
  bool exact_gradients = false; // analytic probabilities instead of shots
  double lr_generator = 1e-4;
  double lr_discriminator = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double penalty_lambda = 1.0;
  double penalty_perturb_std = 0.1;
  std::uint64_t seed = 0;
  bool record_ks = false;       // per-epoch KS (final KS is always computed)
  int ks_samples = 500;
  double ks_alpha = 0.05;
  // stop once the per-epoch relative entropy drops to this fraction of its
  // first-epoch value; 0 disables early stopping
  double stop_at_rel_entropy_ratio = 0.0;

  void validate(std::size_t data_size) const;
};

struct AmsgradState {
  std::vector<double> m, v, v_hat;

  explicit AmsgradState(std::size_t n) : m(n, 0.0), v(n, 0.0), v_hat(n, 0.0) {}
};

// m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;  v_hat <- max(v_hat, v);
// params <- params - lr * m / (sqrt(v_hat) + eps)
void amsgrad_step(AmsgradState& state, std::vector<double>& params,
                  const std::vector<double>& gradient, double lr, double beta1, double beta2,
                  double epsilon);

// L_G = -(1/m) sum_l log D(g_l), scores clamped.
double loss_generator(const DiscriminatorModel& model, const GridEncoder& encoder,
                      const std::vector<std::uint64_t>& generated);

// L_D = (1/m) sum_l [log D(x_l) + log(1 - D(g_l))]; the optimizer ascends this.
double loss_discriminator(const DiscriminatorModel& model, const GridEncoder& encoder,
                          const std::vector<std::uint64_t>& real,
                          const std::vector<std::uint64_t>& generated);

// Parameter-shift derivative of the outcome distribution w.r.t. one angle:
// dp/dtheta_a = (p(theta + pi/2 e_a) - p(theta - pi/2 e_a)) / 2.
std::vector<double> probability_shift_derivative(const AnsatzShape& shape,
                                                 const std::vector<double>& theta,
                                                 const InputStateSpec& input, int param_index);

// dL_G/dtheta_a = -sum_j (dp_j/dtheta_a) log D(j), with the shifted
// distributions either exact or estimated from `gradient_shots` measurements.
// log_scores holds log D at every grid point.
std::vector<double> generator_gradient(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input,
                                       const std::vector<double>& log_scores, bool exact,
                                       int gradient_shots, Rng& rng);
std::vector<double> generator_gradient(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input,
                                       const DiscriminatorModel& model, bool exact,
                                       int gradient_shots, Rng& rng);

struct TrainingTrace {
  std::vector<double> loss_g;       // per-epoch means over batches
  std::vector<double> loss_d;
  std::vector<double> rel_entropy;  // generator vs training-set distribution
  std::vector<double> ks;           // empty unless record_ks
};

struct TrainingResult {
  std::vector<double> theta;
  DiscriminatorModel discriminator;
  TrainingTrace trace;
  double final_ks = 0.0;
  bool final_ks_accepted = false;
  double final_rel_entropy = 0.0;
};

// Alternating adversarial optimization; one discriminator step and one
// generator step per batch. Deterministic for a given config seed.
TrainingResult train(const TrainingConfig& config, const std::vector<std::uint64_t>& data,
                     const AnsatzShape& shape, const InputStateSpec& input,
                     DiscriminatorModel discriminator);

}  // namespace qgan
