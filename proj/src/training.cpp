#include "qgan/training.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgan/metrics.hpp"

namespace qgan {

namespace {

// Scores at every grid point; training inputs take at most 2^n distinct
// values, so batch losses and gradients reduce to count-weighted sums.
std::vector<double> grid_scores(const DiscriminatorModel& model, const GridEncoder& encoder) {
  const std::vector<double> points = encoder.encode_all();
  const int g = static_cast<int>(encoder.grid_size());
  return forward_batch(model, points, g).score;
}

std::vector<double> counts_of(const std::vector<std::uint64_t>& samples, std::uint64_t grid) {
  std::vector<double> c(grid, 0.0);
  for (std::uint64_t s : samples) c.at(s) += 1.0;
  return c;
}

}  // namespace

std::vector<double> GridEncoder::encode(std::uint64_t index) const {
  std::vector<double> x(registers.size());
  const std::vector<std::uint64_t> parts = split_grid_index(index, registers);
  for (std::size_t d = 0; d < registers.size(); ++d) {
    const double top = static_cast<double>((1ULL << registers[d]) - 1);
    x[d] = top > 0 ? static_cast<double>(parts[d]) / top : 0.0;
  }
  return x;
}

std::vector<double> GridEncoder::encode_all() const {
  const std::uint64_t g = grid_size();
  std::vector<double> out;
  out.reserve(g * registers.size());
  for (std::uint64_t i = 0; i < g; ++i) {
    const std::vector<double> x = encode(i);
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

std::uint64_t GridEncoder::grid_size() const {
  int n = 0;
  for (int r : registers) n += r;
  return 1ULL << n;
}

void TrainingConfig::validate(std::size_t data_size) const {
  if (data_size == 0) throw std::invalid_argument("training data is empty");
  if (batch_size < 1 || static_cast<std::size_t>(batch_size) > data_size) {
    throw std::invalid_argument("batch size must be in [1, data size]");
  }
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (!exact_gradients && gradient_shots < 1) {
    throw std::invalid_argument("gradient shots must be >= 1");
  }
  if (lr_generator <= 0.0 || lr_discriminator <= 0.0) {
    throw std::invalid_argument("learning rates must be > 0");
  }
  if (penalty_lambda < 0.0) throw std::invalid_argument("penalty weight must be >= 0");
}

void amsgrad_step(AmsgradState& state, std::vector<double>& params,
                  const std::vector<double>& gradient, double lr, double beta1, double beta2,
                  double epsilon) {
  if (params.size() != gradient.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("amsgrad shape mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = gradient[i];
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
    if (state.v[i] > state.v_hat[i]) state.v_hat[i] = state.v[i];
    params[i] -= lr * state.m[i] / (std::sqrt(state.v_hat[i]) + epsilon);
  }
}

double loss_generator(const DiscriminatorModel& model, const GridEncoder& encoder,
                      const std::vector<std::uint64_t>& generated) {
  if (generated.empty()) throw std::invalid_argument("generated batch is empty");
  const std::vector<double> scores = grid_scores(model, encoder);
  double loss = 0.0;
  for (std::uint64_t g : generated) loss -= std::log(clamp_score(scores.at(g)));
  return loss / static_cast<double>(generated.size());
}

double loss_discriminator(const DiscriminatorModel& model, const GridEncoder& encoder,
                          const std::vector<std::uint64_t>& real,
                          const std::vector<std::uint64_t>& generated) {
  if (real.empty() || generated.empty()) throw std::invalid_argument("empty batch");
  if (real.size() != generated.size()) throw std::invalid_argument("batch sizes must match");
  const std::vector<double> scores = grid_scores(model, encoder);
  double loss = 0.0;
  for (std::size_t l = 0; l < real.size(); ++l) {
    loss += std::log(clamp_score(scores.at(real[l])));
    loss += std::log(1.0 - clamp_score(scores.at(generated[l])));
  }
  return loss / static_cast<double>(real.size());
}

std::vector<double> probability_shift_derivative(const AnsatzShape& shape,
                                                 const std::vector<double>& theta,
                                                 const InputStateSpec& input, int param_index) {
  std::vector<double> shifted = theta;
  shifted[param_index] += std::numbers::pi / 2.0;
  const std::vector<double> plus = generator_probabilities(shape, shifted, input);
  shifted[param_index] = theta[param_index] - std::numbers::pi / 2.0;
  const std::vector<double> minus = generator_probabilities(shape, shifted, input);
  std::vector<double> d(plus.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = 0.5 * (plus[j] - minus[j]);
  return d;
}

std::vector<double> generator_gradient(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input,
                                       const std::vector<double>& log_scores, bool exact,
                                       int gradient_shots, Rng& rng) {
  const int params = shape.parameter_count();
  std::vector<double> grad(params, 0.0);
  std::vector<double> shifted = theta;
  for (int a = 0; a < params; ++a) {
    std::vector<double> plus, minus;
    for (const double sign : {1.0, -1.0}) {
      shifted[a] = theta[a] + sign * std::numbers::pi / 2.0;
      std::vector<double> p = generator_probabilities(shape, shifted, input);
      if (!exact) {
        Statevector st = generator_state(shape, shifted, input);
        const std::vector<std::uint64_t> counts = sample(st, gradient_shots, rng);
        for (std::size_t j = 0; j < p.size(); ++j) {
          p[j] = static_cast<double>(counts[j]) / static_cast<double>(gradient_shots);
        }
      }
      (sign > 0 ? plus : minus) = std::move(p);
    }
    shifted[a] = theta[a];
    double acc = 0.0;
    for (std::size_t j = 0; j < plus.size(); ++j) {
      acc += 0.5 * (plus[j] - minus[j]) * log_scores[j];
    }
    grad[a] = -acc;
  }
  return grad;
}

std::vector<double> generator_gradient(const AnsatzShape& shape, const std::vector<double>& theta,
                                       const InputStateSpec& input,
                                       const DiscriminatorModel& model, bool exact,
                                       int gradient_shots, Rng& rng) {
  GridEncoder encoder{shape.registers};
  std::vector<double> log_scores = grid_scores(model, encoder);
  for (double& s : log_scores) s = std::log(clamp_score(s));
  return generator_gradient(shape, theta, input, log_scores, exact, gradient_shots, rng);
}

TrainingResult train(const TrainingConfig& config, const std::vector<std::uint64_t>& data,
                     const AnsatzShape& shape, const InputStateSpec& input,
                     DiscriminatorModel discriminator) {
  config.validate(data.size());
  shape.validate();
  if (discriminator.input_dim != static_cast<int>(shape.registers.size())) {
    throw std::invalid_argument("discriminator input dimension must match data dimension");
  }

  Rng rng(config.seed);
  const GridEncoder encoder{shape.registers};
  const std::uint64_t grid = encoder.grid_size();
  const std::vector<double> grid_points = encoder.encode_all();
  const std::vector<double> p_data = EmpiricalDistribution::from_samples(data, shape.registers)
                                         .probabilities();

  std::vector<double> theta = initial_parameters(input, shape, rng);

  AmsgradState gen_opt(theta.size());
  AmsgradState disc_opt(discriminator.parameter_count());
  std::vector<double> disc_params = discriminator.flatten();

  TrainingResult result;
  const int batches = static_cast<int>(data.size()) / config.batch_size;
  std::vector<std::uint64_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<std::uint64_t> real_batch(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_lg = 0.0, epoch_ld = 0.0;
    for (int b = 0; b < batches; ++b) {
      for (int i = 0; i < config.batch_size; ++i) {
        real_batch[i] = data[order[static_cast<std::size_t>(b) * config.batch_size + i]];
      }

      // generated batch: measure the generator `shots` times
      const Statevector gen_state = generator_state(shape, theta, input);
      const std::vector<std::uint64_t> gen_counts = sample(gen_state, config.shots, rng);

      // --- discriminator: one ascent step on L_D (descend -L_D + penalty) ---
      const ForwardCache cache = forward_batch(discriminator, grid_points,
                                               static_cast<int>(grid));
      const std::vector<double> real_counts = counts_of(real_batch, grid);
      const double m_real = static_cast<double>(config.batch_size);
      const double m_gen = static_cast<double>(config.shots);
      std::vector<double> upstream(grid, 0.0);
      double batch_ld = 0.0;
      for (std::uint64_t j = 0; j < grid; ++j) {
        const double d = clamp_score(cache.score[j]);
        const double wr = real_counts[j] / m_real;
        const double wg = static_cast<double>(gen_counts[j]) / m_gen;
        batch_ld += wr * std::log(d) + wg * std::log(1.0 - d);
        // d(-L_D)/dD at grid point j
        upstream[j] = -wr / d + wg / (1.0 - d);
      }
      std::vector<double> disc_grad = backward(discriminator, cache, upstream);
      if (config.penalty_lambda > 0.0) {
        std::vector<double> x_tilde(static_cast<std::size_t>(config.batch_size) *
                                    encoder.dimension());
        for (int i = 0; i < config.batch_size; ++i) {
          const std::vector<double> x = encoder.encode(real_batch[i]);
          for (int d = 0; d < encoder.dimension(); ++d) {
            x_tilde[static_cast<std::size_t>(i) * encoder.dimension() + d] =
                x[d] + rng.normal(0.0, config.penalty_perturb_std);
          }
        }
        const PenaltyResult penalty = gradient_penalty_at(discriminator, x_tilde,
                                                          config.batch_size,
                                                          config.penalty_lambda);
        for (std::size_t i = 0; i < disc_grad.size(); ++i) disc_grad[i] += penalty.gradient[i];
      }
      amsgrad_step(disc_opt, disc_params, disc_grad, config.lr_discriminator, config.beta1,
                   config.beta2, config.epsilon);
      discriminator.unflatten(disc_params);

      // --- generator: one descent step on L_G via parameter shift, using the
      // updated discriminator ---
      std::vector<double> log_scores = grid_scores(discriminator, encoder);
      for (double& s : log_scores) s = std::log(clamp_score(s));
      const std::vector<double> gen_grad =
          generator_gradient(shape, theta, input, log_scores, config.exact_gradients,
                             config.gradient_shots, rng);
      amsgrad_step(gen_opt, theta, gen_grad, config.lr_generator, config.beta1, config.beta2,
                   config.epsilon);

      // batch losses for the trace: L_D with the scores it was optimized
      // against, L_G of the measured batch against the updated discriminator
      double batch_lg = 0.0;
      for (std::uint64_t j = 0; j < grid; ++j) {
        batch_lg -= static_cast<double>(gen_counts[j]) / m_gen * log_scores[j];
      }
      if (!std::isfinite(batch_lg) || !std::isfinite(batch_ld)) {
        throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                 std::to_string(epoch));
      }
      epoch_lg += batch_lg;
      epoch_ld += batch_ld;
    }

    result.trace.loss_g.push_back(epoch_lg / batches);
    result.trace.loss_d.push_back(epoch_ld / batches);
    const std::vector<double> p_gen = generator_probabilities(shape, theta, input);
    result.trace.rel_entropy.push_back(relative_entropy(p_gen, p_data));
    if (config.stop_at_rel_entropy_ratio > 0.0 &&
        result.trace.rel_entropy.back() <=
            config.stop_at_rel_entropy_ratio * result.trace.rel_entropy.front()) {
      break;
    }
    if (config.record_ks) {
      const Statevector st = generator_state(shape, theta, input);
      const std::vector<std::uint64_t> gc = sample(st, config.ks_samples, rng);
      std::vector<std::uint64_t> gs;
      gs.reserve(config.ks_samples);
      for (std::uint64_t j = 0; j < gc.size(); ++j) {
        gs.insert(gs.end(), gc[j], j);
      }
      std::vector<std::uint64_t> xs(config.ks_samples);
      for (int i = 0; i < config.ks_samples; ++i) xs[i] = data[rng.below(data.size())];
      result.trace.ks.push_back(ks_statistic(gs, xs, config.ks_alpha).statistic);
    }
  }

  // final evaluation
  {
    const Statevector st = generator_state(shape, theta, input);
    const std::vector<std::uint64_t> gc = sample(st, config.ks_samples, rng);
    std::vector<std::uint64_t> gs;
    gs.reserve(config.ks_samples);
    for (std::uint64_t j = 0; j < gc.size(); ++j) gs.insert(gs.end(), gc[j], j);
    std::vector<std::uint64_t> xs(config.ks_samples);
    for (int i = 0; i < config.ks_samples; ++i) xs[i] = data[rng.below(data.size())];
    const KsResult ks = ks_statistic(gs, xs, config.ks_alpha);
    result.final_ks = ks.statistic;
    result.final_ks_accepted = ks.accepted;
    result.final_rel_entropy =
        relative_entropy(generator_probabilities(shape, theta, input), p_data);
  }

  result.theta = std::move(theta);
  result.discriminator = std::move(discriminator);
  return result;
}

}  // namespace qgan
