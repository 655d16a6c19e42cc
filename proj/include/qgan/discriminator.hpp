#pragma once

#include <cstdint>
#include <vector>

#include "qgan/rng.hpp"

namespace qgan {

// Three-layer dense network: input -> hidden1 -> hidden2 -> 1, LeakyReLU
// after the first two affine maps, sigmoid on the output. The benchmark
// configuration is 50/20 hidden nodes (512/256 for multivariate data).
struct DiscriminatorModel {
  int input_dim = 1;
  int hidden1 = 50;
  int hidden2 = 20;
  double leaky_slope = 0.2;

  std::vector<double> w1, b1;  // w1: hidden1 x input_dim, row-major
  std::vector<double> w2, b2;  // w2: hidden2 x hidden1
  std::vector<double> w3, b3;  // w3: 1 x hidden2

  static DiscriminatorModel create(int input_dim, int hidden1, int hidden2, Rng& rng);
  static DiscriminatorModel benchmark_univariate(Rng& rng) { return create(1, 50, 20, rng); }
  static DiscriminatorModel benchmark_multivariate(int dims, Rng& rng) {
    return create(dims, 512, 256, rng);
  }

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& flat);
};

// Scores are clamped to [1e-7, 1 - 1e-7] inside every log term.
double clamp_score(double score);

struct ForwardCache {
  int batch = 0;
  std::vector<double> x;            // batch x input_dim
  std::vector<double> z1, a1;       // batch x hidden1
  std::vector<double> z2, a2;       // batch x hidden2
  std::vector<double> score;        // batch, in (0,1)
};

ForwardCache forward_batch(const DiscriminatorModel& model, const std::vector<double>& x,
                           int batch);
double forward(const DiscriminatorModel& model, const std::vector<double>& x);

// Gradients of a loss L w.r.t. all parameters given dL/d(score) per sample.
// Returned flat, in flatten() order. Per-sample contributions are summed.
std::vector<double> backward(const DiscriminatorModel& model, const ForwardCache& cache,
                             const std::vector<double>& upstream);

// d(score)/d(input) per sample, batch x input_dim.
std::vector<double> input_gradients(const DiscriminatorModel& model, const ForwardCache& cache);

struct PenaltyResult {
  double value = 0.0;
  std::vector<double> gradient;  // flat, d(penalty)/d(parameters)
};

// penalty = lambda * mean_l || d score / d x (x_l) ||^2, with exact parameter
// gradients (the LeakyReLU masks are piecewise constant, so the second-order
// terms through them vanish almost everywhere).
PenaltyResult gradient_penalty_at(const DiscriminatorModel& model, const std::vector<double>& x,
                                  int batch, double lambda);

// Spec entry point: perturbs the batch with N(0, perturb_std^2) per coordinate
// before evaluating the penalty.
PenaltyResult gradient_penalty(const DiscriminatorModel& model, const std::vector<double>& x,
                               int batch, double lambda, double perturb_std, Rng& rng);

}  // namespace qgan
