#pragma once

#include <string>

#include "qgan/io.hpp"

namespace qgan {

// Benchmark presets. Full presets reproduce the simulation-study protocol
// (20k samples, 2000 epochs, batch 2000, lr 1e-4); quick presets use the
// hardware-style learning rate 1e-3 with 300 epochs for CI-scale runtimes.
RunConfig benchmark_config(TargetSpec::Kind target, InputStateSpec::Kind init, int depth,
                           std::uint64_t seed, bool quick);

// Appendix-B style multivariate run: 6-qubit (3, 3) generator on a correlated
// 2-d Gaussian, uniform init, 512/256 discriminator, batch 1200.
RunConfig multivariate_config(int depth, std::uint64_t seed, bool quick);

// Target statistics used for fitted-normal input states.
struct TargetStats {
  double mean = 0.0;
  double stddev = 1.0;
};
TargetStats target_statistics(const std::vector<std::uint64_t>& grid_samples,
                              const AffineMap& map);

// Resolves a FittedNormal input spec by running the Appendix-C style fit
// against the training data statistics. No-op for other input kinds.
struct FittedInputInfo {
  bool fitted = false;
  TargetStats stats;
  double residual = 0.0;
};
FittedInputInfo resolve_fitted_input(InputStateSpec& input,
                                     const std::vector<std::uint64_t>& data,
                                     const TargetSpec& target, std::uint64_t seed);

// One full benchmark run: sample the target, resolve the input state, build
// the discriminator, train. Sub-seeds are derived from config.training.seed,
// so a cell is reproducible from its config alone.
struct CellResult {
  TrainingResult training;
  std::vector<std::uint64_t> data;
  FittedInputInfo fit;
  InputStateSpec resolved_input;
};
CellResult run_cell(const RunConfig& config);

std::string target_kind_label(TargetSpec::Kind kind);
std::string input_kind_label(InputStateSpec::Kind kind);

}  // namespace qgan
