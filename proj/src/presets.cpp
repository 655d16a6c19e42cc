#include "qgan/presets.hpp"

#include <cmath>

#include "qgan/init_fit.hpp"

namespace qgan {

namespace {

TargetSpec make_target(TargetSpec::Kind kind) {
  TargetSpec t;
  t.kind = kind;
  switch (kind) {
    case TargetSpec::Kind::Lognormal:
      t.mu = 1.0;
      t.sigma = 1.0;
      break;
    case TargetSpec::Kind::Triangular:
      t.lower = 0.0;
      t.upper = 7.0;
      t.mode = 2.0;
      break;
    case TargetSpec::Kind::Bimodal:
      t.mu1 = 0.5;
      t.s1 = 1.0;
      t.mu2 = 3.5;
      t.s2 = 0.5;
      break;
    default:
      break;
  }
  t.lo = 0.0;
  t.hi = 7.0;
  t.registers = {3};
  return t;
}

}  // namespace

RunConfig benchmark_config(TargetSpec::Kind target, InputStateSpec::Kind init, int depth,
                           std::uint64_t seed, bool quick) {
  RunConfig c;
  c.target = make_target(target);
  c.data_count = 20000;
  c.shape = AnsatzShape::univariate(3, depth);
  switch (init) {
    case InputStateSpec::Kind::Uniform:
      c.input = InputStateSpec::uniform();
      break;
    case InputStateSpec::Kind::Zero:
      c.input = InputStateSpec::zero();
      break;
    case InputStateSpec::Kind::FittedNormal:
      c.input.kind = InputStateSpec::Kind::FittedNormal;
      c.input.param_init = InputStateSpec::ParamInit::Perturb;
      break;
  }
  c.disc_hidden1 = 50;
  c.disc_hidden2 = 20;
  c.training.epochs = quick ? 300 : 2000;
  c.training.batch_size = 2000;
  c.training.shots = 2000;
  c.training.gradient_shots = 8000;
  c.training.lr_generator = quick ? 1e-3 : 1e-4;
  c.training.lr_discriminator = quick ? 1e-3 : 1e-4;
  c.training.seed = seed;
  return c;
}

RunConfig multivariate_config(int depth, std::uint64_t seed, bool quick) {
  RunConfig c;
  c.target.kind = TargetSpec::Kind::Gaussian2d;
  c.target.lo = 0.0;
  c.target.hi = 7.0;
  c.target.registers = {3, 3};
  c.data_count = 4800;
  c.shape = AnsatzShape::multivariate({3, 3}, depth);
  c.input = InputStateSpec::uniform();
  c.disc_hidden1 = 512;
  c.disc_hidden2 = 256;
  c.training.epochs = quick ? 300 : 5000;
  c.training.batch_size = 1200;
  c.training.shots = 1200;
  c.training.gradient_shots = 8000;
  c.training.lr_generator = 1e-3;
  c.training.lr_discriminator = 1e-3;
  c.training.seed = seed;
  return c;
}

TargetStats target_statistics(const std::vector<std::uint64_t>& grid_samples,
                              const AffineMap& map) {
  double mean = 0.0;
  for (std::uint64_t s : grid_samples) mean += grid_map(s, map);
  mean /= static_cast<double>(grid_samples.size());
  double var = 0.0;
  for (std::uint64_t s : grid_samples) {
    const double d = grid_map(s, map) - mean;
    var += d * d;
  }
  var /= static_cast<double>(grid_samples.size());
  return {mean, std::sqrt(var)};
}

FittedInputInfo resolve_fitted_input(InputStateSpec& input,
                                     const std::vector<std::uint64_t>& data,
                                     const TargetSpec& target, std::uint64_t seed) {
  FittedInputInfo info;
  if (input.kind != InputStateSpec::Kind::FittedNormal || !input.fitted_angles.empty()) {
    return info;
  }
  info.stats = target_statistics(data, target.affine(0));
  FitProblem problem;
  problem.qubits = target.registers.at(0);
  problem.target = discretized_normal(info.stats.mean, info.stats.stddev, problem.qubits,
                                      target.lo, target.hi);
  problem.seed = seed;
  const FitResult fit = fit_normal_init(problem);
  input.mu = info.stats.mean;
  input.sigma = info.stats.stddev;
  input.fitted_angles = fit.angles;
  info.fitted = true;
  info.residual = fit.residual;
  return info;
}

namespace {
// sub-seed salts for the stages of a cell run
constexpr std::uint64_t kDataSalt = 0xD47A;
constexpr std::uint64_t kDiscSalt = 0xD15C;
constexpr std::uint64_t kFitSalt = 0xF17;
}  // namespace

CellResult run_cell(const RunConfig& config) {
  CellResult cell;
  const std::uint64_t seed = config.training.seed;
  cell.data = config.target.kind == TargetSpec::Kind::File
                  ? ingest_samples(config.target.path, config.target).samples
                  : sample_target(config.target, config.data_count, derive_seed(seed, kDataSalt));

  cell.resolved_input = config.input;
  cell.fit = resolve_fitted_input(cell.resolved_input, cell.data, config.target,
                                  derive_seed(seed, kFitSalt));

  Rng disc_rng(derive_seed(seed, kDiscSalt));
  const DiscriminatorModel disc = DiscriminatorModel::create(
      static_cast<int>(config.target.registers.size()), config.disc_hidden1, config.disc_hidden2,
      disc_rng);

  cell.training = train(config.training, cell.data, config.shape, cell.resolved_input, disc);
  return cell;
}

std::string target_kind_label(TargetSpec::Kind kind) {
  switch (kind) {
    case TargetSpec::Kind::Lognormal: return "log-normal";
    case TargetSpec::Kind::Triangular: return "triangular";
    case TargetSpec::Kind::Bimodal: return "bimodal";
    case TargetSpec::Kind::Gaussian2d: return "gaussian2d";
    case TargetSpec::Kind::File: return "file";
  }
  return "?";
}

std::string input_kind_label(InputStateSpec::Kind kind) {
  switch (kind) {
    case InputStateSpec::Kind::Uniform: return "uniform";
    case InputStateSpec::Kind::FittedNormal: return "normal";
    case InputStateSpec::Kind::Zero: return "random";
  }
  return "?";
}

}  // namespace qgan
