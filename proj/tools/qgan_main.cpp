// Command-line front end: training runs, Table-style benchmark sweeps,
// option pricing, and plot-data emission.

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "qgan/io.hpp"
#include "qgan/metrics.hpp"
#include "qgan/presets.hpp"
#include "qgan/qae.hpp"

namespace fs = std::filesystem;
using namespace qgan;

namespace {

void apply_quick(RunConfig& config) {
  config.training.epochs = std::min(config.training.epochs, 300);
  config.training.lr_generator = 1e-3;
  config.training.lr_discriminator = 1e-3;
}

unsigned worker_count() {
  if (const char* env = std::getenv("QGAN_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void save_run_artifacts(const RunConfig& config, const CellResult& cell, const fs::path& out) {
  fs::create_directories(out);
  save_json(to_json(config), (out / "config.json").string());

  GeneratorCheckpoint checkpoint;
  checkpoint.shape = config.shape;
  checkpoint.theta = cell.training.theta;
  checkpoint.input = cell.resolved_input;
  checkpoint.affine = config.target.affine(0);
  save_json(to_json(checkpoint), (out / "generator.json").string());
  save_json(to_json(cell.training.discriminator), (out / "discriminator.json").string());

  if (cell.fit.fitted) {
    save_json(nlohmann::json{{"mean", cell.fit.stats.mean},
                             {"stddev", cell.fit.stats.stddev},
                             {"angles", cell.resolved_input.fitted_angles},
                             {"residual", cell.fit.residual}},
              (out / "fitted_init.json").string());
  }

  write_trace_csv(cell.training.trace, (out / "trace.csv").string());

  std::vector<AffineMap> maps;
  for (int d = 0; d < static_cast<int>(config.target.registers.size()); ++d) {
    maps.push_back(config.target.affine(d));
  }
  write_samples_file(cell.data, config.target.registers, maps,
                     (out / "training_samples.csv").string());

  save_json(nlohmann::json{{"final_ks", cell.training.final_ks},
                           {"ks_accepted", cell.training.final_ks_accepted},
                           {"final_rel_entropy", cell.training.final_rel_entropy},
                           {"epochs", config.training.epochs},
                           {"seed", config.training.seed}},
            (out / "metrics.json").string());
}

int cmd_train(const std::string& config_path, std::int64_t seed, const std::string& out_dir,
              bool quick) {
  RunConfig config = run_config_from_json(load_json(config_path));
  if (seed >= 0) config.training.seed = static_cast<std::uint64_t>(seed);
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (quick) apply_quick(config);

  const CellResult cell = run_cell(config);
  save_run_artifacts(config, cell, config.out_dir);
  std::cout << "final KS " << cell.training.final_ks
            << (cell.training.final_ks_accepted ? " (accepted)" : " (rejected)")
            << ", relative entropy " << cell.training.final_rel_entropy << "\n"
            << "artifacts in " << config.out_dir << "\n";
  return 0;
}

struct SweepRow {
  TargetSpec::Kind target = TargetSpec::Kind::Lognormal;
  InputStateSpec::Kind init = InputStateSpec::Kind::Uniform;
  int depth = 1;
  std::uint64_t seed = 0;
  double ks = 0.0;
  bool accepted = false;
  double rel_entropy = 0.0;
};

int cmd_sweep(const std::string& out_dir, std::int64_t base_seed, bool quick) {
  const std::vector<TargetSpec::Kind> targets{
      TargetSpec::Kind::Lognormal, TargetSpec::Kind::Triangular, TargetSpec::Kind::Bimodal};
  const std::vector<InputStateSpec::Kind> inits{InputStateSpec::Kind::Uniform,
                                                InputStateSpec::Kind::FittedNormal,
                                                InputStateSpec::Kind::Zero};
  const int seeds = quick ? 2 : 10;
  const std::uint64_t seed0 = base_seed >= 0 ? static_cast<std::uint64_t>(base_seed) : 0;

  struct Job {
    TargetSpec::Kind target;
    InputStateSpec::Kind init;
    int depth;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto t : targets) {
    for (auto i : inits) {
      for (int k = 1; k <= 3; ++k) {
        for (int s = 0; s < seeds; ++s) jobs.push_back({t, i, k, seed0 + s});
      }
    }
  }

  std::vector<SweepRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex io_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      RunConfig config = benchmark_config(job.target, job.init, job.depth, job.seed, quick);
      const CellResult cell = run_cell(config);
      rows[j] = {job.target,
                 job.init,
                 job.depth,
                 job.seed,
                 cell.training.final_ks,
                 cell.training.final_ks_accepted,
                 cell.training.final_rel_entropy};
      const std::size_t finished = ++done;
      std::lock_guard<std::mutex> lock(io_mutex);
      std::cout << "[" << finished << "/" << jobs.size() << "] "
                << target_kind_label(job.target) << " " << input_kind_label(job.init)
                << " k=" << job.depth << " seed=" << job.seed
                << " KS=" << cell.training.final_ks
                << (cell.training.final_ks_accepted ? " accept" : " reject") << std::endl;
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = std::min<unsigned>(worker_count(),
                                              static_cast<unsigned>(jobs.size()));
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  fs::create_directories(out_dir);
  {
    std::ofstream runs((fs::path(out_dir) / "sweep_runs.csv").string());
    runs << "data,init,k,seed,ks,accepted,rel_entropy\n";
    for (const SweepRow& r : rows) {
      runs << target_kind_label(r.target) << ',' << input_kind_label(r.init) << ',' << r.depth
           << ',' << r.seed << ',' << r.ks << ',' << (r.accepted ? 1 : 0) << ',' << r.rel_entropy
           << '\n';
    }
  }
  std::ofstream agg((fs::path(out_dir) / "sweep_aggregate.csv").string());
  agg << "data,init,k,mu_ks,sigma_ks,n_accept,mu_re,sigma_re\n";
  for (auto t : targets) {
    for (auto i : inits) {
      for (int k = 1; k <= 3; ++k) {
        std::vector<const SweepRow*> cell;
        for (const SweepRow& r : rows) {
          if (r.target == t && r.init == i && r.depth == k) cell.push_back(&r);
        }
        const double n = static_cast<double>(cell.size());
        double mu_ks = 0, mu_re = 0;
        int accepted = 0;
        for (const SweepRow* r : cell) {
          mu_ks += r->ks;
          mu_re += r->rel_entropy;
          accepted += r->accepted ? 1 : 0;
        }
        mu_ks /= n;
        mu_re /= n;
        double s_ks = 0, s_re = 0;
        for (const SweepRow* r : cell) {
          s_ks += (r->ks - mu_ks) * (r->ks - mu_ks);
          s_re += (r->rel_entropy - mu_re) * (r->rel_entropy - mu_re);
        }
        s_ks = cell.size() > 1 ? std::sqrt(s_ks / (n - 1)) : 0.0;
        s_re = cell.size() > 1 ? std::sqrt(s_re / (n - 1)) : 0.0;
        agg << target_kind_label(t) << ',' << input_kind_label(i) << ',' << k << ',' << mu_ks
            << ',' << s_ks << ',' << accepted << ',' << mu_re << ',' << s_re << '\n';
      }
    }
  }
  std::cout << "sweep results in " << out_dir << "\n";
  return 0;
}

int cmd_price(const std::string& method, const std::string& checkpoint_path, std::uint64_t strike,
              int eval_qubits, std::uint64_t mc_samples, std::int64_t seed,
              const std::string& out_path) {
  TargetSpec reference;  // lognormal(1,1) on [0,7], the pricing benchmark target
  nlohmann::json report;
  report["strike"] = strike;

  const bool have_checkpoint = !checkpoint_path.empty();
  GeneratorCheckpoint checkpoint;
  if (have_checkpoint) {
    checkpoint = generator_checkpoint_from_json(load_json(checkpoint_path));
    report["distribution_source"] = checkpoint_path;
  } else {
    report["distribution_source"] = "analytic lognormal(1,1) on [0,7]";
  }

  const std::vector<double> analytic_law = analytic_discretized(reference);
  double analytic_payoff = 0.0;
  for (std::size_t i = 0; i < analytic_law.size(); ++i) {
    if (i > strike) analytic_payoff += analytic_law[i] * static_cast<double>(i - strike);
  }
  report["analytic_reference"] = analytic_payoff;

  if (method == "analytic") {
    report["method"] = "analytic";
    report["estimate"] = analytic_payoff;
    report["samples_or_m"] = nullptr;
  } else if (method == "mc") {
    std::vector<std::uint64_t> samples;
    if (have_checkpoint) {
      Rng rng(seed >= 0 ? static_cast<std::uint64_t>(seed) : 0);
      const EmpiricalDistribution d =
          sample_generator(checkpoint.shape, checkpoint.theta, checkpoint.input, mc_samples, rng);
      for (std::uint64_t j = 0; j < d.counts.size(); ++j) {
        samples.insert(samples.end(), d.counts[j], j);
      }
    } else {
      samples = sample_target(reference, mc_samples,
                              seed >= 0 ? static_cast<std::uint64_t>(seed) : 0);
    }
    const McResult mc = monte_carlo_payoff(samples, strike);
    report["method"] = "mc";
    report["estimate"] = mc.estimate;
    report["ci"] = mc.ci_half_width;
    report["samples_or_m"] = mc.samples;
  } else if (method == "qae") {
    QaeProblem problem;
    problem.strike = strike;
    problem.evaluation_qubits = eval_qubits;
    if (have_checkpoint) {
      problem.grid_qubits = checkpoint.shape.qubit_count;
      problem.generator = GeneratorLoader{checkpoint.shape, checkpoint.theta, checkpoint.input};
    } else {
      problem.grid_qubits = reference.total_qubits();
      problem.probabilities = analytic_law;
    }
    const QaeResult r = run_qae(problem);
    report["method"] = "qae";
    report["estimate"] = r.payoff;
    report["ci"] = r.ci_half_width;
    report["samples_or_m"] = eval_qubits;
    report["amplitude"] = r.amplitude;
    report["grid_outcome"] = r.grid_outcome;
  } else {
    std::cerr << "unknown method: " << method << "\n";
    return 1;
  }

  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    save_json(report, out_path);
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

int cmd_plotdata(const std::string& trace_path, const std::string& checkpoint_path,
                 const std::string& config_path, const std::string& out_dir) {
  if (trace_path.empty() && checkpoint_path.empty()) {
    std::cerr << "need --trace and/or --checkpoint\n";
    return 1;
  }
  fs::create_directories(out_dir);

  if (!trace_path.empty()) {
    const TrainingTrace trace = read_trace_csv(trace_path);
    std::ofstream out((fs::path(out_dir) / "loss_curves.csv").string());
    out << "epoch,loss_g,loss_d,rel_entropy\n";
    out.precision(17);
    for (std::size_t e = 0; e < trace.loss_g.size(); ++e) {
      out << (e + 1) << ',' << trace.loss_g[e] << ',' << trace.loss_d[e] << ','
          << trace.rel_entropy[e] << '\n';
    }
  }

  if (!checkpoint_path.empty()) {
    const GeneratorCheckpoint c = generator_checkpoint_from_json(load_json(checkpoint_path));
    const std::vector<double> trained = generator_probabilities(c.shape, c.theta, c.input);

    std::vector<double> target(trained.size(), 0.0);
    if (!config_path.empty()) {
      const RunConfig config = run_config_from_json(load_json(config_path));
      if (config.target.kind == TargetSpec::Kind::File ||
          config.target.kind == TargetSpec::Kind::Gaussian2d) {
        const std::vector<std::uint64_t> data =
            config.target.kind == TargetSpec::Kind::File
                ? ingest_samples(config.target.path, config.target).samples
                : sample_target(config.target, config.data_count,
                                derive_seed(config.training.seed, 0xD47A));
        target =
            EmpiricalDistribution::from_samples(data, config.target.registers).probabilities();
      } else {
        target = analytic_discretized(config.target);
      }
    }

    std::ofstream out((fs::path(out_dir) / "pdf.csv").string());
    out << "grid_value,trained_probability,target_probability\n";
    out.precision(17);
    for (std::size_t j = 0; j < trained.size(); ++j) {
      out << grid_map(j, c.affine) << ',' << trained[j] << ',' << target[j] << '\n';
    }
  }
  std::cout << "plot data in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qGAN distribution loading and QAE option pricing"};
  app.require_subcommand(1);

  std::string config_path, out_dir, checkpoint_path, trace_path, out_path;
  std::string method = "analytic";
  std::int64_t seed = -1;
  bool quick = false;
  std::uint64_t strike = 2, mc_samples = 1024;
  int eval_qubits = 8;

  auto* train_cmd = app.add_subcommand("train", "train a qGAN from a run config");
  train_cmd->add_option("--config", config_path, "run config JSON")->required();
  train_cmd->add_option("--seed", seed, "override the config seed");
  train_cmd->add_option("--out", out_dir, "output directory");
  train_cmd->add_flag("--quick", quick, "300 epochs at learning rate 1e-3");

  auto* sweep_cmd = app.add_subcommand("sweep", "benchmark grid: targets x inits x depths");
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_option("--seed", seed, "base seed (default 0)");
  sweep_cmd->add_flag("--quick", quick, "2 seeds, 300 epochs, lr 1e-3");

  auto* price_cmd = app.add_subcommand("price", "European call pricing report");
  price_cmd->add_option("--method", method, "analytic | mc | qae")->required();
  price_cmd->add_option("--checkpoint", checkpoint_path, "trained generator checkpoint");
  price_cmd->add_option("--strike", strike, "strike in grid units (default 2)");
  price_cmd->add_option("--eval-qubits", eval_qubits, "QAE evaluation qubits (default 8)");
  price_cmd->add_option("--samples", mc_samples, "MC sample count (default 1024)");
  price_cmd->add_option("--seed", seed, "sampling seed");
  price_cmd->add_option("--out", out_path, "write the JSON report here");

  auto* plot_cmd = app.add_subcommand("plotdata", "CSV emission for PDF bars and loss curves");
  plot_cmd->add_option("--trace", trace_path, "trace CSV from a training run");
  plot_cmd->add_option("--checkpoint", checkpoint_path, "generator checkpoint");
  plot_cmd->add_option("--config", config_path, "run config (for the target law)");
  plot_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(config_path, seed, out_dir, quick);
    if (sweep_cmd->parsed()) return cmd_sweep(out_dir, seed, quick);
    if (price_cmd->parsed()) {
      return cmd_price(method, checkpoint_path, strike, eval_qubits, mc_samples, seed, out_path);
    }
    if (plot_cmd->parsed()) {
      return cmd_plotdata(trace_path, checkpoint_path, config_path, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
