#include "qgan/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qgan {

namespace {

std::string kind_name(TargetSpec::Kind k) {
  switch (k) {
    case TargetSpec::Kind::Lognormal: return "lognormal";
    case TargetSpec::Kind::Triangular: return "triangular";
    case TargetSpec::Kind::Bimodal: return "bimodal";
    case TargetSpec::Kind::Gaussian2d: return "gaussian2d";
    case TargetSpec::Kind::File: return "file";
  }
  return "?";
}

TargetSpec::Kind target_kind(const std::string& name) {
  if (name == "lognormal") return TargetSpec::Kind::Lognormal;
  if (name == "triangular") return TargetSpec::Kind::Triangular;
  if (name == "bimodal") return TargetSpec::Kind::Bimodal;
  if (name == "gaussian2d") return TargetSpec::Kind::Gaussian2d;
  if (name == "file") return TargetSpec::Kind::File;
  throw std::invalid_argument("unknown target kind: " + name);
}

std::string input_kind_name(InputStateSpec::Kind k) {
  switch (k) {
    case InputStateSpec::Kind::Uniform: return "uniform";
    case InputStateSpec::Kind::FittedNormal: return "normal";
    case InputStateSpec::Kind::Zero: return "zero";
  }
  return "?";
}

InputStateSpec::Kind input_kind(const std::string& name) {
  if (name == "uniform") return InputStateSpec::Kind::Uniform;
  if (name == "normal") return InputStateSpec::Kind::FittedNormal;
  if (name == "zero") return InputStateSpec::Kind::Zero;
  throw std::invalid_argument("unknown input kind: " + name);
}

}  // namespace

nlohmann::json to_json(const AnsatzShape& s) {
  return {{"n", s.qubit_count}, {"k", s.depth}, {"registers", s.registers}};
}

AnsatzShape ansatz_shape_from_json(const nlohmann::json& j) {
  AnsatzShape s;
  s.qubit_count = j.at("n").get<int>();
  s.depth = j.at("k").get<int>();
  s.registers = j.at("registers").get<std::vector<int>>();
  s.validate();
  return s;
}

nlohmann::json to_json(const InputStateSpec& s) {
  nlohmann::json j{
      {"kind", input_kind_name(s.kind)},
      {"param_init",
       s.param_init == InputStateSpec::ParamInit::Perturb ? "perturb" : "random_uniform"},
      {"perturb_delta", s.perturb_delta},
  };
  if (s.kind == InputStateSpec::Kind::FittedNormal) {
    j["mu"] = s.mu;
    j["sigma"] = s.sigma;
    j["fitted_angles"] = s.fitted_angles;
  }
  return j;
}

InputStateSpec input_spec_from_json(const nlohmann::json& j) {
  InputStateSpec s;
  s.kind = input_kind(j.at("kind").get<std::string>());
  const std::string pi = j.value("param_init", "perturb");
  s.param_init = pi == "perturb" ? InputStateSpec::ParamInit::Perturb
                                 : InputStateSpec::ParamInit::RandomUniform;
  s.perturb_delta = j.value("perturb_delta", 0.1);
  if (s.kind == InputStateSpec::Kind::FittedNormal) {
    s.mu = j.value("mu", 0.0);
    s.sigma = j.value("sigma", 1.0);
    if (j.contains("fitted_angles")) {
      s.fitted_angles = j.at("fitted_angles").get<std::vector<double>>();
    }
  }
  return s;
}

nlohmann::json to_json(const AffineMap& m) {
  return {{"slope", m.slope}, {"offset", m.offset}};
}

AffineMap affine_from_json(const nlohmann::json& j) {
  return {j.at("slope").get<double>(), j.at("offset").get<double>()};
}

nlohmann::json to_json(const TargetSpec& s) {
  nlohmann::json j{{"kind", kind_name(s.kind)}, {"lo", s.lo}, {"hi", s.hi},
                   {"registers", s.registers}};
  switch (s.kind) {
    case TargetSpec::Kind::Lognormal:
      j["mu"] = s.mu;
      j["sigma"] = s.sigma;
      break;
    case TargetSpec::Kind::Triangular:
      j["lower"] = s.lower;
      j["upper"] = s.upper;
      j["mode"] = s.mode;
      break;
    case TargetSpec::Kind::Bimodal:
      j["mu1"] = s.mu1;
      j["s1"] = s.s1;
      j["mu2"] = s.mu2;
      j["s2"] = s.s2;
      break;
    case TargetSpec::Kind::Gaussian2d:
      j["mu_x"] = s.g2_mu_x;
      j["mu_y"] = s.g2_mu_y;
      j["sx"] = s.g2_sx;
      j["sy"] = s.g2_sy;
      j["rho"] = s.g2_rho;
      break;
    case TargetSpec::Kind::File:
      j["path"] = s.path;
      break;
  }
  return j;
}

TargetSpec target_spec_from_json(const nlohmann::json& j) {
  TargetSpec s;
  s.kind = target_kind(j.at("kind").get<std::string>());
  s.lo = j.value("lo", 0.0);
  s.hi = j.value("hi", 7.0);
  if (j.contains("registers")) s.registers = j.at("registers").get<std::vector<int>>();
  switch (s.kind) {
    case TargetSpec::Kind::Lognormal:
      s.mu = j.value("mu", 1.0);
      s.sigma = j.value("sigma", 1.0);
      break;
    case TargetSpec::Kind::Triangular:
      s.lower = j.value("lower", 0.0);
      s.upper = j.value("upper", 7.0);
      s.mode = j.value("mode", 2.0);
      break;
    case TargetSpec::Kind::Bimodal:
      s.mu1 = j.value("mu1", 0.5);
      s.s1 = j.value("s1", 1.0);
      s.mu2 = j.value("mu2", 3.5);
      s.s2 = j.value("s2", 0.5);
      break;
    case TargetSpec::Kind::Gaussian2d:
      s.g2_mu_x = j.value("mu_x", 2.0);
      s.g2_mu_y = j.value("mu_y", 5.0);
      s.g2_sx = j.value("sx", 1.0);
      s.g2_sy = j.value("sy", 1.0);
      s.g2_rho = j.value("rho", 0.6);
      break;
    case TargetSpec::Kind::File:
      s.path = j.at("path").get<std::string>();
      break;
  }
  s.validate();
  return s;
}

nlohmann::json to_json(const TrainingConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"shots", c.shots},
          {"gradient_shots", c.gradient_shots},
          {"exact_gradients", c.exact_gradients},
          {"lr_generator", c.lr_generator},
          {"lr_discriminator", c.lr_discriminator},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"penalty_lambda", c.penalty_lambda},
          {"penalty_perturb_std", c.penalty_perturb_std},
          {"seed", c.seed},
          {"record_ks", c.record_ks},
          {"ks_samples", c.ks_samples},
          {"ks_alpha", c.ks_alpha},
          {"stop_at_rel_entropy_ratio", c.stop_at_rel_entropy_ratio}};
}

TrainingConfig training_config_from_json(const nlohmann::json& j) {
  TrainingConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.shots = j.value("shots", c.shots);
  c.gradient_shots = j.value("gradient_shots", c.gradient_shots);
  c.exact_gradients = j.value("exact_gradients", c.exact_gradients);
  c.lr_generator = j.value("lr_generator", c.lr_generator);
  c.lr_discriminator = j.value("lr_discriminator", c.lr_discriminator);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.penalty_lambda = j.value("penalty_lambda", c.penalty_lambda);
  c.penalty_perturb_std = j.value("penalty_perturb_std", c.penalty_perturb_std);
  c.seed = j.value("seed", c.seed);
  c.record_ks = j.value("record_ks", c.record_ks);
  c.ks_samples = j.value("ks_samples", c.ks_samples);
  c.ks_alpha = j.value("ks_alpha", c.ks_alpha);
  c.stop_at_rel_entropy_ratio = j.value("stop_at_rel_entropy_ratio", c.stop_at_rel_entropy_ratio);
  return c;
}

nlohmann::json to_json(const GeneratorCheckpoint& c) {
  return {{"n", c.shape.qubit_count},
          {"k", c.shape.depth},
          {"registers", c.shape.registers},
          {"theta", c.theta},
          {"input_spec", to_json(c.input)},
          {"affine", to_json(c.affine)}};
}

GeneratorCheckpoint generator_checkpoint_from_json(const nlohmann::json& j) {
  GeneratorCheckpoint c;
  c.shape.qubit_count = j.at("n").get<int>();
  c.shape.depth = j.at("k").get<int>();
  c.shape.registers = j.at("registers").get<std::vector<int>>();
  c.shape.validate();
  c.theta = j.at("theta").get<std::vector<double>>();
  if (static_cast<int>(c.theta.size()) != c.shape.parameter_count()) {
    throw std::invalid_argument("checkpoint theta size does not match shape");
  }
  c.input = input_spec_from_json(j.at("input_spec"));
  c.affine = affine_from_json(j.at("affine"));
  return c;
}

nlohmann::json to_json(const DiscriminatorModel& m) {
  return {{"input_dim", m.input_dim}, {"hidden1", m.hidden1},     {"hidden2", m.hidden2},
          {"leaky_slope", m.leaky_slope}, {"w1", m.w1}, {"b1", m.b1},
          {"w2", m.w2},               {"b2", m.b2},               {"w3", m.w3},
          {"b3", m.b3}};
}

DiscriminatorModel discriminator_from_json(const nlohmann::json& j) {
  DiscriminatorModel m;
  m.input_dim = j.at("input_dim").get<int>();
  m.hidden1 = j.at("hidden1").get<int>();
  m.hidden2 = j.at("hidden2").get<int>();
  m.leaky_slope = j.value("leaky_slope", 0.2);
  m.w1 = j.at("w1").get<std::vector<double>>();
  m.b1 = j.at("b1").get<std::vector<double>>();
  m.w2 = j.at("w2").get<std::vector<double>>();
  m.b2 = j.at("b2").get<std::vector<double>>();
  m.w3 = j.at("w3").get<std::vector<double>>();
  m.b3 = j.at("b3").get<std::vector<double>>();
  if (m.w1.size() != static_cast<std::size_t>(m.hidden1) * m.input_dim ||
      m.w2.size() != static_cast<std::size_t>(m.hidden2) * m.hidden1 ||
      m.w3.size() != static_cast<std::size_t>(m.hidden2) || m.b1.size() != static_cast<std::size_t>(m.hidden1) ||
      m.b2.size() != static_cast<std::size_t>(m.hidden2) || m.b3.size() != 1) {
    throw std::invalid_argument("discriminator checkpoint has inconsistent shapes");
  }
  return m;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"target", to_json(c.target)},
          {"data_count", c.data_count},
          {"generator", to_json(c.shape)},
          {"input", to_json(c.input)},
          {"disc_hidden1", c.disc_hidden1},
          {"disc_hidden2", c.disc_hidden2},
          {"training", to_json(c.training)},
          {"out_dir", c.out_dir}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.target = target_spec_from_json(j.at("target"));
  c.data_count = j.value("data_count", 20000);
  c.shape = ansatz_shape_from_json(j.at("generator"));
  c.input = input_spec_from_json(j.at("input"));
  c.disc_hidden1 = j.value("disc_hidden1", 50);
  c.disc_hidden2 = j.value("disc_hidden2", 20);
  c.training = training_config_from_json(j.value("training", nlohmann::json::object()));
  c.out_dir = j.value("out_dir", "out");
  return c;
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_trace_csv(const TrainingTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "epoch,loss_g,loss_d,rel_entropy,ks\n";
  out.precision(17);
  for (std::size_t e = 0; e < trace.loss_g.size(); ++e) {
    out << (e + 1) << ',' << trace.loss_g[e] << ',' << trace.loss_d[e] << ','
        << trace.rel_entropy[e] << ',';
    if (e < trace.ks.size()) out << trace.ks[e];
    out << '\n';
  }
}

TrainingTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  TrainingTrace trace;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double epoch, lg, ld, re;
    if (!(row >> epoch >> lg >> ld >> re)) {
      throw std::runtime_error("corrupt trace row in " + path);
    }
    trace.loss_g.push_back(lg);
    trace.loss_d.push_back(ld);
    trace.rel_entropy.push_back(re);
    double ks;
    if (row >> ks) trace.ks.push_back(ks);
  }
  return trace;
}

void write_samples_file(const std::vector<std::uint64_t>& samples,
                        const std::vector<int>& registers, const std::vector<AffineMap>& maps,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (std::uint64_t s : samples) {
    const std::vector<std::uint64_t> parts = split_grid_index(s, registers);
    for (std::size_t d = 0; d < parts.size(); ++d) {
      if (d) out << ',';
      out << grid_map(parts[d], maps[d]);
    }
    out << '\n';
  }
}

}  // namespace qgan
