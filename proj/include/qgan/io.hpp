#pragma once

#include <string>
#include <vector>

#include "qgan/discriminator.hpp"
#include "qgan/distributions.hpp"
#include "qgan/generator.hpp"
#include "qgan/training.hpp"

#include <json.hpp>

namespace qgan {

// Trained generator checkpoint: everything needed to rebuild the loading
// circuit plus the grid-to-value mapping.
struct GeneratorCheckpoint {
  AnsatzShape shape;
  std::vector<double> theta;  // row-major over the (qubit, layer) matrix
  InputStateSpec input;
  AffineMap affine;
};

// Full description of a training run.
struct RunConfig {
  TargetSpec target;
  int data_count = 20000;
  AnsatzShape shape;
  InputStateSpec input;
  int disc_hidden1 = 50;
  int disc_hidden2 = 20;
  TrainingConfig training;
  std::string out_dir = "out";
};

nlohmann::json to_json(const AnsatzShape& s);
nlohmann::json to_json(const InputStateSpec& s);
nlohmann::json to_json(const AffineMap& m);
nlohmann::json to_json(const TargetSpec& s);
nlohmann::json to_json(const TrainingConfig& c);
nlohmann::json to_json(const GeneratorCheckpoint& c);
nlohmann::json to_json(const DiscriminatorModel& m);
nlohmann::json to_json(const RunConfig& c);

AnsatzShape ansatz_shape_from_json(const nlohmann::json& j);
InputStateSpec input_spec_from_json(const nlohmann::json& j);
AffineMap affine_from_json(const nlohmann::json& j);
TargetSpec target_spec_from_json(const nlohmann::json& j);
TrainingConfig training_config_from_json(const nlohmann::json& j);
GeneratorCheckpoint generator_checkpoint_from_json(const nlohmann::json& j);
DiscriminatorModel discriminator_from_json(const nlohmann::json& j);
RunConfig run_config_from_json(const nlohmann::json& j);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

// trace CSV: epoch,loss_g,loss_d,rel_entropy,ks
void write_trace_csv(const TrainingTrace& trace, const std::string& path);
TrainingTrace read_trace_csv(const std::string& path);

void write_samples_file(const std::vector<std::uint64_t>& samples,
                        const std::vector<int>& registers, const std::vector<AffineMap>& maps,
                        const std::string& path);

}  // namespace qgan
