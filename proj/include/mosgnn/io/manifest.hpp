#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mosgnn/model.hpp"
#include "mosgnn/trainer.hpp"

namespace mosgnn::io {

/// Everything a run needs besides data. Defaults follow the reference
/// training setup (k=40, SGD lr 0.01 / momentum 0.9 / wd 5e-4, 500 epochs,
/// dropout 0.5, one graph per batch).
struct RunSettings {
  std::size_t k = 40;
  model::ModelConfig model;
  train::TrainConfig train;

  /// Applies a JSON object of overrides. Recognized keys: k, lr, momentum,
  /// weight_decay, max_epochs, graphs_per_batch, eval_every, dropout,
  /// hidden_dims, pairnorm_scale, seed. Unknown keys are rejected.
  void apply(const nlohmann::json& overrides);
  void validate() const;
  nlohmann::json to_json() const;
};

struct ExperimentSpec {
  std::string name;
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  nlohmann::json overrides = nlohmann::json::object();
};

struct ExperimentManifest {
  /// Graph name -> feature or graph file, in declaration order. Relative
  /// paths are resolved against the manifest's directory.
  std::vector<std::pair<std::string, std::filesystem::path>> graphs;
  std::vector<ExperimentSpec> experiments;
  nlohmann::json hyperparameters = nlohmann::json::object();

  const std::filesystem::path& graph_path(const std::string& name) const;
  /// Global hyperparameters then the experiment's own overrides on top of `base`.
  RunSettings settings_for(const ExperimentSpec& e, RunSettings base = {}) const;
};

/// Parses and validates: every referenced graph declared, splits nonempty,
/// and train/val/test pairwise disjoint within each experiment.
ExperimentManifest parse_manifest(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
ExperimentManifest load_manifest(const std::filesystem::path& path);

/// The four-way rotation over graphs G1..G4 used for the reference experiments.
nlohmann::json default_manifest_json();

}  // namespace mosgnn::io
