#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mosgnn/graph.hpp"
#include "mosgnn/metrics.hpp"
#include "mosgnn/model.hpp"

namespace mosgnn::train {

struct TrainConfig {
  double lr = 0.01;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  std::size_t max_epochs = 500;
  std::size_t graphs_per_batch = 1;
  std::uint64_t seed = 0;
  std::size_t eval_every = 1;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// SGD with momentum and L2 weight decay:
///   g <- grad + wd * w;  v <- momentum * v + g;  w <- w - lr * v
class SgdMomentum {
 public:
  explicit SgdMomentum(const TrainConfig& cfg) : cfg_(cfg) {}

  void step(std::vector<Parameter>& params);

  /// One velocity buffer per parameter, in parameter order; empty until the first step.
  std::vector<DenseMatrix>& velocity() noexcept { return velocity_; }
  const std::vector<DenseMatrix>& velocity() const noexcept { return velocity_; }

 private:
  TrainConfig cfg_;
  std::vector<DenseMatrix> velocity_;
};

/// A graph ready for training or evaluation: normalized adjacency computed once.
struct PreparedGraph {
  const GraphBundle* graph = nullptr;
  SparseAdjacency norm_adj;
  std::vector<int> targets;
  std::vector<std::uint8_t> mask;
};

/// Normalizes the adjacency; throws DataError if the graph has no labeled node
/// and `require_labels` is set.
PreparedGraph prepare(const GraphBundle& g, bool require_labels = true);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<eval::MetricsResult> validation;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_val_f = 0.0;
  double wall_seconds = 0.0;

  std::size_t evaluation_count() const;
};

struct FitResult {
  std::vector<Parameter> best_params;
  TrainReport report;
};

/// Eval-mode metrics on the moving class, confusion counts pooled over graphs.
eval::MetricsResult evaluate(const model::GcnModel& model, std::span<const PreparedGraph> graphs);

class Trainer {
 public:
  Trainer(model::GcnModel& model, const TrainConfig& cfg);

  /// One pass over `train` in a seed-derived shuffled order; returns the mean
  /// step loss. `epoch` (1-based) addresses the shuffle and dropout streams.
  double train_epoch(std::span<const PreparedGraph> train, std::size_t epoch);

  /// Trains epochs first_epoch..max_epochs, validating every eval_every epochs
  /// (and at the last one). Keeps the parameters with the best validation F,
  /// earliest on ties.
  FitResult fit(std::span<const PreparedGraph> train, std::span<const PreparedGraph> val,
                std::size_t first_epoch = 1);

  SgdMomentum& optimizer() noexcept { return optimizer_; }
  const TrainConfig& config() const noexcept { return cfg_; }

  /// Called after every epoch (e.g. to stream a log line).
  std::function<void(const EpochRecord&)> on_epoch;

 private:
  model::GcnModel& model_;
  TrainConfig cfg_;
  SgdMomentum optimizer_;
};

}  // namespace mosgnn::train
