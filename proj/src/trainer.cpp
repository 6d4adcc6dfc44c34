#include "mosgnn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "mosgnn/error.hpp"
#include "mosgnn/graph_batch.hpp"
#include "mosgnn/graph_construct.hpp"
#include "mosgnn/rng.hpp"

namespace mosgnn::train {
namespace {
constexpr std::uint64_t kShuffleStream = 3;
}

void TrainConfig::validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ParameterError("lr must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ParameterError("momentum must be in [0, 1)");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ParameterError("weight_decay must be >= 0");
  }
  if (max_epochs < 1) throw ParameterError("max_epochs must be >= 1");
  if (graphs_per_batch < 1) throw ParameterError("graphs_per_batch must be >= 1");
  if (eval_every < 1) throw ParameterError("eval_every must be >= 1");
}

void SgdMomentum::step(std::vector<Parameter>& params) {
  for (const auto& p : params) {
    if (!p.grad.all_finite()) throw NumericError("non-finite gradient in parameter " + p.name);
  }
  if (velocity_.size() != params.size()) {
    velocity_.clear();
    for (const auto& p : params) velocity_.emplace_back(p.value.rows(), p.value.cols());
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& p = params[k];
    auto& v = velocity_[k];
    if (v.rows() != p.value.rows() || v.cols() != p.value.cols()) {
      throw DimensionError("velocity for " + p.name + " has shape " + v.shape_string());
    }
    double* w = p.value.data();
    double* vel = v.data();
    const double* g = p.grad.data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double gi = g[i] + cfg_.weight_decay * w[i];
      vel[i] = cfg_.momentum * vel[i] + gi;
      w[i] -= cfg_.lr * vel[i];
    }
  }
}

PreparedGraph prepare(const GraphBundle& g, bool require_labels) {
  g.validate();
  if (require_labels && g.nodes.labeled_count() == 0) {
    throw DataError("graph '" + g.name + "' has no labeled nodes");
  }
  return PreparedGraph{&g, graph::normalize_adjacency(g.adjacency), g.nodes.targets(),
                       g.nodes.labeled_mask()};
}

std::size_t TrainReport::evaluation_count() const {
  return static_cast<std::size_t>(std::count_if(
      epochs.begin(), epochs.end(), [](const EpochRecord& r) { return r.validation.has_value(); }));
}

eval::MetricsResult evaluate(const model::GcnModel& model, std::span<const PreparedGraph> graphs) {
  eval::ConfusionCounts pooled;
  for (const auto& pg : graphs) {
    const auto pred = model.predict(pg.norm_adj, pg.graph->nodes.features);
    pooled += eval::confusion_counts(pred, pg.targets, pg.mask);
  }
  return eval::precision_recall_f(pooled);
}

Trainer::Trainer(model::GcnModel& model, const TrainConfig& cfg)
    : model_(model), cfg_(cfg), optimizer_(cfg) {
  cfg_.validate();
}

double Trainer::train_epoch(std::span<const PreparedGraph> train, std::size_t epoch) {
  if (train.empty()) throw DataError("train_epoch: no training graphs");
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(cfg_.seed, {kShuffleStream, epoch}));
  rng.shuffle(order);

  double total = 0.0;
  std::size_t steps = 0;
  for (std::size_t start = 0; start < order.size(); start += cfg_.graphs_per_batch) {
    const std::size_t end = std::min(order.size(), start + cfg_.graphs_per_batch);
    const model::DropoutKey key{cfg_.seed, epoch, steps};
    double loss = 0.0;
    // The tape refers to the adjacency until backward, so it lives at loop scope.
    SparseAdjacency merged_adj;
    if (end - start == 1) {
      const auto& pg = train[order[start]];
      model_.forward(pg.norm_adj, pg.graph->nodes.features, true, key);
      loss = model_.loss(pg.targets, pg.mask);
    } else {
      // Normalization commutes with block-diagonal stacking, so stack the
      // already-normalized blocks.
      std::vector<GraphBundle> parts;
      std::vector<SparseAdjacency> norm_blocks;
      std::vector<int> targets;
      std::vector<std::uint8_t> mask;
      for (std::size_t s = start; s < end; ++s) {
        const auto& pg = train[order[s]];
        parts.push_back(*pg.graph);
        norm_blocks.push_back(pg.norm_adj);
        targets.insert(targets.end(), pg.targets.begin(), pg.targets.end());
        mask.insert(mask.end(), pg.mask.begin(), pg.mask.end());
      }
      const auto merged = batch::block_diag_batch(parts);
      merged_adj = batch::block_diag(norm_blocks);
      model_.forward(merged_adj, merged.merged.nodes.features, true, key);
      loss = model_.loss(targets, mask);
    }
    model_.backward();
    optimizer_.step(model_.params());
    model_.zero_grad();
    total += loss;
    ++steps;
  }
  return total / static_cast<double>(steps);
}

FitResult Trainer::fit(std::span<const PreparedGraph> train, std::span<const PreparedGraph> val,
                       std::size_t first_epoch) {
  if (val.empty()) throw DataError("fit: no validation graphs");
  for (const auto& t : train) {
    for (const auto& v : val) {
      if (t.graph == v.graph) throw ValidationError("fit: graph '" + t.graph->name +
                                                    "' is in both training and validation");
    }
  }
  const auto started = std::chrono::steady_clock::now();
  FitResult result;
  bool have_best = false;
  for (std::size_t epoch = first_epoch; epoch <= cfg_.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = train_epoch(train, epoch);
    if (epoch % cfg_.eval_every == 0 || epoch == cfg_.max_epochs) {
      rec.validation = evaluate(model_, val);
      if (!have_best || rec.validation->f_measure > result.report.best_val_f) {
        have_best = true;
        result.report.best_epoch = epoch;
        result.report.best_val_f = rec.validation->f_measure;
        result.best_params = model_.params();
      }
    }
    result.report.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  if (!have_best) result.best_params = model_.params();
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace mosgnn::train
