#include "mosgnn/model.hpp"

#include <cmath>
#include <string>

#include "mosgnn/error.hpp"
#include "mosgnn/ops.hpp"
#include "mosgnn/rng.hpp"

namespace mosgnn::model {
namespace {

// Stream tags keep initialization and dropout draws disjoint.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kDropoutStream = 2;

enum ParamIndex : std::size_t { kGcn1W, kGcn2W, kLin1W, kLin1b, kLin2W, kLin2b, kLin3W, kLin3b };

std::array<std::pair<std::size_t, std::size_t>, 8> param_shapes(const ModelConfig& c) {
  const auto& h = c.hidden_dims;
  return {{{c.in_dim, h[0]},
           {h[0], h[1]},
           {h[1], h[2]},
           {1, h[2]},
           {h[2], h[3]},
           {1, h[3]},
           {h[3], c.out_dim},
           {1, c.out_dim}}};
}

// Builds the network on `tape`; `leaf(i)` supplies the Var for parameter i.
template <typename Leaf>
Var build(Tape& tape, const ModelConfig& cfg, const SparseAdjacency& adj, const DenseMatrix& x,
          bool training, const std::optional<DropoutKey>& key, Leaf&& leaf) {
  if (adj.n() != x.rows()) {
    throw DimensionError("forward: adjacency has " + std::to_string(adj.n()) +
                         " nodes, features have " + std::to_string(x.rows()) + " rows");
  }
  if (x.cols() != cfg.in_dim) {
    throw DimensionError("forward: features have width " + std::to_string(x.cols()) +
                         ", model expects " + std::to_string(cfg.in_dim));
  }
  if (training && !key) throw StateError("forward: training mode requires a dropout key");

  std::uint64_t dropout_layer = 0;
  auto dropout = [&](Var h) {
    const std::uint64_t layer = dropout_layer++;
    if (!training || cfg.dropout_p == 0.0) return h;
    Rng rng(derive_seed(key->seed, {kDropoutStream, key->epoch, key->step, layer}));
    return tape.dropout(h, ops::dropout_mask(tape.value(h).size(), cfg.dropout_p, rng));
  };
  auto normalize_activate = [&](Var h) {
    if (cfg.pairnorm) h = tape.pairnorm(h, cfg.pairnorm_scale);
    return dropout(tape.relu(h));
  };

  Var h = tape.input(x);
  h = normalize_activate(tape.spmm(adj, tape.matmul(h, leaf(kGcn1W))));
  h = normalize_activate(tape.spmm(adj, tape.matmul(h, leaf(kGcn2W))));
  h = normalize_activate(tape.add_bias(tape.matmul(h, leaf(kLin1W)), leaf(kLin1b)));
  h = normalize_activate(tape.add_bias(tape.matmul(h, leaf(kLin2W)), leaf(kLin2b)));
  h = dropout(h);
  h = tape.add_bias(tape.matmul(h, leaf(kLin3W)), leaf(kLin3b));
  return tape.log_softmax(h);
}

}  // namespace

void ModelConfig::validate() const {
  if (in_dim < 1 || out_dim < 1) throw ParameterError("model dims must be >= 1");
  for (auto h : hidden_dims) {
    if (h < 1) throw ParameterError("hidden dims must be >= 1");
  }
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw ParameterError("dropout_p must be in [0, 1), got " + std::to_string(dropout_p));
  }
  if (!(pairnorm_scale > 0.0) || !std::isfinite(pairnorm_scale)) {
    throw ParameterError("pairnorm_scale must be positive");
  }
}

std::vector<Parameter> init_params(const ModelConfig& cfg) {
  cfg.validate();
  const auto shapes = param_shapes(cfg);
  std::vector<Parameter> params;
  params.reserve(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto [rows, cols] = shapes[i];
    DenseMatrix value(rows, cols);
    if (rows > 1) {  // weights; biases (1 x cols) stay zero
      const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
      Rng rng(derive_seed(cfg.seed, {kInitStream, i}));
      for (double& v : value.values()) v = rng.uniform(-bound, bound);
    }
    params.emplace_back(std::string(kParamNames[i]), std::move(value));
  }
  return params;
}

GcnModel::GcnModel(const ModelConfig& cfg) : cfg_(cfg), params_(init_params(cfg)) {}

GcnModel::GcnModel(const ModelConfig& cfg, std::vector<Parameter> params)
    : cfg_(cfg), params_(std::move(params)) {
  cfg_.validate();
  const auto shapes = param_shapes(cfg_);
  if (params_.size() != shapes.size()) {
    throw IncompatibleError("model expects " + std::to_string(shapes.size()) +
                            " parameters, got " + std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    auto& p = params_[i];
    if (p.name != kParamNames[i] || p.value.rows() != shapes[i].first ||
        p.value.cols() != shapes[i].second) {
      throw IncompatibleError("parameter " + std::to_string(i) + " '" + p.name + "' " +
                              p.value.shape_string() + " does not match expected '" +
                              std::string(kParamNames[i]) + "' " +
                              std::to_string(shapes[i].first) + "x" +
                              std::to_string(shapes[i].second));
    }
    if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) {
      p.grad = DenseMatrix(p.value.rows(), p.value.cols());
    }
  }
}

Parameter& GcnModel::param(std::string_view name) {
  for (auto& p : params_) {
    if (p.name == name) return p;
  }
  throw ParameterError("no parameter named '" + std::string(name) + "'");
}

const Parameter& GcnModel::param(std::string_view name) const {
  return const_cast<GcnModel*>(this)->param(name);
}

Var GcnModel::record(Tape& tape, const SparseAdjacency& norm_adj, const DenseMatrix& x,
                     bool training, std::optional<DropoutKey> key) {
  return build(tape, cfg_, norm_adj, x, training, key,
               [&](std::size_t i) { return tape.param(params_[i]); });
}

const DenseMatrix& GcnModel::forward(const SparseAdjacency& norm_adj, const DenseMatrix& x,
                                     bool training, std::optional<DropoutKey> key) {
  tape_.clear();
  loss_.reset();
  output_.reset();
  output_ = record(tape_, norm_adj, x, training, key);
  return tape_.value(*output_);
}

double GcnModel::loss(std::span<const int> targets, std::span<const std::uint8_t> mask) {
  if (!output_) throw StateError("loss: no forward pass recorded");
  if (loss_) throw StateError("loss: already recorded for this forward pass");
  loss_ = tape_.nll_loss(*output_, std::vector<int>(targets.begin(), targets.end()),
                         std::vector<std::uint8_t>(mask.begin(), mask.end()));
  return tape_.value(*loss_)(0, 0);
}

void GcnModel::backward() {
  if (!loss_) throw StateError("backward: no forward pass with loss recorded");
  tape_.backward(*loss_);
}

void GcnModel::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

DenseMatrix GcnModel::infer(const SparseAdjacency& norm_adj, const DenseMatrix& x) const {
  Tape tape;
  const Var out = build(tape, cfg_, norm_adj, x, false, std::nullopt,
                        [&](std::size_t i) { return tape.input(params_[i].value); });
  return tape.value(out);
}

std::vector<int> GcnModel::predict(const SparseAdjacency& norm_adj, const DenseMatrix& x) const {
  return argmax_rows(infer(norm_adj, x));
}

std::vector<int> argmax_rows(const DenseMatrix& log_probs) {
  std::vector<int> out(log_probs.rows());
  for (std::size_t i = 0; i < log_probs.rows(); ++i) {
    const auto r = log_probs.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < r.size(); ++j) {
      if (r[j] > r[best]) best = j;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace mosgnn::model
