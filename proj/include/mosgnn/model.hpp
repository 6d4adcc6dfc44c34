#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mosgnn/dense_matrix.hpp"
#include "mosgnn/sparse_adjacency.hpp"
#include "mosgnn/tape.hpp"

namespace mosgnn::model {

struct ModelConfig {
  std::size_t in_dim = 930;
  std::array<std::size_t, 4> hidden_dims{512, 256, 128, 64};
  std::size_t out_dim = 2;
  double dropout_p = 0.5;
  double pairnorm_scale = 1.0;
  std::uint64_t seed = 0;
  /// Off only for diagnostics (exact batching equivalence needs row-local layers).
  bool pairnorm = true;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Parameter names in storage order.
inline constexpr std::array<std::string_view, 8> kParamNames{
    "gcn1.W", "gcn2.W", "lin1.W", "lin1.b", "lin2.W", "lin2.b", "lin3.W", "lin3.b"};

/// Glorot-uniform weights, zero biases; a pure function of the config.
std::vector<Parameter> init_params(const ModelConfig& cfg);

/// Addresses the dropout masks of one forward pass. Each dropout layer draws
/// from its own stream derived from (seed, epoch, step, layer index).
struct DropoutKey {
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t step = 0;
};

/// Two graph-convolution blocks, two linear blocks, then the classifier:
///
///   [GCNConv -> PairNorm -> ReLU -> Dropout] x2
///   [Linear  -> PairNorm -> ReLU -> Dropout] x2
///   Dropout -> Linear -> log_softmax
///
/// GCNConv computes Â·(H·W) with Â the normalized adjacency; it has no bias.
class GcnModel {
 public:
  explicit GcnModel(const ModelConfig& cfg);
  /// Adopts existing parameters (e.g. from a checkpoint); shapes must match cfg.
  GcnModel(const ModelConfig& cfg, std::vector<Parameter> params);

  const ModelConfig& config() const noexcept { return cfg_; }
  std::vector<Parameter>& params() noexcept { return params_; }
  const std::vector<Parameter>& params() const noexcept { return params_; }
  Parameter& param(std::string_view name);
  const Parameter& param(std::string_view name) const;

  /// Records the forward pass on the model's tape and returns N x out_dim
  /// log-probabilities. `key` is required in training mode.
  const DenseMatrix& forward(const SparseAdjacency& norm_adj, const DenseMatrix& x, bool training,
                             std::optional<DropoutKey> key = std::nullopt);
  /// Appends the masked NLL of the last forward; returns its value.
  double loss(std::span<const int> targets, std::span<const std::uint8_t> mask);
  /// Accumulates d(loss)/d(param) into each Parameter::grad.
  void backward();
  void zero_grad();

  /// Eval-mode log-probabilities; does not touch the model's tape.
  DenseMatrix infer(const SparseAdjacency& norm_adj, const DenseMatrix& x) const;
  /// Argmax of infer(); ties go to class 0.
  std::vector<int> predict(const SparseAdjacency& norm_adj, const DenseMatrix& x) const;

  /// Records forward (and nothing else) onto an external tape.
  Var record(Tape& tape, const SparseAdjacency& norm_adj, const DenseMatrix& x, bool training,
             std::optional<DropoutKey> key);

  /// Op kinds of the last recorded forward/loss, for layer audits.
  std::vector<OpKind> last_op_sequence() const { return tape_.op_sequence(); }

 private:
  ModelConfig cfg_;
  std::vector<Parameter> params_;
  Tape tape_;
  std::optional<Var> output_;
  std::optional<Var> loss_;
};

/// Row-wise argmax over log-probabilities; exact ties resolve to the lower class.
std::vector<int> argmax_rows(const DenseMatrix& log_probs);

}  // namespace mosgnn::model
