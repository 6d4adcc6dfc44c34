#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mosgnn/dense_matrix.hpp"
#include "mosgnn/ops.hpp"
#include "mosgnn/sparse_adjacency.hpp"

namespace mosgnn {

/// Trainable tensor with its gradient accumulator.
struct Parameter {
  std::string name;
  DenseMatrix value;
  DenseMatrix grad;  // same shape as value

  Parameter() = default;
  Parameter(std::string n, DenseMatrix v)
      : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

  void zero_grad() { grad.fill(0.0); }
};

enum class OpKind {
  Input,
  Param,
  MatMul,
  SpMM,
  AddBias,
  ReLU,
  Dropout,
  PairNorm,
  LogSoftmax,
  NllLoss,
};

std::string_view op_name(OpKind k);

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = static_cast<std::size_t>(-1);
};

/// Reverse-mode tape over the fixed primitive set in ops.hpp.
///
/// Nodes are appended in evaluation order, so the tape is already a
/// topological order; `backward` walks it once in reverse. Parameters and the
/// adjacency are held by pointer and must outlive the tape.
class Tape {
 public:
  Var input(DenseMatrix value);
  Var param(Parameter& p);

  Var matmul(Var a, Var b);
  Var spmm(const SparseAdjacency& s, Var x);
  Var add_bias(Var x, Var bias);
  Var relu(Var x);
  /// Records the given inverted-dropout mask (see ops::dropout_mask).
  Var dropout(Var x, std::vector<double> mask);
  Var pairnorm(Var x, double scale);
  Var log_softmax(Var x);
  /// 1x1 result.
  Var nll_loss(Var log_probs, std::vector<int> targets, std::vector<std::uint8_t> mask);

  const DenseMatrix& value(Var v) const;
  /// Gradient of the last backward's seed w.r.t. v; empty if v got none.
  const DenseMatrix& grad(Var v) const;

  /// Seeds d(root)=1 (root must be 1x1) and accumulates into Parameter::grad.
  void backward(Var root);

  std::size_t size() const noexcept { return nodes_.size(); }
  /// Kinds of the non-leaf nodes, in evaluation order.
  std::vector<OpKind> op_sequence() const;
  void clear() { nodes_.clear(); }

 private:
  struct DropoutSaved {
    std::vector<double> mask;
  };
  struct NllSaved {
    std::vector<int> targets;
    std::vector<std::uint8_t> mask;
  };
  using Saved = std::variant<std::monostate, Parameter*, const SparseAdjacency*, DropoutSaved,
                             ops::PairNormState, NllSaved>;

  struct Node {
    OpKind kind;
    Var lhs;
    Var rhs;
    DenseMatrix value;
    DenseMatrix grad;
    bool requires_grad = false;
    Saved saved;
  };

  Var push(Node node);
  const Node& at(Var v) const;
  void accumulate(Var target, const DenseMatrix& g);

  std::vector<Node> nodes_;
};

}  // namespace mosgnn
