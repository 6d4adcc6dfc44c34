#include "mosgnn/tape.hpp"

#include <cmath>

#include "mosgnn/error.hpp"

namespace mosgnn {

std::string_view op_name(OpKind k) {
  switch (k) {
    case OpKind::Input: return "input";
    case OpKind::Param: return "param";
    case OpKind::MatMul: return "matmul";
    case OpKind::SpMM: return "spmm";
    case OpKind::AddBias: return "add_bias";
    case OpKind::ReLU: return "relu";
    case OpKind::Dropout: return "dropout";
    case OpKind::PairNorm: return "pairnorm";
    case OpKind::LogSoftmax: return "log_softmax";
    case OpKind::NllLoss: return "nll_loss";
  }
  return "?";
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

const Tape::Node& Tape::at(Var v) const {
  if (v.id >= nodes_.size()) throw StateError("tape: variable does not belong to this tape");
  return nodes_[v.id];
}

Var Tape::input(DenseMatrix value) {
  return push({OpKind::Input, {}, {}, std::move(value), {}, false, {}});
}

Var Tape::param(Parameter& p) {
  return push({OpKind::Param, {}, {}, p.value, {}, true, &p});
}

Var Tape::matmul(Var a, Var b) {
  const auto& na = at(a);
  const auto& nb = at(b);
  return push({OpKind::MatMul, a, b, ops::matmul(na.value, nb.value), {},
               na.requires_grad || nb.requires_grad, {}});
}

Var Tape::spmm(const SparseAdjacency& s, Var x) {
  const auto& nx = at(x);
  return push({OpKind::SpMM, x, {}, ops::spmm(s, nx.value), {}, nx.requires_grad, &s});
}

Var Tape::add_bias(Var x, Var bias) {
  const auto& nx = at(x);
  const auto& nb = at(bias);
  return push({OpKind::AddBias, x, bias, ops::add_bias(nx.value, nb.value), {},
               nx.requires_grad || nb.requires_grad, {}});
}

Var Tape::relu(Var x) {
  const auto& nx = at(x);
  return push({OpKind::ReLU, x, {}, ops::relu(nx.value), {}, nx.requires_grad, {}});
}

Var Tape::dropout(Var x, std::vector<double> mask) {
  const auto& nx = at(x);
  DenseMatrix out = ops::apply_mask(nx.value, mask);
  return push({OpKind::Dropout, x, {}, std::move(out), {}, nx.requires_grad,
               DropoutSaved{std::move(mask)}});
}

Var Tape::pairnorm(Var x, double scale) {
  const auto& nx = at(x);
  auto res = ops::pairnorm(nx.value, scale);
  return push({OpKind::PairNorm, x, {}, std::move(res.out), {}, nx.requires_grad,
               std::move(res.state)});
}

Var Tape::log_softmax(Var x) {
  const auto& nx = at(x);
  return push({OpKind::LogSoftmax, x, {}, ops::log_softmax(nx.value), {}, nx.requires_grad, {}});
}

Var Tape::nll_loss(Var log_probs, std::vector<int> targets, std::vector<std::uint8_t> mask) {
  const auto& nl = at(log_probs);
  const double loss = ops::nll_loss(nl.value, targets, mask);
  if (!std::isfinite(loss)) throw NumericError("nll_loss: loss is not finite");
  return push({OpKind::NllLoss, log_probs, {}, DenseMatrix(1, 1, loss), {}, nl.requires_grad,
               NllSaved{std::move(targets), std::move(mask)}});
}

const DenseMatrix& Tape::value(Var v) const { return at(v).value; }
const DenseMatrix& Tape::grad(Var v) const { return at(v).grad; }

std::vector<OpKind> Tape::op_sequence() const {
  std::vector<OpKind> seq;
  for (const auto& n : nodes_) {
    if (n.kind != OpKind::Input && n.kind != OpKind::Param) seq.push_back(n.kind);
  }
  return seq;
}

void Tape::accumulate(Var target, const DenseMatrix& g) {
  auto& node = nodes_[target.id];
  if (!node.requires_grad) return;
  if (node.grad.empty() && !node.value.empty()) {
    node.grad = g;
    return;
  }
  for (std::size_t i = 0; i < g.size(); ++i) node.grad.data()[i] += g.data()[i];
}

void Tape::backward(Var root) {
  const auto& r = at(root);
  if (r.value.rows() != 1 || r.value.cols() != 1) {
    throw StateError("backward: root must be a scalar, got " + r.value.shape_string());
  }
  for (auto& n : nodes_) n.grad = DenseMatrix();
  nodes_[root.id].grad = DenseMatrix(1, 1, 1.0);

  for (std::size_t id = root.id + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.empty()) continue;
    const DenseMatrix& g = node.grad;
    switch (node.kind) {
      case OpKind::Input:
        break;
      case OpKind::Param: {
        Parameter* p = std::get<Parameter*>(node.saved);
        for (std::size_t i = 0; i < g.size(); ++i) p->grad.data()[i] += g.data()[i];
        break;
      }
      case OpKind::MatMul: {
        const bool need_a = nodes_[node.lhs.id].requires_grad;
        const bool need_b = nodes_[node.rhs.id].requires_grad;
        auto grads = ops::matmul_vjp(nodes_[node.lhs.id].value, nodes_[node.rhs.id].value, g,
                                     need_a, need_b);
        if (need_a) accumulate(node.lhs, grads.da);
        if (need_b) accumulate(node.rhs, grads.db);
        break;
      }
      case OpKind::SpMM:
        accumulate(node.lhs, ops::spmm(*std::get<const SparseAdjacency*>(node.saved), g));
        break;
      case OpKind::AddBias:
        accumulate(node.lhs, g);
        if (nodes_[node.rhs.id].requires_grad) accumulate(node.rhs, ops::bias_vjp(g));
        break;
      case OpKind::ReLU:
        accumulate(node.lhs, ops::relu_vjp(nodes_[node.lhs.id].value, g));
        break;
      case OpKind::Dropout:
        accumulate(node.lhs, ops::apply_mask(g, std::get<DropoutSaved>(node.saved).mask));
        break;
      case OpKind::PairNorm:
        accumulate(node.lhs, ops::pairnorm_vjp(std::get<ops::PairNormState>(node.saved), g));
        break;
      case OpKind::LogSoftmax:
        accumulate(node.lhs, ops::log_softmax_vjp(node.value, g));
        break;
      case OpKind::NllLoss: {
        const auto& s = std::get<NllSaved>(node.saved);
        accumulate(node.lhs,
                   ops::nll_loss_vjp(nodes_[node.lhs.id].value, s.targets, s.mask, g(0, 0)));
        break;
      }
    }
  }
}

}  // namespace mosgnn
