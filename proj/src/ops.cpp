#include "mosgnn/ops.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "mosgnn/error.hpp"
#include "mosgnn/kernels/kernels.hpp"

namespace mosgnn::ops {
namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shapes " + a.shape_string() + " and " +
                         b.shape_string() + " differ");
  }
}

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  if (a.rows() && b.cols() && a.cols()) {
    kernels::active().gemm(a.rows(), b.cols(), a.cols(), a.data(), a.cols(), b.data(), b.cols(),
                           c.data(), c.cols());
  }
  return c;
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + a.shape_string() + " by " +
                         b.shape_string());
  }
  return gemm(a, b);
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: cannot multiply transpose of " + a.shape_string() + " by " +
                         b.shape_string());
  }
  return gemm(a.transposed(), b);
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: cannot multiply " + a.shape_string() +
                         " by transpose of " + b.shape_string());
  }
  return gemm(a, b.transposed());
}

MatmulGrads matmul_vjp(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& g,
                       bool need_a, bool need_b) {
  if (g.rows() != a.rows() || g.cols() != b.cols()) {
    throw DimensionError("matmul_vjp: upstream " + g.shape_string() + " does not match " +
                         a.shape_string() + " x " + b.shape_string());
  }
  MatmulGrads out;
  if (need_a) out.da = matmul_nt(g, b);
  if (need_b) out.db = matmul_tn(a, g);
  return out;
}

DenseMatrix spmm(const SparseAdjacency& s, const DenseMatrix& d) {
  if (s.n() != d.rows()) {
    throw DimensionError("spmm: sparse " + std::to_string(s.n()) + "x" + std::to_string(s.n()) +
                         " by dense " + d.shape_string());
  }
  DenseMatrix out(d.rows(), d.cols());
  const auto& k = kernels::active();
  const auto offsets = s.row_offsets();
  const auto cols = s.col_indices();
  const auto w = s.weights();
  for (std::size_t i = 0; i < s.n(); ++i) {
    double* orow = out.row(i).data();
    for (auto e = offsets[i]; e < offsets[i + 1]; ++e) {
      k.axpy(d.cols(), w[e], d.row(cols[e]).data(), orow);
    }
  }
  return out;
}

DenseMatrix add_bias(const DenseMatrix& x, const DenseMatrix& bias) {
  if (bias.rows() != 1 || bias.cols() != x.cols()) {
    throw DimensionError("add_bias: bias " + bias.shape_string() + " for input " +
                         x.shape_string());
  }
  DenseMatrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += bias(0, j);
  }
  return out;
}

DenseMatrix bias_vjp(const DenseMatrix& g) {
  DenseMatrix out(1, g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const auto r = g.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out(0, j) += r[j];
  }
  return out;
}

DenseMatrix relu(const DenseMatrix& x) {
  DenseMatrix out = x;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

DenseMatrix relu_vjp(const DenseMatrix& x, const DenseMatrix& g) {
  require_same_shape(x, g, "relu_vjp");
  DenseMatrix out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.size(); ++i) out.data()[i] = x.data()[i] > 0.0 ? g.data()[i] : 0.0;
  return out;
}

std::vector<double> dropout_mask(std::size_t count, double p, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ParameterError("dropout probability must be in [0, 1), got " + std::to_string(p));
  }
  const double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(count);
  for (double& m : mask) m = rng.uniform() < p ? 0.0 : keep_scale;
  return mask;
}

DenseMatrix apply_mask(const DenseMatrix& x, std::span<const double> mask) {
  if (mask.size() != x.size()) {
    throw DimensionError("dropout mask length " + std::to_string(mask.size()) +
                         " does not match " + x.shape_string());
  }
  DenseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = x.data()[i] * mask[i];
  return out;
}

DenseMatrix dropout(const DenseMatrix& x, double p, bool training, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ParameterError("dropout probability must be in [0, 1), got " + std::to_string(p));
  }
  if (!training || p == 0.0) return x;
  return apply_mask(x, dropout_mask(x.size(), p, rng));
}

PairNormResult pairnorm(const DenseMatrix& x, double scale) {
  if (x.rows() == 0) throw DimensionError("pairnorm: input has no rows");
  const std::size_t n = x.rows();
  const std::size_t c = x.cols();

  PairNormResult res;
  auto& st = res.state;
  st.centered = x;
  std::vector<double> mean(c, 0.0);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = x.row(i);
    for (std::size_t j = 0; j < c; ++j) {
      mean[j] += r[j];
      max_abs = std::max(max_abs, std::abs(r[j]));
    }
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = st.centered.row(i);
    for (std::size_t j = 0; j < c; ++j) r[j] -= mean[j];
  }
  for (double v : st.centered.values()) st.sum_squares += v * v;

  // Centered values at the rounding level of the input carry no signal
  // (identical rows, a single row, all zeros); rescaling them would amplify
  // noise to unit norm.
  const double noise = 64.0 * DBL_EPSILON * max_abs;
  st.degenerate = !(st.sum_squares > static_cast<double>(n * c) * noise * noise);
  if (st.degenerate) {
    res.out = DenseMatrix(n, c);
    return res;
  }
  st.factor = scale * std::sqrt(static_cast<double>(n)) / std::sqrt(st.sum_squares);
  res.out = st.centered;
  for (double& v : res.out.values()) v *= st.factor;
  return res;
}

DenseMatrix pairnorm_vjp(const PairNormState& st, const DenseMatrix& g) {
  require_same_shape(st.centered, g, "pairnorm_vjp");
  const std::size_t n = g.rows();
  const std::size_t c = g.cols();
  DenseMatrix dx(n, c);
  if (st.degenerate) return dx;

  double g_dot_centered = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) g_dot_centered += g.data()[i] * st.centered.data()[i];
  const double radial = st.factor * g_dot_centered / st.sum_squares;
  for (std::size_t i = 0; i < g.size(); ++i) {
    dx.data()[i] = st.factor * g.data()[i] - radial * st.centered.data()[i];
  }
  // Back through the centering: subtract column means of the gradient.
  std::vector<double> mean(c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = dx.row(i);
    for (std::size_t j = 0; j < c; ++j) mean[j] += r[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = dx.row(i);
    for (std::size_t j = 0; j < c; ++j) r[j] -= mean[j];
  }
  return dx;
}

DenseMatrix log_softmax(const DenseMatrix& x) {
  if (x.cols() == 0) throw DimensionError("log_softmax: input has no columns");
  DenseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = x.row(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double s = 0.0;
    for (double v : r) s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    auto o = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) o[j] = r[j] - lse;
  }
  return out;
}

DenseMatrix log_softmax_vjp(const DenseMatrix& out, const DenseMatrix& g) {
  require_same_shape(out, g, "log_softmax_vjp");
  DenseMatrix dx(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const auto gr = g.row(i);
    const auto orow = out.row(i);
    double gsum = 0.0;
    for (double v : gr) gsum += v;
    auto d = dx.row(i);
    for (std::size_t j = 0; j < gr.size(); ++j) d[j] = gr[j] - std::exp(orow[j]) * gsum;
  }
  return dx;
}

namespace {

std::size_t check_nll_inputs(const DenseMatrix& log_probs, std::span<const int> targets,
                             std::span<const std::uint8_t> mask) {
  if (targets.size() != log_probs.rows() || mask.size() != log_probs.rows()) {
    throw DimensionError("nll_loss: " + std::to_string(targets.size()) + " targets and " +
                         std::to_string(mask.size()) + " mask entries for " +
                         log_probs.shape_string() + " log-probabilities");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    if (targets[i] < 0 || static_cast<std::size_t>(targets[i]) >= log_probs.cols()) {
      throw IndexError("nll_loss: target " + std::to_string(targets[i]) + " at row " +
                       std::to_string(i) + " outside [0, " + std::to_string(log_probs.cols()) +
                       ")");
    }
    ++count;
  }
  if (count == 0) throw EvaluationError("nll_loss: mask selects no rows");
  return count;
}

}  // namespace

double nll_loss(const DenseMatrix& log_probs, std::span<const int> targets,
                std::span<const std::uint8_t> mask) {
  const std::size_t count = check_nll_inputs(log_probs, targets, mask);
  double total = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) total -= log_probs(i, static_cast<std::size_t>(targets[i]));
  }
  return total / static_cast<double>(count);
}

DenseMatrix nll_loss_vjp(const DenseMatrix& log_probs, std::span<const int> targets,
                         std::span<const std::uint8_t> mask, double upstream) {
  const std::size_t count = check_nll_inputs(log_probs, targets, mask);
  DenseMatrix g(log_probs.rows(), log_probs.cols());
  const double v = -upstream / static_cast<double>(count);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) g(i, static_cast<std::size_t>(targets[i])) = v;
  }
  return g;
}

}  // namespace mosgnn::ops
