#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mosgnn/dense_matrix.hpp"
#include "mosgnn/rng.hpp"
#include "mosgnn/sparse_adjacency.hpp"

// Forward primitives and their vector-Jacobian products. Stateless; the tape
// (tape.hpp) stores whatever each VJP needs.

namespace mosgnn::ops {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ·b without materializing a full copy of the caller's operands.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a·bᵀ
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

struct MatmulGrads {
  DenseMatrix da;  // empty when not requested
  DenseMatrix db;
};
MatmulGrads matmul_vjp(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& g,
                       bool need_a, bool need_b);

/// s·d with s sparse. Because adjacencies are symmetric the VJP with respect
/// to d is spmm(s, g).
DenseMatrix spmm(const SparseAdjacency& s, const DenseMatrix& d);

/// x + 1·bᵀ where bias is 1×cols.
DenseMatrix add_bias(const DenseMatrix& x, const DenseMatrix& bias);
/// Column sums of g, shaped 1×cols.
DenseMatrix bias_vjp(const DenseMatrix& g);

DenseMatrix relu(const DenseMatrix& x);
/// Gradient passes where x > 0; zero at x == 0.
DenseMatrix relu_vjp(const DenseMatrix& x, const DenseMatrix& g);

/// Inverted-dropout multipliers: 0 with probability p, else 1/(1-p).
std::vector<double> dropout_mask(std::size_t count, double p, Rng& rng);
/// Elementwise x * mask. Also the VJP (same mask applied to the upstream grad).
DenseMatrix apply_mask(const DenseMatrix& x, std::span<const double> mask);
/// Convenience wrapper; eval mode (training=false) or p=0 returns x unchanged.
DenseMatrix dropout(const DenseMatrix& x, double p, bool training, Rng& rng);

struct PairNormState {
  DenseMatrix centered;  // x minus its column means
  double factor = 0.0;   // scale·sqrt(n) / sqrt(sum of squares of `centered`)
  double sum_squares = 0.0;
  bool degenerate = false;  // centered input is zero up to rounding; output is zero
};
struct PairNormResult {
  DenseMatrix out;
  PairNormState state;
};
/// Centers columns, then rescales so the mean squared row norm equals scale².
PairNormResult pairnorm(const DenseMatrix& x, double scale = 1.0);
DenseMatrix pairnorm_vjp(const PairNormState& state, const DenseMatrix& g);

/// Row-wise x - logsumexp(x), max-shifted.
DenseMatrix log_softmax(const DenseMatrix& x);
DenseMatrix log_softmax_vjp(const DenseMatrix& out, const DenseMatrix& g);

/// Mean of -log_probs[i, targets[i]] over rows with mask[i] != 0.
double nll_loss(const DenseMatrix& log_probs, std::span<const int> targets,
                std::span<const std::uint8_t> mask);
/// Gradient of nll_loss scaled by `upstream`.
DenseMatrix nll_loss_vjp(const DenseMatrix& log_probs, std::span<const int> targets,
                         std::span<const std::uint8_t> mask, double upstream = 1.0);

}  // namespace mosgnn::ops
