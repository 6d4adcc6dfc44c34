#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mosgnn/dense_matrix.hpp"

namespace mosgnn {

struct WeightedEdge {
  std::uint64_t row;
  std::uint64_t col;
  double weight;
};

/// Row-compressed (CSR) symmetric weighted adjacency.
///
/// Invariants enforced by `validate()`: offsets nondecreasing with
/// offsets[0] = 0 and offsets[n] = nnz; column ids sorted and unique within a
/// row and < n; weights strictly positive and finite; entry (i,j) present iff
/// (j,i) is, with identical weight. Diagonal entries only when the matrix was
/// produced by self-loop augmentation (`allow_self_loops`).
class SparseAdjacency {
 public:
  SparseAdjacency() = default;
  /// Empty edge set on n nodes.
  explicit SparseAdjacency(std::size_t n);
  SparseAdjacency(std::size_t n, std::vector<std::uint64_t> row_offsets,
                  std::vector<std::uint64_t> col_indices, std::vector<double> weights,
                  bool allow_self_loops = false);

  /// Builds from an edge list. Each undirected edge may be listed once or in
  /// both directions; duplicates must agree on weight.
  static SparseAdjacency from_edges(std::size_t n, std::span<const WeightedEdge> edges,
                                    bool allow_self_loops = false);
  static SparseAdjacency identity(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return col_indices_.size(); }
  /// Undirected off-diagonal edges.
  std::size_t num_edges() const noexcept;
  bool allows_self_loops() const noexcept { return allow_self_loops_; }

  std::span<const std::uint64_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::uint64_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> weights() const noexcept { return weights_; }

  std::span<const std::uint64_t> neighbors(std::size_t i) const noexcept {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_weights(std::size_t i) const noexcept {
    return {weights_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  /// Weight of (i,j) or 0 when absent.
  double weight(std::size_t i, std::size_t j) const noexcept;
  DenseMatrix to_dense() const;

  /// Throws DataError describing the first violated invariant.
  void validate() const;

  friend bool operator==(const SparseAdjacency&, const SparseAdjacency&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> row_offsets_{0};
  std::vector<std::uint64_t> col_indices_;
  std::vector<double> weights_;
  bool allow_self_loops_ = false;
};

}  // namespace mosgnn
