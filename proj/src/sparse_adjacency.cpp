#include "mosgnn/sparse_adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mosgnn/error.hpp"

namespace mosgnn {

SparseAdjacency::SparseAdjacency(std::size_t n) : n_(n), row_offsets_(n + 1, 0) {}

SparseAdjacency::SparseAdjacency(std::size_t n, std::vector<std::uint64_t> row_offsets,
                                 std::vector<std::uint64_t> col_indices,
                                 std::vector<double> weights, bool allow_self_loops)
    : n_(n),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      weights_(std::move(weights)),
      allow_self_loops_(allow_self_loops) {
  validate();
}

SparseAdjacency SparseAdjacency::from_edges(std::size_t n, std::span<const WeightedEdge> edges,
                                            bool allow_self_loops) {
  std::vector<WeightedEdge> both;
  both.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.row >= n || e.col >= n) {
      throw DataError("edge (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                      ") out of range for n=" + std::to_string(n));
    }
    both.push_back(e);
    if (e.row != e.col) both.push_back({e.col, e.row, e.weight});
  }
  std::sort(both.begin(), both.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::uint64_t> offsets(n + 1, 0);
  std::vector<std::uint64_t> cols;
  std::vector<double> weights;
  cols.reserve(both.size());
  weights.reserve(both.size());
  for (std::size_t k = 0; k < both.size(); ++k) {
    const auto& e = both[k];
    if (k > 0 && both[k - 1].row == e.row && both[k - 1].col == e.col) {
      if (both[k - 1].weight != e.weight) {
        throw DataError("conflicting weights for edge (" + std::to_string(e.row) + "," +
                        std::to_string(e.col) + ")");
      }
      continue;
    }
    cols.push_back(e.col);
    weights.push_back(e.weight);
    ++offsets[e.row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return SparseAdjacency(n, std::move(offsets), std::move(cols), std::move(weights),
                         allow_self_loops);
}

SparseAdjacency SparseAdjacency::identity(std::size_t n) {
  std::vector<std::uint64_t> offsets(n + 1);
  std::vector<std::uint64_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseAdjacency(n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0),
                         true);
}

std::size_t SparseAdjacency::num_edges() const noexcept {
  std::size_t diag = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (auto j : neighbors(i)) diag += (j == i);
  }
  return (nnz() - diag) / 2;
}

double SparseAdjacency::weight(std::size_t i, std::size_t j) const noexcept {
  const auto nb = neighbors(i);
  const auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0.0;
  return weights_[row_offsets_[i] + static_cast<std::size_t>(it - nb.begin())];
}

DenseMatrix SparseAdjacency::to_dense() const {
  DenseMatrix d(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (auto k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) d(i, col_indices_[k]) = weights_[k];
  }
  return d;
}

void SparseAdjacency::validate() const {
  if (row_offsets_.size() != n_ + 1) throw DataError("row_offsets length must be n+1");
  if (row_offsets_.front() != 0) throw DataError("row_offsets[0] must be 0");
  if (row_offsets_.back() != col_indices_.size() || col_indices_.size() != weights_.size()) {
    throw DataError("row_offsets[n], col_indices and weights lengths disagree");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      throw DataError("row_offsets decrease at row " + std::to_string(i));
    }
    for (auto k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const auto j = col_indices_[k];
      const double w = weights_[k];
      if (j >= n_) throw DataError("column index out of range in row " + std::to_string(i));
      if (k > row_offsets_[i] && col_indices_[k - 1] >= j) {
        throw DataError("column indices not strictly sorted in row " + std::to_string(i));
      }
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw DataError("non-positive or non-finite weight at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
      if (j == i && !allow_self_loops_) {
        throw DataError("unexpected self-loop at node " + std::to_string(i));
      }
      if (weight(j, i) != w) {
        throw DataError("asymmetric entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace mosgnn
