#pragma once

#include <span>
#include <vector>

#include "mosgnn/dense_matrix.hpp"
#include "mosgnn/graph.hpp"

namespace mosgnn::batch {

/// Disjoint union of graphs: adjacencies stacked as diagonal blocks, node
/// arrays concatenated in list order. Node j of graph g is offsets[g] + j.
struct BatchedGraph {
  GraphBundle merged;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> sizes;

  std::size_t num_graphs() const noexcept { return sizes.size(); }
};

BatchedGraph block_diag_batch(std::span<const GraphBundle> graphs);

/// Block-diagonal composition of bare adjacencies.
SparseAdjacency block_diag(std::span<const SparseAdjacency> blocks);

/// Per-graph row slices of a batch-aligned matrix.
std::vector<DenseMatrix> split_rows(const BatchedGraph& batch, const DenseMatrix& rows);

}  // namespace mosgnn::batch
