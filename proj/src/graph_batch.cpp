#include "mosgnn/graph_batch.hpp"

#include "mosgnn/error.hpp"

namespace mosgnn::batch {

SparseAdjacency block_diag(std::span<const SparseAdjacency> blocks) {
  std::size_t n = 0;
  std::size_t nnz = 0;
  bool self_loops = false;
  for (const auto& b : blocks) {
    n += b.n();
    nnz += b.nnz();
    self_loops = self_loops || b.allows_self_loops();
  }
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint64_t> cols;
  std::vector<double> weights;
  offsets.reserve(n + 1);
  cols.reserve(nnz);
  weights.reserve(nnz);
  offsets.push_back(0);
  std::uint64_t base = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.n(); ++i) {
      for (auto j : b.neighbors(i)) cols.push_back(base + j);
      const auto w = b.row_weights(i);
      weights.insert(weights.end(), w.begin(), w.end());
      offsets.push_back(cols.size());
    }
    base += b.n();
  }
  return SparseAdjacency(n, std::move(offsets), std::move(cols), std::move(weights), self_loops);
}

BatchedGraph block_diag_batch(std::span<const GraphBundle> graphs) {
  if (graphs.empty()) throw BatchError("block_diag_batch: empty graph list");
  const std::size_t width = graphs.front().nodes.feature_dim();

  BatchedGraph out;
  std::vector<DenseMatrix> features;
  std::vector<SparseAdjacency> adjacencies;
  std::size_t offset = 0;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const auto& graph = graphs[g];
    if (graph.nodes.feature_dim() != width) {
      throw DataError("block_diag_batch: graph " + std::to_string(g) + " has feature width " +
                      std::to_string(graph.nodes.feature_dim()) + ", expected " +
                      std::to_string(width));
    }
    if (graph.num_nodes() == 0) {
      throw BatchError("block_diag_batch: graph " + std::to_string(g) + " has no nodes");
    }
    if (graph.adjacency.n() != graph.num_nodes()) {
      throw DataError("block_diag_batch: graph " + std::to_string(g) +
                      " adjacency/feature node counts differ");
    }
    out.offsets.push_back(offset);
    out.sizes.push_back(graph.num_nodes());
    offset += graph.num_nodes();

    features.push_back(graph.nodes.features);
    adjacencies.push_back(graph.adjacency);
    auto& m = out.merged.nodes;
    m.labels.insert(m.labels.end(), graph.nodes.labels.begin(), graph.nodes.labels.end());
    m.provenance.insert(m.provenance.end(), graph.nodes.provenance.begin(),
                        graph.nodes.provenance.end());
    out.merged.name += (g ? "+" : "") + graph.name;
  }
  out.merged.nodes.features = concat_rows(features);
  out.merged.adjacency = block_diag(adjacencies);
  return out;
}

std::vector<DenseMatrix> split_rows(const BatchedGraph& batch, const DenseMatrix& rows) {
  if (rows.rows() != batch.merged.num_nodes()) {
    throw DimensionError("split_rows: matrix has " + std::to_string(rows.rows()) +
                         " rows, batch has " + std::to_string(batch.merged.num_nodes()) +
                         " nodes");
  }
  std::vector<DenseMatrix> parts;
  parts.reserve(batch.num_graphs());
  for (std::size_t g = 0; g < batch.num_graphs(); ++g) {
    parts.push_back(slice_rows(rows, batch.offsets[g], batch.sizes[g]));
  }
  return parts;
}

}  // namespace mosgnn::batch
