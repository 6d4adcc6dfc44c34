#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mosgnn/dense_matrix.hpp"
#include "mosgnn/graph.hpp"
#include "mosgnn/sparse_adjacency.hpp"

namespace mosgnn::graph {

inline constexpr std::size_t kDefaultK = 40;

/// Full N x N Euclidean distance matrix. Quadratic memory; for tests and
/// small graphs. knn_graph streams rows instead.
DenseMatrix pairwise_distances(const DenseMatrix& x);

/// Each node's nearest neighbors, self excluded, ascending by (distance, id).
struct DirectedKnn {
  std::size_t k = 0;                  // neighbors per node, min(k, N-1)
  std::vector<std::size_t> neighbor;  // N*k, row-major
  std::vector<double> distance;       // N*k
};
DirectedKnn directed_knn(const DenseMatrix& x, std::size_t k,
                         std::vector<std::string>* warnings = nullptr);

struct KnnGraph {
  SparseAdjacency adjacency;
  std::size_t k_used = 0;
  double sigma = 0.0;  // Gaussian bandwidth; 0 means binary weights were used
  std::vector<std::string> warnings;
};

/// Undirected k-NN graph: union of directed lists, weight exp(-d²/σ²) with σ
/// the mean selected neighbor distance.
KnnGraph knn_graph(const DenseMatrix& x, std::size_t k);

/// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
SparseAdjacency normalize_adjacency(const SparseAdjacency& a);

/// k-NN graph over a feature set; the bundle owns the raw adjacency.
GraphBundle build_graph(FeatureSet nodes, std::size_t k, std::string name = {},
                        std::vector<std::string>* warnings = nullptr);

}  // namespace mosgnn::graph
