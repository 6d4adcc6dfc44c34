#include "mosgnn/graph_construct.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "mosgnn/error.hpp"
#include "mosgnn/kernels/kernels.hpp"

namespace mosgnn::graph {
namespace {

void require_finite_rows(const DenseMatrix& x) {
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (double v : x.row(i)) {
      if (!std::isfinite(v)) {
        throw DataError("node " + std::to_string(i) + " has a non-finite feature");
      }
    }
  }
}

// Computed with the lower id first so d(i,j) and d(j,i) are bitwise equal.
double distance(const DenseMatrix& x, std::size_t i, std::size_t j) {
  const auto lo = std::min(i, j);
  const auto hi = std::max(i, j);
  return std::sqrt(kernels::active().squared_distance(x.cols(), x.row(lo).data(), x.row(hi).data()));
}

}  // namespace

DenseMatrix pairwise_distances(const DenseMatrix& x) {
  if (x.rows() == 0) throw ConstructionError("pairwise_distances: no nodes");
  require_finite_rows(x);
  const std::size_t n = x.rows();
  DenseMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = distance(x, i, j);
  }
  return d;
}

DirectedKnn directed_knn(const DenseMatrix& x, std::size_t k, std::vector<std::string>* warnings) {
  const std::size_t n = x.rows();
  if (n < 2) throw ConstructionError("knn_graph: need at least 2 nodes, got " + std::to_string(n));
  if (k < 1) throw ParameterError("knn_graph: k must be at least 1");
  require_finite_rows(x);
  if (k > n - 1) {
    if (k >= n && warnings) {
      warnings->push_back("k=" + std::to_string(k) + " >= N=" + std::to_string(n) +
                          "; clamped to " + std::to_string(n - 1));
    }
    k = n - 1;
  }

  DirectedKnn out;
  out.k = k;
  out.neighbor.resize(n * k);
  out.distance.resize(n * k);
  std::vector<std::pair<double, std::size_t>> row(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row[c++] = {distance(x, i, j), j};
    }
    // Lexicographic (distance, id): equidistant neighbors resolve to the smaller id.
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    for (std::size_t r = 0; r < k; ++r) {
      out.distance[i * k + r] = row[r].first;
      out.neighbor[i * k + r] = row[r].second;
    }
  }
  return out;
}

KnnGraph knn_graph(const DenseMatrix& x, std::size_t k) {
  KnnGraph g;
  const DirectedKnn lists = directed_knn(x, k, &g.warnings);
  g.k_used = lists.k;
  const std::size_t n = x.rows();

  g.sigma = std::accumulate(lists.distance.begin(), lists.distance.end(), 0.0) /
            static_cast<double>(lists.distance.size());
  const double inv_sigma2 = g.sigma > 0.0 ? 1.0 / (g.sigma * g.sigma) : 0.0;

  std::vector<WeightedEdge> edges;
  edges.reserve(n * lists.k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < lists.k; ++r) {
      const std::size_t j = lists.neighbor[i * lists.k + r];
      const double d = lists.distance[i * lists.k + r];
      // exp underflows for extreme outliers; keep the edge with the smallest normal weight.
      const double w = g.sigma > 0.0 ? std::max(std::exp(-d * d * inv_sigma2), DBL_MIN) : 1.0;
      edges.push_back({std::min(i, j), std::max(i, j), w});
    }
  }
  g.adjacency = SparseAdjacency::from_edges(n, edges);
  return g;
}

SparseAdjacency normalize_adjacency(const SparseAdjacency& a) {
  const std::size_t n = a.n();
  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 1.0;  // self-loop of A + I
    const auto nb = a.neighbors(i);
    const auto w = a.row_weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (nb[e] == i) {
        throw ParameterError("normalize_adjacency: input already has a self-loop at node " +
                             std::to_string(i));
      }
      deg += w[e];
    }
    inv_sqrt_degree[i] = 1.0 / std::sqrt(deg);
  }

  std::vector<std::uint64_t> offsets(n + 1, 0);
  std::vector<std::uint64_t> cols;
  std::vector<double> vals;
  cols.reserve(a.nnz() + n);
  vals.reserve(a.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = a.neighbors(i);
    const auto w = a.row_weights(i);
    bool diag_done = false;
    auto emit = [&](std::size_t j, double wij) {
      cols.push_back(j);
      vals.push_back(wij * (inv_sqrt_degree[std::min(i, j)] * inv_sqrt_degree[std::max(i, j)]));
    };
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (!diag_done && nb[e] > i) {
        emit(i, 1.0);
        diag_done = true;
      }
      emit(nb[e], w[e]);
    }
    if (!diag_done) emit(i, 1.0);
    offsets[i + 1] = cols.size();
  }
  return SparseAdjacency(n, std::move(offsets), std::move(cols), std::move(vals), true);
}

GraphBundle build_graph(FeatureSet nodes, std::size_t k, std::string name,
                        std::vector<std::string>* warnings) {
  nodes.validate();
  auto g = knn_graph(nodes.features, k);
  if (warnings) warnings->insert(warnings->end(), g.warnings.begin(), g.warnings.end());
  GraphBundle bundle{std::move(name), std::move(nodes), std::move(g.adjacency)};
  return bundle;
}

}  // namespace mosgnn::graph
