#pragma once

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mosgnn/dense_matrix.hpp"
#include "mosgnn/graph.hpp"
#include "mosgnn/rng.hpp"
#include "mosgnn/sparse_adjacency.hpp"

namespace testutil {

inline mosgnn::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                         double lo = -1.0, double hi = 1.0) {
  mosgnn::Rng rng(seed);
  mosgnn::DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

// Plain triple loop, independent of the kernel tables.
inline mosgnn::DenseMatrix naive_matmul(const mosgnn::DenseMatrix& a, const mosgnn::DenseMatrix& b) {
  mosgnn::DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0;
      for (std::size_t p = 0; p < a.cols(); ++p) s += static_cast<long double>(a(i, p)) * b(p, j);
      c(i, j) = static_cast<double>(s);
    }
  return c;
}

// Random symmetric graph without self-loops; each pair is an edge with probability `density`.
inline mosgnn::SparseAdjacency random_graph(std::size_t n, double density, std::uint64_t seed) {
  mosgnn::Rng rng(seed);
  std::vector<mosgnn::WeightedEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(density)) edges.push_back({i, j, rng.uniform(0.05, 1.0)});
  return mosgnn::SparseAdjacency::from_edges(n, edges);
}

// D^-1/2 (A + I) D^-1/2 computed densely.
inline mosgnn::DenseMatrix dense_normalized(const mosgnn::DenseMatrix& a) {
  const std::size_t n = a.rows();
  mosgnn::DenseMatrix t = a;
  for (std::size_t i = 0; i < n; ++i) t(i, i) += 1.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += t(i, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(i, j) /= std::sqrt(deg[i]) * std::sqrt(deg[j]);
  return t;
}

inline mosgnn::FeatureSet random_features(std::size_t n, std::size_t f, std::uint64_t seed,
                                          std::string category = "BSL") {
  mosgnn::FeatureSet fs;
  fs.features = random_matrix(n, f, seed);
  mosgnn::Rng rng(seed ^ 0x5555);
  fs.labels.resize(n);
  fs.provenance.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fs.labels[i] = rng.bernoulli(0.5) ? mosgnn::kMoving : mosgnn::kStatic;
    fs.provenance[i] = {category, "video" + std::to_string(i % 2), static_cast<std::uint32_t>(i / 3),
                        static_cast<std::uint32_t>(i % 3)};
  }
  return fs;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("mosgnn_test_" + tag + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

}  // namespace testutil
