#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mosgnn/dense_matrix.hpp"
#include "mosgnn/sparse_adjacency.hpp"

namespace mosgnn {

inline constexpr std::uint8_t kStatic = 0;
inline constexpr std::uint8_t kMoving = 1;
inline constexpr std::uint8_t kUnlabeled = 255;

/// Where a node (object instance) came from.
struct NodeProvenance {
  std::string category;  // challenge category tag, e.g. "BSL"
  std::string video;
  std::uint32_t frame = 0;
  std::uint32_t instance = 0;

  friend bool operator==(const NodeProvenance&, const NodeProvenance&) = default;
};

/// Node features plus per-node labels and provenance.
struct FeatureSet {
  DenseMatrix features;                 // N x F
  std::vector<std::uint8_t> labels;     // kStatic, kMoving or kUnlabeled
  std::vector<NodeProvenance> provenance;

  std::size_t num_nodes() const noexcept { return features.rows(); }
  std::size_t feature_dim() const noexcept { return features.cols(); }
  bool has_labels() const noexcept;

  /// Labels as class indices (unlabeled rows map to 0; see labeled_mask).
  std::vector<int> targets() const;
  /// 1 where the node carries a label.
  std::vector<std::uint8_t> labeled_mask() const;
  std::size_t labeled_count() const noexcept;

  /// Checks array lengths, label codes and finiteness.
  void validate() const;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

/// One graph: nodes plus their (un-normalized) k-NN adjacency.
struct GraphBundle {
  std::string name;  // e.g. "G1"; not persisted in feature files
  FeatureSet nodes;
  SparseAdjacency adjacency;

  std::size_t num_nodes() const noexcept { return nodes.num_nodes(); }
  void validate() const;
};

}  // namespace mosgnn
