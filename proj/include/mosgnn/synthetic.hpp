#pragma once

#include <cstdint>
#include <string>

#include "mosgnn/graph.hpp"

namespace mosgnn::synthetic {

/// Two Gaussian clusters (static vs moving) with isotropic noise. The cluster
/// centers depend only on `world_seed`, so graphs generated with different
/// `graph_index` values are independent samples of the same problem, which is
/// what inductive evaluation needs.
struct ClusterSpec {
  std::size_t nodes = 300;
  std::size_t dim = 930;
  double moving_fraction = 0.4;
  /// Per-coordinate offset of each center from the origin (centers at ±offset·u
  /// for a random sign vector u).
  double center_offset = 0.15;
  double noise = 1.0;
  std::uint64_t world_seed = 0;
  /// Videos per graph; each video is assigned one category code.
  std::size_t videos = 3;
};

FeatureSet make_clusters(const ClusterSpec& spec, std::uint64_t graph_index);

}  // namespace mosgnn::synthetic
