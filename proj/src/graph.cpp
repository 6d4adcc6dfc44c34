#include "mosgnn/graph.hpp"

#include <algorithm>
#include <cmath>

#include "mosgnn/error.hpp"

namespace mosgnn {

bool FeatureSet::has_labels() const noexcept {
  return std::any_of(labels.begin(), labels.end(), [](auto l) { return l != kUnlabeled; });
}

std::vector<int> FeatureSet::targets() const {
  std::vector<int> t(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) t[i] = labels[i] == kMoving ? 1 : 0;
  return t;
}

std::vector<std::uint8_t> FeatureSet::labeled_mask() const {
  std::vector<std::uint8_t> m(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) m[i] = labels[i] != kUnlabeled;
  return m;
}

std::size_t FeatureSet::labeled_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](auto l) { return l != kUnlabeled; }));
}

void FeatureSet::validate() const {
  const std::size_t n = num_nodes();
  if (labels.size() != n || provenance.size() != n) {
    throw DataError("feature set: " + std::to_string(n) + " rows but " +
                    std::to_string(labels.size()) + " labels and " +
                    std::to_string(provenance.size()) + " provenance records");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = labels[i];
    if (l != kStatic && l != kMoving && l != kUnlabeled) {
      throw DataError("node " + std::to_string(i) + " has invalid label code " +
                      std::to_string(l));
    }
    for (double v : features.row(i)) {
      if (!std::isfinite(v)) throw DataError("node " + std::to_string(i) + " has a non-finite feature");
    }
  }
}

void GraphBundle::validate() const {
  nodes.validate();
  if (adjacency.n() != nodes.num_nodes()) {
    throw DataError("graph " + name + ": adjacency has " + std::to_string(adjacency.n()) +
                    " nodes, features have " + std::to_string(nodes.num_nodes()));
  }
  adjacency.validate();
}

}  // namespace mosgnn
