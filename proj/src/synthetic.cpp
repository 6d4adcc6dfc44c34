#include "mosgnn/synthetic.hpp"

#include <cmath>

#include "mosgnn/error.hpp"
#include "mosgnn/metrics.hpp"
#include "mosgnn/rng.hpp"

namespace mosgnn::synthetic {

FeatureSet make_clusters(const ClusterSpec& spec, std::uint64_t graph_index) {
  if (spec.nodes == 0 || spec.dim == 0 || spec.videos == 0) {
    throw ParameterError("make_clusters: nodes, dim and videos must be positive");
  }
  if (!(spec.moving_fraction >= 0.0 && spec.moving_fraction <= 1.0)) {
    throw ParameterError("make_clusters: moving_fraction must be in [0, 1]");
  }

  Rng world(derive_seed(spec.world_seed, {0xC3u}));
  std::vector<double> direction(spec.dim);
  for (double& d : direction) d = world.uniform() < 0.5 ? -1.0 : 1.0;

  Rng rng(derive_seed(spec.world_seed, {0xD4u, graph_index}));
  FeatureSet fs;
  fs.features = DenseMatrix(spec.nodes, spec.dim);
  fs.labels.resize(spec.nodes);
  fs.provenance.resize(spec.nodes);
  const auto moving =
      static_cast<std::size_t>(std::llround(spec.moving_fraction * static_cast<double>(spec.nodes)));
  std::vector<std::size_t> order(spec.nodes);
  for (std::size_t i = 0; i < spec.nodes; ++i) order[i] = i;
  rng.shuffle(order);

  for (std::size_t r = 0; r < spec.nodes; ++r) {
    const std::size_t i = order[r];
    const bool is_moving = r < moving;
    fs.labels[i] = is_moving ? kMoving : kStatic;
    const double sign = is_moving ? 1.0 : -1.0;
    auto row = fs.features.row(i);
    for (std::size_t j = 0; j < spec.dim; ++j) {
      row[j] = sign * spec.center_offset * direction[j] + spec.noise * rng.normal();
    }
  }

  // Nodes are spread over `videos` videos; frames advance every few instances.
  for (std::size_t i = 0; i < spec.nodes; ++i) {
    const std::size_t video = i % spec.videos;
    const std::size_t cat = (graph_index * spec.videos + video) % eval::kCategoryCodes.size();
    auto& p = fs.provenance[i];
    p.category = std::string(eval::kCategoryCodes[cat]);
    p.video = "g" + std::to_string(graph_index) + "_v" + std::to_string(video);
    p.frame = static_cast<std::uint32_t>(i / (spec.videos * 4));
    p.instance = static_cast<std::uint32_t>((i / spec.videos) % 4);
  }
  return fs;
}

}  // namespace mosgnn::synthetic
