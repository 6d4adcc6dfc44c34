#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "mosgnn/graph.hpp"
#include "mosgnn/model.hpp"
#include "mosgnn/tape.hpp"

// Binary formats. All integers and floats little-endian, floats IEEE-754
// binary64; layouts are documented in docs/formats.md.

namespace mosgnn::io {

inline constexpr std::uint16_t kFeatureVersion = 1;
inline constexpr std::uint16_t kGraphVersion = 1;
inline constexpr std::uint16_t kCheckpointVersion = 1;

// --- node features ("NFV1") ------------------------------------------------

std::vector<std::uint8_t> encode_features(const FeatureSet& fs);
FeatureSet decode_features(std::span<const std::uint8_t> bytes);
void write_features(const std::filesystem::path& path, const FeatureSet& fs);
FeatureSet read_features(const std::filesystem::path& path);

// --- graph ("GIMG"): feature payload + raw k-NN adjacency -------------------

struct GraphFile {
  std::uint64_t k = 0;  // neighbor count the adjacency was built with
  GraphBundle graph;
};

std::vector<std::uint8_t> encode_graph(const GraphBundle& g, std::uint64_t k);
GraphFile decode_graph(std::span<const std::uint8_t> bytes);
void write_graph(const std::filesystem::path& path, const GraphBundle& g, std::uint64_t k);
/// Graph name defaults to the file stem.
GraphFile read_graph(const std::filesystem::path& path);

/// Accepts either a graph file or a feature file (then builds the k-NN graph
/// with `k`). Detected by magic.
GraphFile load_graph_or_features(const std::filesystem::path& path, std::size_t k,
                                 std::vector<std::string>* warnings = nullptr);

// --- checkpoint ("GIMC") ----------------------------------------------------

struct Checkpoint {
  model::ModelConfig config;
  std::vector<Parameter> params;
  std::vector<DenseMatrix> velocity;  // empty or one per parameter
  std::uint64_t train_seed = 0;
  std::uint64_t epoch = 0;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& c);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mosgnn::io
