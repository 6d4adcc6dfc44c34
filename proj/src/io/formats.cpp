#include "mosgnn/io/formats.hpp"

#include <cmath>

#include "mosgnn/error.hpp"
#include "mosgnn/graph_construct.hpp"
#include "mosgnn/io/binary.hpp"

namespace mosgnn::io {
namespace {

constexpr std::string_view kFeatureMagic = "NFV1";
constexpr std::string_view kGraphMagic = "GIMG";
constexpr std::string_view kCheckpointMagic = "GIMC";

// Shared body of NFV1 and GIMG: header counts, matrix, labels, provenance.
void put_feature_body(ByteWriter& w, const FeatureSet& fs) {
  fs.validate();
  w.u64(fs.num_nodes());
  w.u64(fs.feature_dim());
  w.u8(fs.has_labels() ? 1 : 0);
  w.f64s(fs.features.values());
  for (auto l : fs.labels) w.u8(l);
  for (const auto& p : fs.provenance) {
    w.str(p.category);
    w.str(p.video);
    w.u32(p.frame);
    w.u32(p.instance);
  }
}

FeatureSet get_feature_body(ByteReader& r) {
  const std::uint64_t n = r.u64();
  const std::uint64_t f = r.u64();
  const std::size_t flag_offset = r.offset();
  const std::uint8_t flag = r.u8();
  if (flag > 1) r.fail("label-presence flag must be 0 or 1, got " + std::to_string(flag));
  if (f != 0 && n > UINT64_MAX / f) r.fail("N x F overflows");
  r.require(n * f, 8, "feature matrix");

  FeatureSet fs;
  auto values = r.f64s(n * f);
  for (std::uint64_t i = 0; i < n * f; ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("non-finite feature at node " + std::to_string(f ? i / f : 0) +
                      ", column " + std::to_string(f ? i % f : 0));
    }
  }
  fs.features = DenseMatrix(n, f, std::move(values));

  r.require(n, 1, "label block");
  fs.labels.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto l = r.u8();
    if (l != kStatic && l != kMoving && l != kUnlabeled) {
      throw DataError("node " + std::to_string(i) + " has invalid label byte " +
                      std::to_string(l));
    }
    if (flag == 0 && l != kUnlabeled) {
      throw DataError("node " + std::to_string(i) +
                      " carries a label but the header label-presence flag (offset " +
                      std::to_string(flag_offset) + ") is 0");
    }
    fs.labels[i] = l;
  }
  if (flag == 1 && !fs.has_labels()) {
    throw DataError("header label-presence flag is 1 but every label is 255");
  }

  // Each record is at least 16 bytes; reject absurd N before reserving.
  r.require(n, 16, "provenance records");
  fs.provenance.resize(n);
  for (auto& p : fs.provenance) {
    p.category = r.str();
    p.video = r.str();
    p.frame = r.u32();
    p.instance = r.u32();
  }
  return fs;
}

void check_version(ByteReader& r, std::uint16_t expected, const char* what) {
  const auto v = r.u16();
  if (v != expected) {
    throw IncompatibleError(std::string(what) + " version " + std::to_string(v) +
                            " is not supported (expected " + std::to_string(expected) + ")");
  }
}

void put_matrix_blob(ByteWriter& w, std::string_view name, const DenseMatrix& m) {
  w.str(name);
  w.u64(m.rows());
  w.u64(m.cols());
  w.f64s(m.values());
}

std::pair<std::string, DenseMatrix> get_matrix_blob(ByteReader& r) {
  std::string name = r.str();
  const auto rows = r.u64();
  const auto cols = r.u64();
  if (cols != 0 && rows > UINT64_MAX / cols) r.fail("blob '" + name + "' shape overflows");
  r.require(rows * cols, 8, "parameter blob");
  auto data = r.f64s(rows * cols);
  for (double v : data) {
    if (!std::isfinite(v)) throw DataError("non-finite value in blob '" + name + "'");
  }
  return {std::move(name), DenseMatrix(rows, cols, std::move(data))};
}

}  // namespace

std::vector<std::uint8_t> encode_features(const FeatureSet& fs) {
  ByteWriter w;
  w.magic(kFeatureMagic);
  w.u16(kFeatureVersion);
  put_feature_body(w, fs);
  return w.take();
}

FeatureSet decode_features(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "feature file");
  r.expect_magic(kFeatureMagic);
  check_version(r, kFeatureVersion, "feature file");
  auto fs = get_feature_body(r);
  r.expect_end();
  return fs;
}

void write_features(const std::filesystem::path& path, const FeatureSet& fs) {
  write_file(path, encode_features(fs));
}

FeatureSet read_features(const std::filesystem::path& path) {
  return decode_features(read_file(path));
}

std::vector<std::uint8_t> encode_graph(const GraphBundle& g, std::uint64_t k) {
  g.validate();
  ByteWriter w;
  w.magic(kGraphMagic);
  w.u16(kGraphVersion);
  w.u64(k);
  put_feature_body(w, g.nodes);
  const auto& a = g.adjacency;
  w.u64(a.nnz());
  for (auto o : a.row_offsets()) w.u64(o);
  for (auto c : a.col_indices()) w.u64(c);
  w.f64s(a.weights());
  return w.take();
}

GraphFile decode_graph(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "graph file");
  r.expect_magic(kGraphMagic);
  check_version(r, kGraphVersion, "graph file");
  GraphFile out;
  out.k = r.u64();
  out.graph.nodes = get_feature_body(r);
  const std::uint64_t n = out.graph.nodes.num_nodes();
  const std::uint64_t nnz = r.u64();
  r.require(n + 1, 8, "row offsets");
  std::vector<std::uint64_t> offsets(n + 1);
  for (auto& o : offsets) o = r.u64();
  r.require(nnz, 16, "adjacency entries");
  std::vector<std::uint64_t> cols(nnz);
  for (auto& c : cols) c = r.u64();
  auto weights = r.f64s(nnz);
  r.expect_end();
  out.graph.adjacency =
      SparseAdjacency(n, std::move(offsets), std::move(cols), std::move(weights), false);
  return out;
}

void write_graph(const std::filesystem::path& path, const GraphBundle& g, std::uint64_t k) {
  write_file(path, encode_graph(g, k));
}

GraphFile read_graph(const std::filesystem::path& path) {
  auto gf = decode_graph(read_file(path));
  gf.graph.name = path.stem().string();
  return gf;
}

GraphFile load_graph_or_features(const std::filesystem::path& path, std::size_t k,
                                 std::vector<std::string>* warnings) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::string_view(reinterpret_cast<const char*>(bytes.data()), 4) ==
                               kGraphMagic) {
    auto gf = decode_graph(bytes);
    gf.graph.name = path.stem().string();
    return gf;
  }
  GraphFile gf;
  gf.k = k;
  gf.graph = graph::build_graph(decode_features(bytes), k, path.stem().string(), warnings);
  return gf;
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& c) {
  c.config.validate();
  ByteWriter w;
  w.magic(kCheckpointMagic);
  w.u16(kCheckpointVersion);
  w.u64(c.config.in_dim);
  for (auto h : c.config.hidden_dims) w.u64(h);
  w.u64(c.config.out_dim);
  w.f64(c.config.dropout_p);
  w.f64(c.config.pairnorm_scale);
  w.u64(c.config.seed);
  w.u8(c.config.pairnorm ? 1 : 0);
  w.u64(c.train_seed);
  w.u64(c.epoch);
  w.u32(static_cast<std::uint32_t>(c.params.size()));
  for (const auto& p : c.params) put_matrix_blob(w, p.name, p.value);
  if (!c.velocity.empty() && c.velocity.size() != c.params.size()) {
    throw DataError("checkpoint: velocity count does not match parameter count");
  }
  w.u32(static_cast<std::uint32_t>(c.velocity.size()));
  for (std::size_t i = 0; i < c.velocity.size(); ++i) {
    put_matrix_blob(w, c.params[i].name, c.velocity[i]);
  }
  return w.take();
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "checkpoint");
  r.expect_magic(kCheckpointMagic);
  check_version(r, kCheckpointVersion, "checkpoint");
  Checkpoint c;
  c.config.in_dim = r.u64();
  for (auto& h : c.config.hidden_dims) h = r.u64();
  c.config.out_dim = r.u64();
  c.config.dropout_p = r.f64();
  c.config.pairnorm_scale = r.f64();
  c.config.seed = r.u64();
  const auto pn = r.u8();
  if (pn > 1) r.fail("pairnorm flag must be 0 or 1");
  c.config.pairnorm = pn == 1;
  c.train_seed = r.u64();
  c.epoch = r.u64();
  try {
    c.config.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string("checkpoint: invalid model config: ") + e.what());
  }

  const auto count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    auto [name, value] = get_matrix_blob(r);
    c.params.emplace_back(std::move(name), std::move(value));
  }
  const auto vcount = r.u32();
  if (vcount != 0 && vcount != count) r.fail("velocity blob count does not match parameters");
  for (std::uint32_t i = 0; i < vcount; ++i) {
    auto [name, value] = get_matrix_blob(r);
    if (name != c.params[i].name || value.rows() != c.params[i].value.rows() ||
        value.cols() != c.params[i].value.cols()) {
      r.fail("velocity blob '" + name + "' does not match parameter '" + c.params[i].name + "'");
    }
    c.velocity.push_back(std::move(value));
  }
  r.expect_end();
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  write_file(path, encode_checkpoint(c));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace mosgnn::io
