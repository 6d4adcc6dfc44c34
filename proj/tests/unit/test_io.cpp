#include <cstring>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "mosgnn/error.hpp"
#include "mosgnn/graph_construct.hpp"
#include "mosgnn/io/binary.hpp"
#include "mosgnn/io/formats.hpp"
#include "mosgnn/model.hpp"

using namespace mosgnn;

namespace {

// Offset of the label block in an encoded feature file.
std::size_t label_offset(const FeatureSet& fs) { return 4 + 2 + 8 + 8 + 1 + fs.features.size() * 8; }

std::vector<std::uint8_t> le64(std::uint64_t v) {
  std::vector<std::uint8_t> b(8);
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return b;
}

void append(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& b) {
  out.insert(out.end(), b.begin(), b.end());
}

io::Checkpoint sample_checkpoint() {
  model::ModelConfig cfg;
  cfg.in_dim = 6;
  cfg.hidden_dims = {5, 4, 3, 2};
  cfg.seed = 77;
  cfg.dropout_p = 0.25;
  io::Checkpoint c{cfg, model::init_params(cfg), {}, 1234, 17};
  for (const auto& p : c.params) c.velocity.push_back(testutil::random_matrix(p.value.rows(), p.value.cols(), 5));
  return c;
}

}  // namespace

TEST_CASE("feature file layout is pinned byte for byte") {
  FeatureSet fs;
  fs.features = DenseMatrix{{1.0}};
  fs.labels = {kMoving};
  fs.provenance = {{"BSL", "v", 2, 3}};
  std::vector<std::uint8_t> expected{'N', 'F', 'V', '1', 1, 0};
  append(expected, le64(1));
  append(expected, le64(1));
  expected.push_back(1);
  append(expected, {0, 0, 0, 0, 0, 0, 0xF0, 0x3F});
  expected.push_back(1);
  append(expected, {3, 0, 0, 0, 'B', 'S', 'L', 1, 0, 0, 0, 'v', 2, 0, 0, 0, 3, 0, 0, 0});
  CHECK(io::encode_features(fs) == expected);
  CHECK(io::decode_features(expected) == fs);
}

TEST_CASE("feature files round-trip bitwise") {
  auto fs = testutil::random_features(17, 9, 1, "LFR");
  fs.features(3, 4) = -0.0;
  fs.features(5, 1) = std::numeric_limits<double>::denorm_min();
  fs.labels[2] = kUnlabeled;
  fs.provenance[0].video = "ünïcode/video";
  const auto bytes = io::encode_features(fs);
  const auto back = io::decode_features(bytes);
  CHECK(back == fs);
  CHECK(std::memcmp(back.features.data(), fs.features.data(), fs.features.size() * 8) == 0);

  testutil::TempDir dir("features");
  io::write_features(dir / "a.nfv", fs);
  CHECK(io::read_features(dir / "a.nfv") == fs);
}

TEST_CASE("unlabeled feature files use flag zero and all-255 labels") {
  auto fs = testutil::random_features(4, 2, 2);
  std::fill(fs.labels.begin(), fs.labels.end(), kUnlabeled);
  auto bytes = io::encode_features(fs);
  CHECK(bytes[22] == 0);
  CHECK(io::decode_features(bytes) == fs);
  // A real label under flag 0 is inconsistent.
  bytes[label_offset(fs) + 1] = kMoving;
  CHECK_THROWS_AS(io::decode_features(bytes), DataError);
  // Flag 1 with no labels is inconsistent too.
  bytes[label_offset(fs) + 1] = kUnlabeled;
  bytes[22] = 1;
  CHECK_THROWS_AS(io::decode_features(bytes), DataError);
  bytes[22] = 2;
  CHECK_THROWS_AS(io::decode_features(bytes), FormatError);
}

TEST_CASE("every truncation of a feature file is a format error") {
  const auto bytes = io::encode_features(testutil::random_features(3, 2, 3));
  for (std::size_t len = 0; len < bytes.size(); ++len) {
    CAPTURE(len);
    const std::span<const std::uint8_t> prefix(bytes.data(), len);
    CHECK_THROWS_AS(io::decode_features(prefix), FormatError);
  }
}

TEST_CASE("format errors report a byte offset") {
  auto bytes = io::encode_features(testutil::random_features(3, 2, 4));
  bytes.resize(bytes.size() - 3);
  try {
    (void)io::decode_features(bytes);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
}

TEST_CASE("feature file content errors") {
  const auto fs = testutil::random_features(3, 2, 5);
  auto bytes = io::encode_features(fs);

  auto bad_label = bytes;
  bad_label[label_offset(fs) + 1] = 7;
  CHECK_THROWS_AS(io::decode_features(bad_label), DataError);

  auto nan = bytes;
  const double q = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(nan.data() + 23 + 8 * 3, &q, 8);  // node 1, column 1
  try {
    (void)io::decode_features(nan);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("node 1") != std::string::npos);
  }

  auto magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(io::decode_features(magic), FormatError);

  auto version = bytes;
  version[4] = 2;
  CHECK_THROWS_AS(io::decode_features(version), IncompatibleError);

  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(io::decode_features(trailing), FormatError);

  // An absurd node count must not allocate.
  auto huge = bytes;
  const auto n = le64(UINT64_MAX / 16);
  std::copy(n.begin(), n.end(), huge.begin() + 6);
  CHECK_THROWS_AS(io::decode_features(huge), FormatError);
}

TEST_CASE("missing files are data errors") {
  CHECK_THROWS_AS(io::read_features("/nonexistent/dir/x.nfv"), DataError);
}

TEST_CASE("graph files round-trip") {
  const auto g = graph::build_graph(testutil::random_features(12, 4, 6), 3, "G2");
  const auto bytes = io::encode_graph(g, 3);
  const auto back = io::decode_graph(bytes);
  CHECK(back.k == 3);
  CHECK(back.graph.nodes == g.nodes);
  CHECK(back.graph.adjacency == g.adjacency);

  testutil::TempDir dir("graph");
  io::write_graph(dir / "G2.gimg", g, 3);
  CHECK(io::read_graph(dir / "G2.gimg").graph.name == "G2");

  for (std::size_t len = 0; len < bytes.size(); len += 7) {
    const std::span<const std::uint8_t> prefix(bytes.data(), len);
    CHECK_THROWS_AS(io::decode_graph(prefix), FormatError);
  }
  auto version = bytes;
  version[4] = 9;
  CHECK_THROWS_AS(io::decode_graph(version), IncompatibleError);
}

TEST_CASE("graph or feature files are detected by magic") {
  testutil::TempDir dir("detect");
  const auto fs = testutil::random_features(10, 3, 7);
  io::write_features(dir / "G1.nfv", fs);
  const auto built = io::load_graph_or_features(dir / "G1.nfv", 4);
  CHECK(built.k == 4);
  CHECK(built.graph.name == "G1");
  CHECK(built.graph.adjacency == graph::knn_graph(fs.features, 4).adjacency);

  io::write_graph(dir / "G1.gimg", built.graph, 4);
  const auto loaded = io::load_graph_or_features(dir / "G1.gimg", 40);
  CHECK(loaded.k == 4);
  CHECK(loaded.graph.adjacency == built.graph.adjacency);
}

TEST_CASE("checkpoints round-trip bitwise") {
  const auto c = sample_checkpoint();
  const auto back = io::decode_checkpoint(io::encode_checkpoint(c));
  CHECK(back.config == c.config);
  CHECK(back.train_seed == 1234);
  CHECK(back.epoch == 17);
  REQUIRE(back.params.size() == c.params.size());
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    CHECK(back.params[i].name == c.params[i].name);
    CHECK(back.params[i].value == c.params[i].value);
    CHECK(back.velocity[i] == c.velocity[i]);
  }

  auto no_velocity = c;
  no_velocity.velocity.clear();
  CHECK(io::decode_checkpoint(io::encode_checkpoint(no_velocity)).velocity.empty());

  testutil::TempDir dir("ckpt");
  io::save_checkpoint(dir / "m.gimc", c);
  CHECK(io::load_checkpoint(dir / "m.gimc").params[0].value == c.params[0].value);
}

TEST_CASE("checkpoint corruption is detected") {
  const auto bytes = io::encode_checkpoint(sample_checkpoint());
  auto version = bytes;
  version[4] = 3;
  CHECK_THROWS_AS(io::decode_checkpoint(version), IncompatibleError);

  for (std::size_t len = 0; len < bytes.size(); len += 13) {
    const std::span<const std::uint8_t> prefix(bytes.data(), len);
    CHECK_THROWS_AS(io::decode_checkpoint(prefix), FormatError);
  }

  // Find the first blob ("gcn1.W", 6 x 5) and inflate its row count.
  const std::string name = "gcn1.W";
  const auto it = std::search(bytes.begin(), bytes.end(), name.begin(), name.end());
  REQUIRE(it != bytes.end());
  auto blob = bytes;
  const auto rows_at = static_cast<std::size_t>(it - bytes.begin()) + name.size();
  blob[rows_at] = 0xFF;
  blob[rows_at + 1] = 0xFF;
  CHECK_THROWS_AS(io::decode_checkpoint(blob), FormatError);
}

TEST_CASE("atomic writes leave no temporary files behind") {
  testutil::TempDir dir("atomic");
  io::write_text_file(dir / "a.txt", "hello\n");
  io::write_text_file(dir / "a.txt", "again\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
  CHECK(files == 1);
  const auto bytes = io::read_file(dir / "a.txt");
  CHECK(std::string(bytes.begin(), bytes.end()) == "again\n");
}
