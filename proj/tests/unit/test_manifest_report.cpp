#include <string>
#include <vector>

#include "helpers.hpp"
#include "mosgnn/error.hpp"
#include "mosgnn/io/binary.hpp"
#include "mosgnn/io/manifest.hpp"
#include "mosgnn/io/report.hpp"

using namespace mosgnn;
using nlohmann::json;

namespace {

const io::ExperimentSpec& find(const io::ExperimentManifest& m, const std::string& name) {
  for (const auto& e : m.experiments)
    if (e.name == name) return e;
  FAIL("no experiment " << name);
  throw 0;
}

using Names = std::vector<std::string>;

json two_graph_manifest() {
  return json::parse(R"({
    "graphs": {"A": "a.nfv", "B": "/abs/b.nfv", "C": "c.nfv"},
    "experiments": [{"name": "E", "train": "A", "val": ["B"], "test": "C"}]
  })");
}

}  // namespace

TEST_CASE("the default manifest encodes the four-way rotation") {
  const auto m = io::parse_manifest(io::default_manifest_json(), "/data");
  REQUIRE(m.experiments.size() == 4);
  const auto& e1 = find(m, "Exp1");
  CHECK(e1.train == Names{"G2", "G3"});
  CHECK(e1.val == Names{"G1"});
  CHECK(e1.test == Names{"G4"});
  const auto& e2 = find(m, "Exp2");
  CHECK(e2.train == Names{"G1", "G3"});
  CHECK(e2.val == Names{"G4"});
  CHECK(e2.test == Names{"G2"});
  const auto& e3 = find(m, "Exp3");
  CHECK(e3.train == Names{"G2", "G3"});
  CHECK(e3.val == Names{"G4"});
  CHECK(e3.test == Names{"G1"});
  const auto& e4 = find(m, "Exp4");
  CHECK(e4.train == Names{"G1", "G2"});
  CHECK(e4.val == Names{"G4"});
  CHECK(e4.test == Names{"G3"});
  CHECK(m.graph_path("G1") == std::filesystem::path("/data/G1.nfv"));
}

TEST_CASE("relative graph paths resolve against the manifest directory") {
  const auto m = io::parse_manifest(two_graph_manifest(), "/base");
  CHECK(m.graph_path("A") == std::filesystem::path("/base/a.nfv"));
  CHECK(m.graph_path("B") == std::filesystem::path("/abs/b.nfv"));
  CHECK_THROWS_AS(m.graph_path("Z"), ValidationError);
}

TEST_CASE("a graph in two splits is a validation error naming it") {
  auto doc = two_graph_manifest();
  doc["experiments"][0]["test"] = json::array({"C", "A"});
  try {
    (void)io::parse_manifest(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'A'") != std::string::npos);
    CHECK(msg.find("train") != std::string::npos);
    CHECK(msg.find("test") != std::string::npos);
  }
}

TEST_CASE("manifest structure errors") {
  auto undeclared = two_graph_manifest();
  undeclared["experiments"][0]["val"] = "Q";
  CHECK_THROWS_AS(io::parse_manifest(undeclared), ValidationError);

  auto unknown = two_graph_manifest();
  unknown["extra"] = 1;
  CHECK_THROWS_AS(io::parse_manifest(unknown), ValidationError);

  auto unknown_exp_key = two_graph_manifest();
  unknown_exp_key["experiments"][0]["tset"] = "C";
  CHECK_THROWS_AS(io::parse_manifest(unknown_exp_key), ValidationError);

  auto empty_split = two_graph_manifest();
  empty_split["experiments"][0]["train"] = json::array();
  CHECK_THROWS_AS(io::parse_manifest(empty_split), ValidationError);

  auto dup = two_graph_manifest();
  dup["experiments"].push_back(dup["experiments"][0]);
  CHECK_THROWS_AS(io::parse_manifest(dup), ValidationError);

  auto no_experiments = two_graph_manifest();
  no_experiments["experiments"] = json::array();
  CHECK_THROWS_AS(io::parse_manifest(no_experiments), ValidationError);

  auto bad_hyper = two_graph_manifest();
  bad_hyper["hyperparameters"] = {{"learning_rate", 0.1}};
  CHECK_THROWS_AS(io::parse_manifest(bad_hyper), ValidationError);
}

TEST_CASE("manifest files: parse errors and missing files") {
  testutil::TempDir dir("manifest");
  io::write_text_file(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(io::load_manifest(dir / "bad.json"), FormatError);
  CHECK_THROWS_AS(io::load_manifest(dir / "missing.json"), DataError);
  io::write_text_file(dir / "ok.json", two_graph_manifest().dump());
  const auto m = io::load_manifest(dir / "ok.json");
  CHECK(m.graph_path("A") == dir.path() / "a.nfv");
}

TEST_CASE("settings layer defaults, global hyperparameters and experiment overrides") {
  auto doc = two_graph_manifest();
  doc["hyperparameters"] = {{"lr", 0.05}, {"max_epochs", 30}, {"seed", 5}};
  doc["experiments"][0]["hyperparameters"] = {{"max_epochs", 7}, {"hidden_dims", {8, 6, 4, 2}}};
  const auto m = io::parse_manifest(doc);
  const auto s = m.settings_for(m.experiments[0]);
  CHECK(s.k == 40);
  CHECK(s.train.lr == 0.05);
  CHECK(s.train.max_epochs == 7);
  CHECK(s.train.momentum == 0.9);
  CHECK(s.train.weight_decay == 5e-4);
  CHECK(s.train.seed == 5);
  CHECK(s.model.seed == 5);
  CHECK(s.model.hidden_dims == std::array<std::size_t, 4>{8, 6, 4, 2});
  CHECK(s.model.dropout_p == 0.5);
}

TEST_CASE("run settings reject malformed overrides") {
  io::RunSettings s;
  CHECK_THROWS_AS(s.apply(json{{"hidden_dims", {1, 2, 3}}}), ValidationError);
  CHECK_THROWS_AS(s.apply(json{{"lr", "fast"}}), ValidationError);
  CHECK_THROWS_AS(s.apply(json{{"bogus", 1}}), ValidationError);
  s.apply(json{{"k", 0}});
  CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("run settings serialize every resolved value") {
  io::RunSettings s;
  const auto j = s.to_json();
  CHECK(j.at("k") == 40);
  CHECK(j.at("lr") == 0.01);
  CHECK(j.at("momentum") == 0.9);
  CHECK(j.at("weight_decay") == 5e-4);
  CHECK(j.at("max_epochs") == 500);
  CHECK(j.at("dropout") == 0.5);
  CHECK(j.at("graphs_per_batch") == 1);
  CHECK(j.at("hidden_dims") == json({512, 256, 128, 64}));
}

TEST_CASE("summary table mirrors the per-experiment and per-category layout") {
  io::ExperimentOutcome ok;
  ok.name = "Exp1";
  ok.ok = true;
  ok.val_f = 0.842;
  ok.best_epoch = 3;
  ok.test = eval::precision_recall_f({8, 2, 1, 9});
  ok.test_categories.rows.push_back({"BSL", ok.test});
  ok.test_categories.overall = ok.test.f_measure;
  io::ExperimentOutcome failed;
  failed.name = "Exp2";
  failed.error = "cannot open 'x'";

  const std::vector<io::ExperimentOutcome> outcomes{ok, failed};
  const std::string table = io::format_summary(outcomes, &ok.test_categories);
  CHECK(table.find("F-Measure validation") != std::string::npos);
  CHECK(table.find("F-Measure test") != std::string::npos);
  CHECK(table.find("0.8420") != std::string::npos);
  CHECK(table.find("Exp2") != std::string::npos);
  CHECK(table.find("BSL") != std::string::npos);
  CHECK(table.find("All") != std::string::npos);

  const auto j = io::summary_json(outcomes, &ok.test_categories);
  CHECK(j.at("experiments").size() == 2);
  CHECK(j.at("experiments")[1].at("ok") == false);

  const std::vector<io::ExperimentOutcome> single{ok};
  const auto one = io::summary_json(single, nullptr);
  CHECK(one.at("experiments").size() == 1);
}

TEST_CASE("report documents carry no wall-clock time") {
  train::TrainReport r;
  r.wall_seconds = 12.5;
  r.best_epoch = 2;
  r.epochs.push_back({1, 0.7, std::nullopt});
  r.epochs.push_back({2, 0.6, eval::precision_recall_f({1, 1, 1, 1})});
  const auto j = io::train_report_json(r);
  CHECK(j.dump().find("wall") == std::string::npos);
  CHECK(j.at("best_epoch") == 2);
  CHECK(io::epoch_json(r.epochs[0]).contains("train_loss"));
  CHECK(!io::epoch_json(r.epochs[0]).contains("val_f_measure"));
  CHECK(io::epoch_json(r.epochs[1]).contains("val_f_measure"));
}
