#include <cmath>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "mosgnn/error.hpp"
#include "mosgnn/graph_construct.hpp"
#include "mosgnn/io/formats.hpp"
#include "mosgnn/model.hpp"
#include "mosgnn/synthetic.hpp"
#include "mosgnn/trainer.hpp"

using namespace mosgnn;
using testutil::random_matrix;

namespace {

std::vector<Parameter> scalar_param(double w, double g) {
  std::vector<Parameter> ps;
  ps.emplace_back("w", DenseMatrix{{w}});
  ps[0].grad(0, 0) = g;
  return ps;
}

train::TrainConfig sgd(double lr, double momentum, double wd) {
  train::TrainConfig c;
  c.lr = lr;
  c.momentum = momentum;
  c.weight_decay = wd;
  return c;
}

model::ModelConfig small_model(std::size_t in_dim, std::uint64_t seed = 0) {
  model::ModelConfig c;
  c.in_dim = in_dim;
  c.hidden_dims = {32, 16, 8, 8};
  c.seed = seed;
  return c;
}

std::vector<GraphBundle> toy_graphs(std::size_t count, std::size_t nodes = 60, std::size_t dim = 40) {
  synthetic::ClusterSpec spec;
  spec.nodes = nodes;
  spec.dim = dim;
  spec.center_offset = 0.5;
  std::vector<GraphBundle> gs;
  for (std::size_t g = 1; g <= count; ++g)
    gs.push_back(graph::build_graph(synthetic::make_clusters(spec, g), 8, "T" + std::to_string(g)));
  return gs;
}

std::vector<train::PreparedGraph> prepare_all(const std::vector<GraphBundle>& gs, std::size_t from,
                                              std::size_t to) {
  std::vector<train::PreparedGraph> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(train::prepare(gs[i]));
  return out;
}

}  // namespace

TEST_CASE("sgd without momentum or decay is plain gradient descent") {
  auto ps = scalar_param(2.0, 0.5);
  train::SgdMomentum opt(sgd(0.1, 0.0, 0.0));
  opt.step(ps);
  CHECK(ps[0].value(0, 0) == 2.0 - 0.1 * 0.5);
}

TEST_CASE("weight decay alone pulls the weight toward zero") {
  auto ps = scalar_param(1.0, 0.0);
  train::SgdMomentum opt(sgd(0.1, 0.0, 0.1));
  opt.step(ps);
  CHECK(ps[0].value(0, 0) == doctest::Approx(0.99).epsilon(1e-15));
}

TEST_CASE("momentum accumulates velocity") {
  auto ps = scalar_param(0.0, 1.0);
  train::SgdMomentum opt(sgd(0.01, 0.9, 0.0));
  opt.step(ps);
  CHECK(opt.velocity()[0](0, 0) == 1.0);
  opt.step(ps);
  CHECK(opt.velocity()[0](0, 0) == doctest::Approx(1.9).epsilon(1e-15));
  CHECK(ps[0].value(0, 0) == doctest::Approx(-0.01 - 0.019).epsilon(1e-15));
}

TEST_CASE("zero gradients without decay leave parameters unchanged") {
  std::vector<Parameter> ps;
  ps.emplace_back("a", random_matrix(3, 4, 1));
  const auto before = ps[0].value;
  train::SgdMomentum opt(sgd(0.01, 0.9, 0.0));
  opt.step(ps);
  opt.step(ps);
  CHECK(ps[0].value == before);
}

TEST_CASE("weight decay with zero gradients shrinks every nonzero weight") {
  std::vector<Parameter> ps;
  ps.emplace_back("a", random_matrix(5, 5, 2));
  const auto before = ps[0].value;
  train::SgdMomentum opt(sgd(0.01, 0.9, 5e-4));
  opt.step(ps);
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(std::abs(ps[0].value.values()[i]) < std::abs(before.values()[i]));
}

TEST_CASE("a non-finite gradient names the parameter") {
  auto ps = scalar_param(1.0, std::numeric_limits<double>::quiet_NaN());
  ps[0].name = "lin2.b";
  train::SgdMomentum opt(sgd(0.01, 0.9, 0.0));
  try {
    opt.step(ps);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("lin2.b") != std::string::npos);
  }
  CHECK(ps[0].value(0, 0) == 1.0);
}

TEST_CASE("train config validation") {
  CHECK_NOTHROW(train::TrainConfig{}.validate());
  CHECK_THROWS_AS(sgd(-0.1, 0.9, 0).validate(), ParameterError);
  CHECK_THROWS_AS(sgd(0.1, 1.0, 0).validate(), ParameterError);
  CHECK_THROWS_AS(sgd(0.1, 0.9, -1).validate(), ParameterError);
  train::TrainConfig c;
  c.max_epochs = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("graphs without labels are rejected when prepared for training") {
  auto fs = testutil::random_features(5, 3, 3);
  std::fill(fs.labels.begin(), fs.labels.end(), kUnlabeled);
  const auto g = graph::build_graph(fs, 2, "U");
  CHECK_THROWS_AS(train::prepare(g), DataError);
  CHECK_NOTHROW(train::prepare(g, false));
}

TEST_CASE("zero learning rate keeps parameters and still reports the loss") {
  const auto gs = toy_graphs(2);
  const auto prepared = prepare_all(gs, 0, 2);
  model::GcnModel m(small_model(40));
  const auto before = m.params();
  train::TrainConfig c;
  c.lr = 0.0;
  train::Trainer t(m, c);
  const double loss = t.train_epoch(prepared, 1);
  CHECK(std::isfinite(loss));
  CHECK(loss > 0.0);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(m.params()[i].value == before[i].value);
}

TEST_CASE("training loss decreases over the first ten epochs on the toy problem") {
  // Reference synthetic problem (930-d clusters, 300 nodes, k=40) with the
  // default model and optimizer at seed 0. Dropout makes the per-epoch loss
  // noisy, so strict monotonicity is a property of this seed, not a guarantee.
  std::vector<GraphBundle> gs;
  for (std::uint64_t g = 1; g <= 2; ++g)
    gs.push_back(graph::build_graph(synthetic::make_clusters({}, g), graph::kDefaultK));
  const auto prepared = prepare_all(gs, 0, 2);
  model::GcnModel m(model::ModelConfig{});
  train::Trainer t(m, train::TrainConfig{});
  std::vector<double> losses;
  for (std::size_t e = 1; e <= 10; ++e) losses.push_back(t.train_epoch(prepared, e));
  for (std::size_t e = 1; e < losses.size(); ++e) {
    CAPTURE(e);
    CHECK(losses[e] < losses[e - 1]);
  }
}

TEST_CASE("identical seeds give bit-identical training runs") {
  const auto gs = toy_graphs(3);
  const auto tr = prepare_all(gs, 0, 2);
  const auto va = prepare_all(gs, 2, 3);
  auto run = [&] {
    model::GcnModel m(small_model(40, 5));
    train::TrainConfig c;
    c.max_epochs = 8;
    c.seed = 11;
    train::Trainer t(m, c);
    auto fit = t.fit(tr, va);
    return std::pair{fit, m.params()};
  };
  const auto [a, pa] = run();
  const auto [b, pb] = run();
  REQUIRE(a.report.epochs.size() == b.report.epochs.size());
  for (std::size_t i = 0; i < a.report.epochs.size(); ++i) {
    CHECK(a.report.epochs[i].train_loss == b.report.epochs[i].train_loss);
    CHECK(a.report.epochs[i].validation->f_measure == b.report.epochs[i].validation->f_measure);
  }
  CHECK(a.report.best_epoch == b.report.best_epoch);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].value == pb[i].value);
    CHECK(a.best_params[i].value == b.best_params[i].value);
  }
}

TEST_CASE("fit bookkeeping") {
  const auto gs = toy_graphs(3, 30, 10);
  const auto tr = prepare_all(gs, 0, 2);
  const auto va = prepare_all(gs, 2, 3);

  model::GcnModel one(small_model(10));
  train::TrainConfig c;
  c.max_epochs = 1;
  CHECK(train::Trainer(one, c).fit(tr, va).report.best_epoch == 1);

  model::GcnModel m(small_model(10));
  c.max_epochs = 10;
  c.eval_every = 3;
  train::Trainer t(m, c);
  std::size_t callbacks = 0;
  t.on_epoch = [&](const train::EpochRecord&) { ++callbacks; };
  const auto fit = t.fit(tr, va);
  CHECK(callbacks == 10);
  CHECK(fit.report.epochs.size() == 10);
  // Epochs 3, 6, 9 and the final epoch 10.
  CHECK(fit.report.evaluation_count() == 4);
  CHECK(fit.report.epochs[2].validation.has_value());
  CHECK(!fit.report.epochs[3].validation.has_value());
  CHECK(fit.report.epochs[9].validation.has_value());
  double best = -1;
  std::size_t best_epoch = 0;
  for (const auto& r : fit.report.epochs)
    if (r.validation && r.validation->f_measure > best) {
      best = r.validation->f_measure;
      best_epoch = r.epoch;
    }
  CHECK(fit.report.best_epoch == best_epoch);
  CHECK(fit.report.best_val_f == best);
}

TEST_CASE("the best parameters reproduce the best validation score") {
  const auto gs = toy_graphs(3, 40, 10);
  const auto tr = prepare_all(gs, 0, 2);
  const auto va = prepare_all(gs, 2, 3);
  model::GcnModel m(small_model(10));
  train::TrainConfig c;
  c.max_epochs = 12;
  train::Trainer t(m, c);
  const auto fit = t.fit(tr, va);
  const model::GcnModel best(m.config(), fit.best_params);
  CHECK(train::evaluate(best, va).f_measure == fit.report.best_val_f);
}

TEST_CASE("validation runs in eval mode and is repeatable") {
  const auto gs = toy_graphs(2, 30, 10);
  const auto va = prepare_all(gs, 0, 1);
  model::GcnModel m(small_model(10));
  const auto a = train::evaluate(m, va);
  const auto b = train::evaluate(m, va);
  CHECK(a.counts == b.counts);
  CHECK(a.f_measure == b.f_measure);
}

TEST_CASE("overlapping train and validation graphs are rejected") {
  const auto gs = toy_graphs(2, 20, 5);
  const auto tr = prepare_all(gs, 0, 2);
  const auto va = prepare_all(gs, 1, 2);
  std::vector<train::PreparedGraph> overlap{tr[0], tr[1]};
  std::vector<train::PreparedGraph> val{tr[1]};
  model::GcnModel m(small_model(5));
  train::Trainer t(m, train::TrainConfig{});
  CHECK_THROWS_AS(t.fit(overlap, val), ValidationError);
  CHECK_THROWS_AS(t.fit(tr, std::vector<train::PreparedGraph>{}), DataError);
  CHECK_THROWS_AS(t.train_epoch(std::vector<train::PreparedGraph>{}, 1), DataError);
  (void)va;
}

TEST_CASE("multi-graph steps train on the block-diagonal batch") {
  const auto gs = toy_graphs(3, 30, 10);
  const auto tr = prepare_all(gs, 0, 3);
  model::GcnModel m(small_model(10));
  train::TrainConfig c;
  c.graphs_per_batch = 2;
  train::Trainer t(m, c);
  const auto before = m.params();
  const double loss = t.train_epoch(tr, 1);
  CHECK(std::isfinite(loss));
  CHECK(m.params()[0].value != before[0].value);
}

TEST_CASE("resuming from a checkpoint reproduces an uninterrupted run") {
  const auto gs = toy_graphs(3, 40, 12);
  const auto tr = prepare_all(gs, 0, 2);
  const auto va = prepare_all(gs, 2, 3);
  const auto cfg = small_model(12, 4);
  train::TrainConfig c;
  c.max_epochs = 20;
  c.seed = 9;

  model::GcnModel straight(cfg);
  train::Trainer(straight, c).fit(tr, va);

  model::GcnModel first(cfg);
  train::TrainConfig half = c;
  half.max_epochs = 10;
  train::Trainer t1(first, half);
  t1.fit(tr, va);
  const auto bytes = io::encode_checkpoint(
      io::Checkpoint{cfg, first.params(), t1.optimizer().velocity(), c.seed, 10});

  auto ckpt = io::decode_checkpoint(bytes);
  model::GcnModel resumed(ckpt.config, ckpt.params);
  train::Trainer t2(resumed, c);
  t2.optimizer().velocity() = ckpt.velocity;
  const auto fit = t2.fit(tr, va, ckpt.epoch + 1);
  CHECK(fit.report.epochs.front().epoch == 11);
  for (std::size_t i = 0; i < straight.params().size(); ++i)
    CHECK(resumed.params()[i].value == straight.params()[i].value);
}
