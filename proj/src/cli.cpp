#include "mosgnn/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "mosgnn/error.hpp"
#include "mosgnn/graph_construct.hpp"
#include "mosgnn/io/binary.hpp"
#include "mosgnn/io/formats.hpp"
#include "mosgnn/io/manifest.hpp"
#include "mosgnn/io/report.hpp"
#include "mosgnn/kernels/kernels.hpp"
#include "mosgnn/metrics.hpp"
#include "mosgnn/model.hpp"
#include "mosgnn/synthetic.hpp"
#include "mosgnn/trainer.hpp"

namespace mosgnn::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Usage: return kUsage;
    case ErrorKind::Data: return kData;
    case ErrorKind::Numeric: return kNumeric;
  }
  return kData;
}

/// Hyperparameter flags shared by train and run-experiments. Only flags the
/// user actually passed are applied, on top of file/default settings.
struct OverrideFlags {
  std::optional<std::size_t> k;
  std::optional<double> lr, momentum, weight_decay, dropout, pairnorm_scale;
  std::optional<std::size_t> epochs, eval_every, graphs_per_batch;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> hidden;

  void add_to(CLI::App* app, bool with_k = true) {
    if (with_k) app->add_option("--k", k, "k-NN neighbor count (default 40)");
    app->add_option("--lr", lr, "learning rate (default 0.01)");
    app->add_option("--momentum", momentum, "SGD momentum (default 0.9)");
    app->add_option("--weight-decay", weight_decay, "L2 weight decay (default 5e-4)");
    app->add_option("--epochs", epochs, "maximum epochs (default 500)");
    app->add_option("--dropout", dropout, "dropout probability (default 0.5)");
    app->add_option("--pairnorm-scale", pairnorm_scale, "PairNorm scale (default 1)");
    app->add_option("--hidden", hidden, "four hidden widths (default 512 256 128 64)")
        ->expected(4);
    app->add_option("--eval-every", eval_every, "epochs between validations (default 1)");
    app->add_option("--graphs-per-batch", graphs_per_batch, "graphs per SGD step (default 1)");
    app->add_option("--seed", seed, "seed for initialization, shuffling and dropout");
  }

  json as_json() const {
    json j = json::object();
    if (k) j["k"] = *k;
    if (lr) j["lr"] = *lr;
    if (momentum) j["momentum"] = *momentum;
    if (weight_decay) j["weight_decay"] = *weight_decay;
    if (epochs) j["max_epochs"] = *epochs;
    if (dropout) j["dropout"] = *dropout;
    if (pairnorm_scale) j["pairnorm_scale"] = *pairnorm_scale;
    if (!hidden.empty()) j["hidden_dims"] = hidden;
    if (eval_every) j["eval_every"] = *eval_every;
    if (graphs_per_batch) j["graphs_per_batch"] = *graphs_per_batch;
    if (seed) j["seed"] = *seed;
    return j;
  }
};

void log_config(std::ostream& err, const std::string& command, const json& cfg) {
  err << "[" << command << "] config " << cfg.dump() << " kernels=" << kernels::active().name
      << '\n';
}

void log_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- build-graph -------------------------------------------------------------

int cmd_build_graph(const fs::path& features, std::size_t k, const fs::path& out_path,
                    std::ostream& out, std::ostream& err) {
  log_config(err, "build-graph",
             json{{"features", features.string()}, {"k", k}, {"out", out_path.string()}});
  std::vector<std::string> warnings;
  auto bundle =
      graph::build_graph(io::read_features(features), k, features.stem().string(), &warnings);
  log_warnings(err, warnings);
  const std::size_t k_used = std::min<std::size_t>(k, bundle.num_nodes() - 1);
  io::write_graph(out_path, bundle, k_used);
  out << "nodes=" << bundle.num_nodes() << " edges=" << bundle.adjacency.num_edges()
      << " k=" << k_used << '\n';
  return kOk;
}

// --- train -------------------------------------------------------------------

struct TrainArgs {
  std::vector<fs::path> train, val;
  fs::path out, report, log, last, resume;
};

std::vector<GraphBundle> load_graphs(const std::vector<fs::path>& paths, std::size_t k,
                                     std::ostream& err) {
  std::vector<GraphBundle> graphs;
  for (const auto& p : paths) {
    std::vector<std::string> warnings;
    graphs.push_back(io::load_graph_or_features(p, k, &warnings).graph);
    log_warnings(err, warnings);
  }
  return graphs;
}

std::size_t common_width(const std::vector<GraphBundle>& graphs) {
  const std::size_t width = graphs.front().nodes.feature_dim();
  for (const auto& g : graphs) {
    if (g.nodes.feature_dim() != width) {
      throw DataError("graph '" + g.name + "' has feature width " +
                      std::to_string(g.nodes.feature_dim()) + ", expected " +
                      std::to_string(width));
    }
  }
  return width;
}

int cmd_train(const TrainArgs& a, const OverrideFlags& flags, std::ostream& out,
              std::ostream& err) {
  io::RunSettings settings;
  settings.apply(flags.as_json());

  std::optional<io::Checkpoint> resume;
  if (!a.resume.empty()) {
    resume = io::load_checkpoint(a.resume);
    settings.model = resume->config;
    settings.train.seed = resume->train_seed;
  }

  auto train_graphs = load_graphs(a.train, settings.k, err);
  auto val_graphs = load_graphs(a.val, settings.k, err);
  std::vector<GraphBundle> all = train_graphs;
  all.insert(all.end(), val_graphs.begin(), val_graphs.end());
  const std::size_t width = common_width(all);
  if (resume && resume->config.in_dim != width) {
    throw IncompatibleError("checkpoint expects feature width " +
                            std::to_string(resume->config.in_dim) + ", graphs have " +
                            std::to_string(width));
  }
  settings.model.in_dim = width;
  settings.validate();
  log_config(err, "train", settings.to_json());

  model::GcnModel net = resume ? model::GcnModel(resume->config, resume->params)
                               : model::GcnModel(settings.model);
  train::Trainer trainer(net, settings.train);
  if (resume) trainer.optimizer().velocity() = resume->velocity;

  std::vector<train::PreparedGraph> train_set, val_set;
  for (const auto& g : train_graphs) train_set.push_back(train::prepare(g));
  for (const auto& g : val_graphs) val_set.push_back(train::prepare(g));

  std::ostringstream log_lines;
  trainer.on_epoch = [&](const train::EpochRecord& r) {
    log_lines << io::epoch_json(r).dump() << '\n';
    err << io::epoch_json(r).dump() << '\n';
  };
  const std::size_t first_epoch = resume ? resume->epoch + 1 : 1;
  auto result = trainer.fit(train_set, val_set, first_epoch);
  err << "[train] wall_seconds=" << result.report.wall_seconds << '\n';

  io::Checkpoint best{settings.model, result.best_params, {}, settings.train.seed,
                      result.report.best_epoch};
  io::save_checkpoint(a.out, best);
  if (!a.last.empty()) {
    io::save_checkpoint(a.last, io::Checkpoint{settings.model, net.params(),
                                               trainer.optimizer().velocity(),
                                               settings.train.seed, settings.train.max_epochs});
  }
  if (!a.log.empty()) io::write_text_file(a.log, log_lines.str());
  if (!a.report.empty()) {
    json doc{{"config", settings.to_json()}, {"train_report", io::train_report_json(result.report)}};
    io::write_text_file(a.report, doc.dump(2) + "\n");
  }
  out << "best_epoch=" << result.report.best_epoch
      << " best_val_f=" << format_double(result.report.best_val_f) << '\n';
  return kOk;
}

// --- eval / predict ----------------------------------------------------------

model::GcnModel model_from_checkpoint(const fs::path& path) {
  auto ckpt = io::load_checkpoint(path);
  return model::GcnModel(ckpt.config, std::move(ckpt.params));
}

void require_width(const model::GcnModel& net, const GraphBundle& g) {
  if (g.nodes.feature_dim() != net.config().in_dim) {
    throw IncompatibleError("checkpoint expects feature width " +
                            std::to_string(net.config().in_dim) + ", graph '" + g.name +
                            "' has " + std::to_string(g.nodes.feature_dim()));
  }
}

int cmd_eval(const fs::path& ckpt, const std::vector<fs::path>& graphs, std::size_t k,
             const fs::path& out_path, std::ostream& out, std::ostream& err) {
  log_config(err, "eval", json{{"checkpoint", ckpt.string()}, {"k", k}});
  const auto net = model_from_checkpoint(ckpt);
  std::vector<int> pred, gt;
  std::vector<std::uint8_t> mask;
  std::vector<std::string> cats;
  for (const auto& g : load_graphs(graphs, k, err)) {
    require_width(net, g);
    const auto p = train::prepare(g, false);
    const auto pr = net.predict(p.norm_adj, g.nodes.features);
    pred.insert(pred.end(), pr.begin(), pr.end());
    gt.insert(gt.end(), p.targets.begin(), p.targets.end());
    mask.insert(mask.end(), p.mask.begin(), p.mask.end());
    for (const auto& prov : g.nodes.provenance) cats.push_back(prov.category);
  }
  const auto metrics = eval::precision_recall_f(eval::confusion_counts(pred, gt, mask));
  const auto cat = eval::category_report(pred, gt, mask, cats);
  out << "precision=" << format_double(metrics.precision)
      << " recall=" << format_double(metrics.recall)
      << " f_measure=" << format_double(metrics.f_measure) << '\n'
      << io::format_category_table(cat);
  if (!out_path.empty()) {
    json doc{{"metrics", io::metrics_json(metrics)}, {"categories", io::category_report_json(cat)}};
    io::write_text_file(out_path, doc.dump(2) + "\n");
  }
  return kOk;
}

int cmd_predict(const fs::path& ckpt, const fs::path& graph_path, std::size_t k,
                const fs::path& out_path, std::ostream& out, std::ostream& err) {
  log_config(err, "predict",
             json{{"checkpoint", ckpt.string()}, {"graph", graph_path.string()}, {"k", k}});
  const auto net = model_from_checkpoint(ckpt);
  std::vector<std::string> warnings;
  const auto gf = io::load_graph_or_features(graph_path, k, &warnings);
  log_warnings(err, warnings);
  require_width(net, gf.graph);
  const auto p = train::prepare(gf.graph, false);
  const auto logp = net.infer(p.norm_adj, gf.graph.nodes.features);
  const auto cls = model::argmax_rows(logp);

  std::ostringstream csv;
  csv << "category,video,frame,instance,class";
  for (std::size_t c = 0; c < logp.cols(); ++c) csv << ",log_prob_" << c;
  csv << '\n';
  std::size_t moving = 0;
  for (std::size_t i = 0; i < logp.rows(); ++i) {
    const auto& prov = gf.graph.nodes.provenance[i];
    csv << csv_field(prov.category) << ',' << csv_field(prov.video) << ',' << prov.frame << ','
        << prov.instance << ',' << cls[i];
    for (double v : logp.row(i)) csv << ',' << format_double(v);
    csv << '\n';
    moving += cls[i] == 1;
  }
  io::write_text_file(out_path, csv.str());
  out << "nodes=" << logp.rows() << " moving=" << moving << '\n';
  return kOk;
}

// --- run-experiments ---------------------------------------------------------

struct ExperimentArtifacts {
  io::ExperimentOutcome outcome;
  std::vector<int> pred, gt;
  std::vector<std::uint8_t> mask;
  std::vector<std::string> categories;
  int exit_code = kOk;
};

ExperimentArtifacts run_one(const io::ExperimentManifest& m, const io::ExperimentSpec& spec,
                            const json& cli_overrides, const fs::path& out_dir,
                            std::ostream& err, std::mutex& err_mutex) {
  ExperimentArtifacts art;
  art.outcome.name = spec.name;
  auto log = [&](const std::string& line) {
    std::lock_guard lock(err_mutex);
    err << line << '\n';
  };
  try {
    io::RunSettings settings = m.settings_for(spec);
    settings.apply(cli_overrides);

    auto load = [&](const std::vector<std::string>& names) {
      std::vector<GraphBundle> gs;
      for (const auto& n : names) {
        std::vector<std::string> warnings;
        auto g = io::load_graph_or_features(m.graph_path(n), settings.k, &warnings).graph;
        g.name = n;
        for (const auto& w : warnings) log("warning: " + spec.name + "/" + n + ": " + w);
        gs.push_back(std::move(g));
      }
      return gs;
    };
    const auto train_graphs = load(spec.train);
    const auto val_graphs = load(spec.val);
    const auto test_graphs = load(spec.test);
    std::vector<GraphBundle> all = train_graphs;
    all.insert(all.end(), val_graphs.begin(), val_graphs.end());
    all.insert(all.end(), test_graphs.begin(), test_graphs.end());
    settings.model.in_dim = common_width(all);
    settings.validate();
    log("[run-experiments] " + spec.name + " config " + settings.to_json().dump());

    std::vector<train::PreparedGraph> train_set, val_set, test_set;
    for (const auto& g : train_graphs) train_set.push_back(train::prepare(g));
    for (const auto& g : val_graphs) val_set.push_back(train::prepare(g));
    for (const auto& g : test_graphs) test_set.push_back(train::prepare(g));

    model::GcnModel net(settings.model);
    train::Trainer trainer(net, settings.train);
    std::ostringstream log_lines;
    trainer.on_epoch = [&](const train::EpochRecord& r) {
      log_lines << io::epoch_json(r).dump() << '\n';
    };
    auto fit = trainer.fit(train_set, val_set);
    log("[run-experiments] " + spec.name + " best_epoch=" + std::to_string(fit.report.best_epoch) +
        " best_val_f=" + format_double(fit.report.best_val_f) +
        " wall_seconds=" + format_double(fit.report.wall_seconds));

    const model::GcnModel best(settings.model, fit.best_params);
    for (const auto& pg : test_set) {
      const auto pr = best.predict(pg.norm_adj, pg.graph->nodes.features);
      art.pred.insert(art.pred.end(), pr.begin(), pr.end());
      art.gt.insert(art.gt.end(), pg.targets.begin(), pg.targets.end());
      art.mask.insert(art.mask.end(), pg.mask.begin(), pg.mask.end());
      for (const auto& prov : pg.graph->nodes.provenance) art.categories.push_back(prov.category);
    }
    auto& o = art.outcome;
    o.test = eval::precision_recall_f(eval::confusion_counts(art.pred, art.gt, art.mask));
    o.test_categories = eval::category_report(art.pred, art.gt, art.mask, art.categories);
    o.val_f = fit.report.best_val_f;
    o.best_epoch = fit.report.best_epoch;
    o.ok = true;

    const auto validation = train::evaluate(best, val_set);
    json report{{"experiment", spec.name},
                {"splits", {{"train", spec.train}, {"val", spec.val}, {"test", spec.test}}},
                {"config", settings.to_json()},
                {"train_report", io::train_report_json(fit.report)},
                {"validation", io::metrics_json(validation)},
                {"test", io::metrics_json(o.test)},
                {"test_categories", io::category_report_json(o.test_categories)}};
    io::write_text_file(out_dir / (spec.name + ".report.json"), report.dump(2) + "\n");
    io::write_text_file(out_dir / (spec.name + ".log.jsonl"), log_lines.str());
    io::write_text_file(out_dir / (spec.name + ".categories.txt"),
                        io::format_category_table(o.test_categories));
    io::save_checkpoint(out_dir / (spec.name + ".gimc"),
                        io::Checkpoint{settings.model, fit.best_params, {}, settings.train.seed,
                                       fit.report.best_epoch});
  } catch (const Error& e) {
    art.outcome.ok = false;
    art.outcome.error = e.what();
    art.exit_code = exit_code_for(e);
    log("error: experiment " + spec.name + ": " + e.what());
  } catch (const std::exception& e) {
    art.outcome.ok = false;
    art.outcome.error = e.what();
    art.exit_code = kData;
    log("error: experiment " + spec.name + ": " + e.what());
  }
  return art;
}

int cmd_run_experiments(const fs::path& manifest_path, const fs::path& out_dir,
                        const OverrideFlags& flags, std::size_t jobs, std::ostream& out,
                        std::ostream& err) {
  const auto manifest = io::load_manifest(manifest_path);
  const json overrides = flags.as_json();
  fs::create_directories(out_dir);
  {
    json cfg{{"manifest", manifest_path.string()},
             {"hyperparameters", manifest.hyperparameters},
             {"cli_overrides", overrides},
             {"experiments", json::array()}};
    for (const auto& e : manifest.experiments) {
      auto s = manifest.settings_for(e);
      s.apply(overrides);
      cfg["experiments"].push_back({{"name", e.name}, {"settings", s.to_json()}});
    }
    log_config(err, "run-experiments", cfg);
    io::write_text_file(out_dir / "config.json", cfg.dump(2) + "\n");
  }

  const std::size_t n = manifest.experiments.size();
  std::vector<ExperimentArtifacts> results(n);
  std::mutex err_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      results[i] = run_one(manifest, manifest.experiments[i], overrides, out_dir, err, err_mutex);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<io::ExperimentOutcome> outcomes;
  std::vector<int> pred, gt;
  std::vector<std::uint8_t> mask;
  std::vector<std::string> cats;
  int code = kOk;
  for (auto& r : results) {
    outcomes.push_back(r.outcome);
    if (!r.outcome.ok) {
      if (code == kOk) code = r.exit_code;
      continue;
    }
    pred.insert(pred.end(), r.pred.begin(), r.pred.end());
    gt.insert(gt.end(), r.gt.begin(), r.gt.end());
    mask.insert(mask.end(), r.mask.begin(), r.mask.end());
    cats.insert(cats.end(), r.categories.begin(), r.categories.end());
  }
  std::optional<eval::CategoryReport> pooled;
  if (!gt.empty()) pooled = eval::category_report(pred, gt, mask, cats);
  const auto* pooled_ptr = pooled ? &*pooled : nullptr;
  const std::string table = io::format_summary(outcomes, pooled_ptr);
  io::write_text_file(out_dir / "summary.txt", table);
  io::write_text_file(out_dir / "summary.json",
                      io::summary_json(outcomes, pooled_ptr).dump(2) + "\n");
  out << table;
  return code;
}

// --- make-synthetic ------------------------------------------------------------

int cmd_make_synthetic(const fs::path& out_dir, const synthetic::ClusterSpec& spec,
                       std::size_t graphs, const json& hyper, std::ostream& out,
                       std::ostream& err) {
  log_config(err, "make-synthetic",
             json{{"out", out_dir.string()}, {"graphs", graphs}, {"nodes", spec.nodes},
                  {"dim", spec.dim}, {"center_offset", spec.center_offset},
                  {"moving_fraction", spec.moving_fraction}, {"seed", spec.world_seed}});
  fs::create_directories(out_dir);
  for (std::size_t g = 1; g <= graphs; ++g) {
    io::write_features(out_dir / ("G" + std::to_string(g) + ".nfv"),
                       synthetic::make_clusters(spec, g));
  }
  if (graphs == 4) {
    json manifest = io::default_manifest_json();
    if (!hyper.empty()) manifest["hyperparameters"] = hyper;
    io::write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  }
  out << "wrote " << graphs << " feature files to " << out_dir.string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inductive GCN node classifier for moving/static object instances"};
  app.require_subcommand(1);
  app.name(args.empty() ? "mosgnn" : fs::path(args[0]).filename().string());
  std::string kernel_name;
  app.add_option("--kernels", kernel_name, "force kernel backend: scalar, avx2 or neon");

  auto* build = app.add_subcommand("build-graph", "build a k-NN graph file from node features");
  fs::path bg_features, bg_out;
  std::size_t bg_k = graph::kDefaultK;
  build->add_option("--features", bg_features, "input feature file")->required();
  build->add_option("--k", bg_k, "neighbors per node")->capture_default_str();
  build->add_option("--out", bg_out, "output graph file")->required();

  auto* train_cmd = app.add_subcommand("train", "train on graphs, select on validation graphs");
  TrainArgs ta;
  OverrideFlags train_flags;
  train_cmd->add_option("--train", ta.train, "training feature/graph files")->required();
  train_cmd->add_option("--val", ta.val, "validation feature/graph files")->required();
  train_cmd->add_option("--out", ta.out, "checkpoint of the best-validation parameters")
      ->required();
  train_cmd->add_option("--report", ta.report, "training report (JSON)");
  train_cmd->add_option("--log", ta.log, "per-epoch log (JSON lines)");
  train_cmd->add_option("--last", ta.last, "checkpoint of the final state, for --resume");
  train_cmd->add_option("--resume", ta.resume, "continue from a --last checkpoint");
  train_flags.add_to(train_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on labeled graphs");
  fs::path ev_ckpt, ev_out;
  std::vector<fs::path> ev_graphs;
  std::size_t ev_k = graph::kDefaultK;
  eval_cmd->add_option("--checkpoint", ev_ckpt)->required();
  eval_cmd->add_option("--graph", ev_graphs, "feature/graph files")->required();
  eval_cmd->add_option("--k", ev_k, "neighbors when building from features")->capture_default_str();
  eval_cmd->add_option("--out", ev_out, "metrics report (JSON)");

  auto* predict_cmd = app.add_subcommand("predict", "classify the nodes of an unseen graph");
  fs::path pr_ckpt, pr_graph, pr_out;
  std::size_t pr_k = graph::kDefaultK;
  predict_cmd->add_option("--checkpoint", pr_ckpt)->required();
  predict_cmd->add_option("--graph", pr_graph, "feature or graph file")->required();
  predict_cmd->add_option("--k", pr_k, "neighbors when building from features")
      ->capture_default_str();
  predict_cmd->add_option("--out", pr_out, "per-node predictions (CSV)")->required();

  auto* run_cmd = app.add_subcommand("run-experiments", "run every experiment in a manifest");
  fs::path re_manifest, re_out;
  std::size_t re_jobs = 1;
  OverrideFlags run_flags;
  run_cmd->add_option("--manifest", re_manifest)->required();
  run_cmd->add_option("--out", re_out, "output directory")->required();
  run_cmd->add_option("--jobs", re_jobs, "experiments to run concurrently")->capture_default_str();
  run_flags.add_to(run_cmd);

  auto* synth_cmd = app.add_subcommand("make-synthetic",
                                       "write Gaussian-cluster feature files G1..Gn + manifest");
  fs::path sy_out;
  synthetic::ClusterSpec sy_spec;
  std::size_t sy_graphs = 4;
  std::optional<std::size_t> sy_epochs;
  synth_cmd->add_option("--out", sy_out, "output directory")->required();
  synth_cmd->add_option("--graphs", sy_graphs)->capture_default_str();
  synth_cmd->add_option("--nodes", sy_spec.nodes)->capture_default_str();
  synth_cmd->add_option("--dim", sy_spec.dim)->capture_default_str();
  synth_cmd->add_option("--center-offset", sy_spec.center_offset)->capture_default_str();
  synth_cmd->add_option("--moving-fraction", sy_spec.moving_fraction)->capture_default_str();
  synth_cmd->add_option("--seed", sy_spec.world_seed)->capture_default_str();
  synth_cmd->add_option("--epochs", sy_epochs, "max_epochs written into the manifest");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!kernel_name.empty()) kernels::select_backend(kernels::parse_backend(kernel_name));
    if (*build) return cmd_build_graph(bg_features, bg_k, bg_out, out, err);
    if (*train_cmd) return cmd_train(ta, train_flags, out, err);
    if (*eval_cmd) return cmd_eval(ev_ckpt, ev_graphs, ev_k, ev_out, out, err);
    if (*predict_cmd) return cmd_predict(pr_ckpt, pr_graph, pr_k, pr_out, out, err);
    if (*run_cmd) return cmd_run_experiments(re_manifest, re_out, run_flags, re_jobs, out, err);
    if (*synth_cmd) {
      json hyper = json::object();
      if (sy_epochs) hyper["max_epochs"] = *sy_epochs;
      return cmd_make_synthetic(sy_out, sy_spec, sy_graphs, hyper, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace mosgnn::cli
