#include "mosgnn/io/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "mosgnn/error.hpp"

namespace mosgnn::io {

using nlohmann::json;

namespace {

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ValidationError("hyperparameter '" + key + "' has the wrong type");
  }
}

std::vector<std::string> name_list(const json& e, const char* key, const std::string& exp) {
  if (!e.contains(key)) throw ValidationError("experiment '" + exp + "' lacks '" + key + "'");
  const auto& v = e.at(key);
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_string()) throw ValidationError("experiment '" + exp + "': '" + key + "' must list graph names");
      out.push_back(x.get<std::string>());
    }
  } else {
    throw ValidationError("experiment '" + exp + "': '" + key + "' must be a name or a list");
  }
  if (out.empty()) throw ValidationError("experiment '" + exp + "': '" + key + "' is empty");
  return out;
}

}  // namespace

void RunSettings::apply(const json& overrides) {
  if (overrides.is_null()) return;
  if (!overrides.is_object()) throw ValidationError("hyperparameters must be a JSON object");
  for (const auto& [key, v] : overrides.items()) {
    if (key == "k") k = get_as<std::size_t>(v, key);
    else if (key == "lr") train.lr = get_as<double>(v, key);
    else if (key == "momentum") train.momentum = get_as<double>(v, key);
    else if (key == "weight_decay") train.weight_decay = get_as<double>(v, key);
    else if (key == "max_epochs") train.max_epochs = get_as<std::size_t>(v, key);
    else if (key == "graphs_per_batch") train.graphs_per_batch = get_as<std::size_t>(v, key);
    else if (key == "eval_every") train.eval_every = get_as<std::size_t>(v, key);
    else if (key == "dropout") model.dropout_p = get_as<double>(v, key);
    else if (key == "pairnorm_scale") model.pairnorm_scale = get_as<double>(v, key);
    else if (key == "hidden_dims") {
      const auto dims = get_as<std::vector<std::size_t>>(v, key);
      if (dims.size() != model.hidden_dims.size()) {
        throw ValidationError("hidden_dims must list exactly 4 widths");
      }
      std::copy(dims.begin(), dims.end(), model.hidden_dims.begin());
    } else if (key == "seed") {
      model.seed = train.seed = get_as<std::uint64_t>(v, key);
    } else {
      throw ValidationError("unknown hyperparameter '" + key + "'");
    }
  }
}

void RunSettings::validate() const {
  if (k < 1) throw ParameterError("k must be >= 1");
  model.validate();
  train.validate();
}

json RunSettings::to_json() const {
  return json{{"k", k},
              {"lr", train.lr},
              {"momentum", train.momentum},
              {"weight_decay", train.weight_decay},
              {"max_epochs", train.max_epochs},
              {"graphs_per_batch", train.graphs_per_batch},
              {"eval_every", train.eval_every},
              {"dropout", model.dropout_p},
              {"pairnorm_scale", model.pairnorm_scale},
              {"hidden_dims", model.hidden_dims},
              {"in_dim", model.in_dim},
              {"seed", train.seed}};
}

const std::filesystem::path& ExperimentManifest::graph_path(const std::string& name) const {
  for (const auto& [n, p] : graphs) {
    if (n == name) return p;
  }
  throw ValidationError("graph '" + name + "' is not declared in the manifest");
}

RunSettings ExperimentManifest::settings_for(const ExperimentSpec& e, RunSettings base) const {
  base.apply(hyperparameters);
  base.apply(e.overrides);
  return base;
}

ExperimentManifest parse_manifest(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ValidationError("manifest must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "graphs" && key != "experiments" && key != "hyperparameters") {
      throw ValidationError("unknown manifest key '" + key + "'");
    }
  }
  ExperimentManifest m;
  if (!doc.contains("graphs") || !doc.at("graphs").is_object()) {
    throw ValidationError("manifest needs a 'graphs' object mapping names to files");
  }
  // nlohmann::json objects iterate in key order, which is the declaration
  // order for the G1..G4 naming used here.
  for (const auto& [name, path] : doc.at("graphs").items()) {
    if (!path.is_string()) throw ValidationError("graph '" + name + "' path must be a string");
    std::filesystem::path p = path.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    m.graphs.emplace_back(name, p);
  }
  if (doc.contains("hyperparameters")) m.hyperparameters = doc.at("hyperparameters");

  if (!doc.contains("experiments") || !doc.at("experiments").is_array() ||
      doc.at("experiments").empty()) {
    throw ValidationError("manifest needs a nonempty 'experiments' array");
  }
  std::set<std::string> seen_names;
  for (const auto& e : doc.at("experiments")) {
    if (!e.is_object() || !e.contains("name") || !e.at("name").is_string()) {
      throw ValidationError("each experiment needs a string 'name'");
    }
    for (const auto& [key, _] : e.items()) {
      if (key != "name" && key != "train" && key != "val" && key != "test" &&
          key != "hyperparameters") {
        throw ValidationError("unknown experiment key '" + key + "'");
      }
    }
    ExperimentSpec spec;
    spec.name = e.at("name").get<std::string>();
    if (!seen_names.insert(spec.name).second) {
      throw ValidationError("duplicate experiment name '" + spec.name + "'");
    }
    spec.train = name_list(e, "train", spec.name);
    spec.val = name_list(e, "val", spec.name);
    spec.test = name_list(e, "test", spec.name);
    if (e.contains("hyperparameters")) spec.overrides = e.at("hyperparameters");

    const std::pair<const char*, const std::vector<std::string>*> splits[] = {
        {"train", &spec.train}, {"val", &spec.val}, {"test", &spec.test}};
    for (const auto& [split, names] : splits) {
      for (const auto& n : *names) (void)m.graph_path(n);
    }
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a + 1; b < 3; ++b) {
        for (const auto& n : *splits[a].second) {
          if (std::find(splits[b].second->begin(), splits[b].second->end(), n) !=
              splits[b].second->end()) {
            throw ValidationError("experiment '" + spec.name + "': graph '" + n + "' is in both " +
                                  splits[a].first + " and " + splits[b].first);
          }
        }
      }
    }
    // Settings must parse even before any data is loaded.
    m.experiments.push_back(std::move(spec));
    (void)m.settings_for(m.experiments.back());
  }
  return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("manifest '" + path.string() + "': " + e.what());
  }
  return parse_manifest(doc, path.parent_path());
}

json default_manifest_json() {
  return json::parse(R"({
  "graphs": {"G1": "G1.nfv", "G2": "G2.nfv", "G3": "G3.nfv", "G4": "G4.nfv"},
  "experiments": [
    {"name": "Exp1", "train": ["G2", "G3"], "val": ["G1"], "test": ["G4"]},
    {"name": "Exp2", "train": ["G1", "G3"], "val": ["G4"], "test": ["G2"]},
    {"name": "Exp3", "train": ["G2", "G3"], "val": ["G4"], "test": ["G1"]},
    {"name": "Exp4", "train": ["G1", "G2"], "val": ["G4"], "test": ["G3"]}
  ]
})");
}

}  // namespace mosgnn::io
