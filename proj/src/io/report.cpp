#include "mosgnn/io/report.hpp"

#include <cstdio>
#include <sstream>

namespace mosgnn::io {

using nlohmann::json;

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

}  // namespace

json metrics_json(const eval::MetricsResult& m) {
  return json{{"tp", m.counts.tp},
              {"fp", m.counts.fp},
              {"fn", m.counts.fn},
              {"tn", m.counts.tn},
              {"precision", m.precision},
              {"recall", m.recall},
              {"f_measure", m.f_measure}};
}

json category_report_json(const eval::CategoryReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = metrics_json(row.metrics);
    j["category"] = row.category;
    rows.push_back(std::move(j));
  }
  return json{{"categories", std::move(rows)}, {"overall_f_measure", r.overall}};
}

json epoch_json(const train::EpochRecord& r) {
  json j{{"epoch", r.epoch}, {"train_loss", r.train_loss}};
  if (r.validation) {
    j["val_precision"] = r.validation->precision;
    j["val_recall"] = r.validation->recall;
    j["val_f_measure"] = r.validation->f_measure;
  }
  return j;
}

json train_report_json(const train::TrainReport& r) {
  json epochs = json::array();
  for (const auto& e : r.epochs) epochs.push_back(epoch_json(e));
  return json{{"epochs", std::move(epochs)},
              {"evaluations", r.evaluation_count()},
              {"best_epoch", r.best_epoch},
              {"best_val_f_measure", r.best_val_f}};
}

std::string format_category_table(const eval::CategoryReport& r) {
  std::ostringstream os;
  os << pad("Category", 10, true) << pad("Precision", 11) << pad("Recall", 9) << pad("F", 9)
     << pad("TP", 8) << pad("FP", 8) << pad("FN", 8) << pad("TN", 8) << '\n';
  for (const auto& row : r.rows) {
    const auto& m = row.metrics;
    os << pad(row.category, 10, true) << pad(fixed4(m.precision), 11) << pad(fixed4(m.recall), 9)
       << pad(fixed4(m.f_measure), 9) << pad(std::to_string(m.counts.tp), 8)
       << pad(std::to_string(m.counts.fp), 8) << pad(std::to_string(m.counts.fn), 8)
       << pad(std::to_string(m.counts.tn), 8) << '\n';
  }
  os << pad("Overall", 10, true) << pad("", 11) << pad("", 9) << pad(fixed4(r.overall), 9) << '\n';
  return os.str();
}

std::string format_summary(const std::vector<ExperimentOutcome>& outcomes,
                           const eval::CategoryReport* pooled) {
  std::ostringstream os;
  os << "F-Measure by experiment\n";
  os << pad("", 22, true);
  for (const auto& o : outcomes) os << pad(o.name, 10);
  os << '\n' << pad("F-Measure validation", 22, true);
  for (const auto& o : outcomes) os << pad(o.ok ? fixed4(o.val_f) : "failed", 10);
  os << '\n' << pad("F-Measure test", 22, true);
  for (const auto& o : outcomes) os << pad(o.ok ? fixed4(o.test.f_measure) : "failed", 10);
  os << "\n\nTest F-Measure by category\n";

  os << pad("", 10, true);
  for (auto code : eval::kCategoryCodes) os << pad(std::string(code), 8);
  os << pad("Overall", 9) << '\n';
  auto row = [&](const std::string& label, const eval::CategoryReport& r) {
    os << pad(label, 10, true);
    for (auto code : eval::kCategoryCodes) {
      std::string cell = "-";
      for (const auto& c : r.rows) {
        if (c.category == code) cell = fixed4(c.metrics.f_measure);
      }
      os << pad(cell, 8);
    }
    os << pad(fixed4(r.overall), 9) << '\n';
  };
  for (const auto& o : outcomes) {
    if (o.ok) row(o.name, o.test_categories);
    else os << pad(o.name, 10, true) << "  failed: " << o.error << '\n';
  }
  if (pooled) row("All", *pooled);
  return os.str();
}

json summary_json(const std::vector<ExperimentOutcome>& outcomes,
                  const eval::CategoryReport* pooled) {
  json exps = json::array();
  for (const auto& o : outcomes) {
    json j{{"name", o.name}, {"ok", o.ok}};
    if (o.ok) {
      j["best_epoch"] = o.best_epoch;
      j["val_f_measure"] = o.val_f;
      j["test"] = metrics_json(o.test);
      j["test_categories"] = category_report_json(o.test_categories);
    } else {
      j["error"] = o.error;
    }
    exps.push_back(std::move(j));
  }
  json out{{"experiments", std::move(exps)}};
  if (pooled) out["pooled_test_categories"] = category_report_json(*pooled);
  return out;
}

}  // namespace mosgnn::io
