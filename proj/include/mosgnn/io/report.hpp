#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mosgnn/metrics.hpp"
#include "mosgnn/trainer.hpp"

// Report documents. Schema in docs/report_schema.md. Wall-clock time is kept
// out of every document so identical runs produce identical bytes.

namespace mosgnn::io {

nlohmann::json metrics_json(const eval::MetricsResult& m);
nlohmann::json category_report_json(const eval::CategoryReport& r);
/// One object per epoch; validation fields only on evaluated epochs.
nlohmann::json epoch_json(const train::EpochRecord& r);
nlohmann::json train_report_json(const train::TrainReport& r);

/// Aligned plain-text table: category, precision, recall, F, counts; then Overall.
std::string format_category_table(const eval::CategoryReport& r);

struct ExperimentOutcome {
  std::string name;
  bool ok = false;
  std::string error;  // set when !ok
  double val_f = 0.0;
  std::size_t best_epoch = 0;
  eval::MetricsResult test;
  eval::CategoryReport test_categories;
};

/// Validation/test F per experiment, then per-category test F per experiment
/// and over the pooled test nodes of all experiments.
std::string format_summary(const std::vector<ExperimentOutcome>& outcomes,
                           const eval::CategoryReport* pooled);
nlohmann::json summary_json(const std::vector<ExperimentOutcome>& outcomes,
                            const eval::CategoryReport* pooled);

}  // namespace mosgnn::io
