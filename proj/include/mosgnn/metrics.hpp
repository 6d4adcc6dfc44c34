#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mosgnn::eval {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct MetricsResult {
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// Counts over rows with mask != 0; `positive` is the class treated as
/// positive (moving = 1).
ConfusionCounts confusion_counts(std::span<const int> pred, std::span<const int> gt,
                                 std::span<const std::uint8_t> mask, int positive = 1);

/// Precision = TP/(TP+FP), Recall = TP/(TP+FN), F = 2PR/(P+R). Each ratio is 0
/// when its denominator is 0.
MetricsResult precision_recall_f(const ConfusionCounts& c);

/// CDNet 2014 challenge columns in report order.
inline constexpr std::array<std::string_view, 9> kCategoryCodes{
    "BSL", "BWT", "IOM", "LFR", "PTZ", "THL", "CJI", "SHW", "DBA"};

/// Maps a code or a CDNet directory name (e.g. "badWeather") to its code;
/// throws DataError for anything else.
std::string_view canonical_category(std::string_view tag);

struct CategoryRow {
  std::string category;
  MetricsResult metrics;
};

struct CategoryReport {
  std::vector<CategoryRow> rows;  // categories with at least one evaluated node
  double overall = 0.0;           // unweighted mean of the per-category F values
};

/// Pools confusion counts per category tag, then averages F across categories.
CategoryReport category_report(std::span<const int> pred, std::span<const int> gt,
                               std::span<const std::uint8_t> mask,
                               std::span<const std::string> categories);

/// Unweighted mean; 0 for an empty list.
double macro_mean(std::span<const double> values);

}  // namespace mosgnn::eval
