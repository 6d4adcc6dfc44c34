#include "mosgnn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "mosgnn/error.hpp"

namespace mosgnn::eval {

ConfusionCounts confusion_counts(std::span<const int> pred, std::span<const int> gt,
                                 std::span<const std::uint8_t> mask, int positive) {
  if (pred.size() != gt.size() || mask.size() != gt.size()) {
    throw DimensionError("confusion_counts: lengths " + std::to_string(pred.size()) + ", " +
                         std::to_string(gt.size()) + ", " + std::to_string(mask.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!mask[i]) continue;
    const bool p = pred[i] == positive;
    const bool t = gt[i] == positive;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  if (c.total() == 0) throw EvaluationError("confusion_counts: mask selects no nodes");
  return c;
}

MetricsResult precision_recall_f(const ConfusionCounts& c) {
  MetricsResult m;
  m.counts = c;
  const auto tp = static_cast<double>(c.tp);
  m.precision = c.tp + c.fp ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
  m.recall = c.tp + c.fn ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
  const double pr = m.precision + m.recall;
  m.f_measure = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  return m;
}

std::string_view canonical_category(std::string_view tag) {
  static constexpr std::pair<std::string_view, std::string_view> kNames[] = {
      {"baseline", "BSL"},      {"badWeather", "BWT"},
      {"intermittentObjectMotion", "IOM"},
      {"lowFramerate", "LFR"},  {"PTZ", "PTZ"},
      {"thermal", "THL"},       {"cameraJitter", "CJI"},
      {"shadow", "SHW"},        {"dynamicBackground", "DBA"},
  };
  for (auto code : kCategoryCodes) {
    if (tag == code) return code;
  }
  for (const auto& [name, code] : kNames) {
    if (tag == name) return code;
  }
  throw DataError("unknown category tag '" + std::string(tag) + "'");
}

CategoryReport category_report(std::span<const int> pred, std::span<const int> gt,
                               std::span<const std::uint8_t> mask,
                               std::span<const std::string> categories) {
  if (categories.size() != gt.size()) {
    throw DimensionError("category_report: " + std::to_string(categories.size()) +
                         " category tags for " + std::to_string(gt.size()) + " nodes");
  }
  // One mask per category so all counting goes through confusion_counts.
  std::array<std::vector<std::uint8_t>, kCategoryCodes.size()> masks;
  for (auto& m : masks) m.assign(gt.size(), 0);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto code = canonical_category(categories[i]);
    const auto slot = static_cast<std::size_t>(
        std::find(kCategoryCodes.begin(), kCategoryCodes.end(), code) - kCategoryCodes.begin());
    masks[slot][i] = mask.empty() ? 1 : mask[i];
  }

  CategoryReport report;
  std::vector<double> fs;
  for (std::size_t s = 0; s < kCategoryCodes.size(); ++s) {
    if (std::none_of(masks[s].begin(), masks[s].end(), [](auto v) { return v != 0; })) continue;
    report.rows.push_back(
        {std::string(kCategoryCodes[s]), precision_recall_f(confusion_counts(pred, gt, masks[s]))});
    fs.push_back(report.rows.back().metrics.f_measure);
  }
  if (report.rows.empty()) throw EvaluationError("category_report: mask selects no nodes");
  report.overall = macro_mean(fs);
  return report;
}

double macro_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace mosgnn::eval
