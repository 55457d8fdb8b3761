#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "windsweep/dataset.hpp"
#include "windsweep/metrics.hpp"
#include "windsweep/morphology.hpp"
#include "windsweep/ransac.hpp"
#include "windsweep/rules.hpp"

namespace windsweep {

struct MetricsOptions {
  BinOptions bins;
  /// Evaluate the cleansed-curve E_rmse over every complete point instead of U_n.
  bool all_points = false;
};

struct PipelineConfig {
  RuleConfig rule;
  RansacConfig ransac;
  double k = 1.5;
  int folds = 5;
  int q = 100;
  int d = 6;
  MetricsOptions metrics;

  void validate() const;
  /// Messages for k outside [1.0, 2.5] or d outside [4, 7]; advisory only.
  std::vector<std::string> range_warnings() const;
  nlohmann::json to_json() const;
};

struct PipelineResult {
  OutlierReport report;
  MetricsReport metrics;
  /// One entry for a single pass, K entries with K-fold.
  std::vector<DetectionResult> stage2;
  std::optional<MorphologyResult> stage3;

  /// Metrics plus per-fold stage-2 models and thresholds.
  nlohmann::json metrics_json() const;
};

/// Feed-forward three-stage identification. Verdict precedence:
/// missing/duplicate > rule > regression > morphology > normal.
PipelineResult run_pipeline(const Dataset& dataset, const PipelineConfig& config);

/// Labels as optional outlier flags, for classification_metrics.
std::vector<std::optional<bool>> outlier_labels(const Dataset& dataset);

/// Complete points whose verdict satisfies `keep`.
template <typename Pred>
std::vector<Observation> select_observations(const Dataset& dataset, const std::vector<Verdict>& verdicts,
                                             Pred keep) {
  std::vector<Observation> out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& pt = dataset.points[i];
    if (pt.complete() && keep(verdicts[i])) out.push_back({*pt.wind_speed, *pt.power, i});
  }
  return out;
}

MetricsReport evaluate(const Dataset& dataset, const std::vector<Verdict>& verdicts,
                       double rated_power, const MetricsOptions& options,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace windsweep
