#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "windsweep/ransac.hpp"
#include "windsweep/spline.hpp"

namespace windsweep {

struct BinOptions {
  double bin_width = 0.5;     // m/s
  std::size_t min_bin_count = 3;
};

/// Bin-method power curve: per speed bin, the mean speed and mean power
/// (knots), joined by a natural cubic spline.
class PowerCurve {
 public:
  /// Builds a curve straight from knots (testing and external curves).
  static PowerCurve from_knots(std::vector<double> centers, std::vector<double> means);

  const std::vector<double>& bin_centers() const { return spline_.knots(); }
  const std::vector<double>& bin_means() const { return spline_.values(); }
  double operator()(double v) const { return spline_(v); }

 private:
  NaturalCubicSpline spline_;
};

/// Throws Error when fewer than two bins hold min_bin_count points.
PowerCurve fit_power_curve(std::span<const Observation> points, const BinOptions& options = {});

/// (1/C) sqrt(mean (curve(v) - p)^2), in per-unit of rated power.
double curve_rmse(std::span<const Observation> points, const PowerCurve& curve, double rated_power);

struct ConfusionCounts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  std::size_t total() const { return tp + tn + fp + fn; }
};

struct Classification {
  ConfusionCounts counts;
  double accuracy = 0.0;    // percent
  double error_rate = 0.0;  // percent
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Outlier is the positive class. Entries without a label are skipped.
Classification classification_metrics(const std::vector<bool>& flags,
                                      const std::vector<std::optional<bool>>& outlier_labels);

struct PredictionErrors {
  double e_mae = 0.0;
  double e_rmse = 0.0;
};

/// Per-unit MAE and RMSE of a forecast against actual power.
PredictionErrors prediction_errors(std::span<const double> actual, std::span<const double> predicted,
                                   double rated_power);

struct MetricsReport {
  std::optional<double> e_rmse_curve;
  std::optional<double> e_rmse_curve_raw;
  std::optional<Classification> classification;
  std::optional<PredictionErrors> prediction;

  nlohmann::json to_json() const;
};

}  // namespace windsweep
