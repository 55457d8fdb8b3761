#include "windsweep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "windsweep/error.hpp"

namespace windsweep {

PowerCurve PowerCurve::from_knots(std::vector<double> centers, std::vector<double> means) {
  PowerCurve curve;
  curve.spline_ = NaturalCubicSpline(centers, means);
  return curve;
}

PowerCurve fit_power_curve(std::span<const Observation> points, const BinOptions& options) {
  if (!(options.bin_width > 0.0)) throw InvalidConfig("bin width must be positive");

  struct Acc {
    double v = 0.0, p = 0.0;
    std::size_t n = 0;
  };
  // Bins anchored at 0 m/s: bin b covers [b w, (b + 1) w).
  std::map<long long, Acc> bins;
  for (const auto& o : points) {
    auto& a = bins[static_cast<long long>(std::floor(o.v / options.bin_width))];
    a.v += o.v;
    a.p += o.p;
    ++a.n;
  }
  std::vector<double> centers, means;
  for (const auto& [bin, a] : bins) {
    if (a.n < options.min_bin_count) continue;
    centers.push_back(a.v / static_cast<double>(a.n));
    means.push_back(a.p / static_cast<double>(a.n));
  }
  if (centers.size() < 2)
    throw Error("power curve needs at least 2 bins with >= " +
                std::to_string(options.min_bin_count) + " points, got " +
                std::to_string(centers.size()));
  return PowerCurve::from_knots(std::move(centers), std::move(means));
}

double curve_rmse(std::span<const Observation> points, const PowerCurve& curve, double rated_power) {
  if (points.empty()) throw Error("curve_rmse: empty point set");
  if (!(rated_power > 0.0)) throw InvalidConfig("rated power must be positive");
  double sum = 0.0;
  for (const auto& o : points) {
    const double d = curve(o.v) - o.p;
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(points.size())) / rated_power;
}

Classification classification_metrics(const std::vector<bool>& flags,
                                      const std::vector<std::optional<bool>>& outlier_labels) {
  if (flags.size() != outlier_labels.size()) throw Error("flags/labels length mismatch");
  Classification c;
  auto& k = c.counts;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (!outlier_labels[i]) continue;
    const bool actual = *outlier_labels[i];
    if (flags[i]) (actual ? k.tp : k.fp)++;
    else (actual ? k.fn : k.tn)++;
  }
  if (k.total() == 0) throw Error("no labeled points to evaluate");

  const auto total = static_cast<double>(k.total());
  c.accuracy = 100.0 * static_cast<double>(k.tp + k.tn) / total;
  c.error_rate = 100.0 * static_cast<double>(k.fp + k.fn) / total;
  c.precision = k.tp + k.fp ? static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fp) : 0.0;
  c.recall = k.tp + k.fn ? static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fn) : 0.0;
  c.f1 = c.precision + c.recall > 0.0 ? 2.0 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
  return c;
}

PredictionErrors prediction_errors(std::span<const double> actual, std::span<const double> predicted,
                                   double rated_power) {
  if (actual.size() != predicted.size()) throw Error("actual/predicted length mismatch");
  if (actual.empty()) throw Error("prediction series are empty");
  if (!(rated_power > 0.0)) throw InvalidConfig("rated power must be positive");
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const auto n = static_cast<double>(actual.size());
  return {abs_sum / n / rated_power, std::sqrt(sq_sum / n) / rated_power};
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  if (e_rmse_curve) j["e_rmse_curve"] = *e_rmse_curve;
  if (e_rmse_curve_raw) j["e_rmse_curve_raw"] = *e_rmse_curve_raw;
  if (classification) {
    const auto& c = *classification;
    j["acc"] = c.accuracy;
    j["err"] = c.error_rate;
    j["f1"] = c.f1;
    j["precision"] = c.precision;
    j["recall"] = c.recall;
    j["confusion"] = {{"tp", c.counts.tp}, {"tn", c.counts.tn}, {"fp", c.counts.fp}, {"fn", c.counts.fn}};
  }
  if (prediction) {
    j["e_mae"] = prediction->e_mae;
    j["e_rmse_pred"] = prediction->e_rmse;
  }
  return j;
}

}  // namespace windsweep
