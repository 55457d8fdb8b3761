#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "windsweep/dataset.hpp"

namespace windsweep {

/// p(v) = theta[0] + theta[1] v + theta[2] v^2 + theta[3] v^3, in kW.
struct CubicModel {
  std::array<double, 4> theta{};

  /// Horner evaluation.
  double predict(double v) const {
    return theta[0] + v * (theta[1] + v * (theta[2] + v * theta[3]));
  }
};

/// Returns [1, v, v^2, v^3].
std::array<double, 4> expand_cubic(double v);

/// Inner product of an expanded feature row with theta.
double predict_expanded(const std::array<double, 4>& features, const CubicModel& model);

/// A (speed, power) pair tagged with its dataset index.
struct Observation {
  double v = 0.0;
  double p = 0.0;
  std::size_t index = 0;
};

enum class InlierMetric { Absolute, Signed };
enum class DeviationEstimator { Mean, Median };


struct RansacConfig {
  int n_max = 1000;
  double c = 1.43;
  std::uint64_t seed = 0;
  /// Per-stratum sampling fraction forming U_t. Unset: 1.0 with K-fold, 0.8 single pass.
  std::optional<double> sample_fraction;
  int strata = 10;
  /// |r| < h (default) or the literal signed r < h.
  InlierMetric inlier_metric = InlierMetric::Absolute;
  /// Reduction applied to |r - median(r)| when forming h.
  DeviationEstimator me_estimator = DeviationEstimator::Mean;
  /// Extra draws allowed per iteration when the sample is singular.
  int max_resamples = 100;
  double condition_cap = 1e12;

  void validate() const;
  double effective_sample_fraction(int folds) const;
};

/// Equal-width power strata over [min p, max p] of the pool; ceil(fraction * |bin|)
/// points drawn without replacement from each non-empty bin. Output keeps pool order.
std::vector<Observation> stratified_sample(std::span<const Observation> pool, int strata,
                                           double fraction, std::uint64_t seed);

/// Interpolating cubic through four points, or nullopt when the Vandermonde
/// system is singular or its 1-norm condition number exceeds `condition_cap`.
std::optional<CubicModel> try_fit_exact_cubic(const std::array<Observation, 4>& sample,
                                              double condition_cap = 1e12);
/// Throws SingularSample where try_fit_exact_cubic returns nullopt.
CubicModel fit_exact_cubic(const std::array<Observation, 4>& sample,
                           double condition_cap = 1e12);

inline double residual(const CubicModel& model, double v, double p) {
  return p - model.predict(v);
}

/// h = c * M(|r_i - median(r)|), with M the mean (default) or the median.
double inlier_threshold(std::span<const double> residuals, double c,
                        DeviationEstimator estimator = DeviationEstimator::Mean);

struct RansacFit {
  CubicModel model;
  std::size_t inliers = 0;
  int best_iteration = -1;
  int failed_iterations = 0;
};

/// Consensus fit: keeps the model of the first iteration reaching the largest
/// inlier count. Training points are put in canonical (v, p, index) order
/// before sampling, so the result does not depend on input order.
RansacFit ransac_fit(std::span<const Observation> training, const RansacConfig& config);

struct IqrThresholds {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double k = 1.5;
  double t_low = 0.0;
  double t_up = 0.0;

  /// e <= t_low or e >= t_up; strict when the band has collapsed (t_low == t_up).
  bool flags(double error) const;
};

/// Linear interpolation between order statistics at fraction * (n - 1).
double quantile_sorted(std::span<const double> sorted, double fraction);

/// Throws Error when fewer than two finite errors are supplied.
IqrThresholds iqr_thresholds(std::span<const double> errors, double k);

struct DetectionResult {
  CubicModel model;
  /// e_i = predicted - actual; NaN for points outside the evaluated set.
  std::vector<double> errors;
  IqrThresholds thresholds;
  std::vector<bool> flags;
  std::size_t training_size = 0;
  std::size_t flagged = 0;
};

/// Stage-1 survivors (verdict Normal) as observations.
std::vector<Observation> survivors(const Dataset& dataset, std::span<const Verdict> stage1);

/// Errors smaller than this fraction of the power scale are rounding noise and snap to 0.
inline constexpr double kErrorSnapRelative = 1e-8;

/// Applies a fitted model to `evaluated` and thresholds its errors.
DetectionResult evaluate_model(const CubicModel& model, std::span<const Observation> evaluated,
                               std::size_t dataset_size, double k);

/// Single-pass detection: stratified U_t, RANSAC fit, IQR flags over all survivors.
DetectionResult detect(const Dataset& dataset, std::span<const Verdict> stage1,
                       const RansacConfig& config, double k);

struct KFoldResult {
  std::vector<DetectionResult> folds;
  std::vector<int> votes;
  std::vector<bool> consensus;
};

/// Strict majority: flagged by more than half of `folds`.
inline bool majority(int votes, int folds) { return 2 * votes > folds; }

/// Assigns each pool position a fold part in [0, folds), stratified by power.
std::vector<int> assign_folds(std::span<const Observation> pool, int strata, int folds,
                              std::uint64_t seed);

KFoldResult kfold_detect(const Dataset& dataset, std::span<const Verdict> stage1,
                         const RansacConfig& config, double k, int folds);

}  // namespace windsweep
