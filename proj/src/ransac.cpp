#include "windsweep/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "windsweep/error.hpp"
#include "windsweep/random.hpp"

namespace windsweep {

std::array<double, 4> expand_cubic(double v) { return {1.0, v, v * v, v * v * v}; }

double predict_expanded(const std::array<double, 4>& features, const CubicModel& model) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) sum += features[i] * model.theta[i];
  return sum;
}

void RansacConfig::validate() const {
  if (n_max < 1) throw InvalidConfig("n_max must be >= 1");
  if (!(c > 0.0)) throw InvalidConfig("c must be > 0");
  if (strata < 1) throw InvalidConfig("strata must be >= 1");
  if (sample_fraction && !(*sample_fraction > 0.0 && *sample_fraction <= 1.0))
    throw InvalidConfig("sample_fraction must lie in (0, 1]");
  if (max_resamples < 0) throw InvalidConfig("max_resamples must be >= 0");
}

double RansacConfig::effective_sample_fraction(int folds) const {
  if (sample_fraction) return *sample_fraction;
  return folds > 1 ? 1.0 : 0.8;
}

namespace {

int stratum_of(double p, double lo, double hi, int strata) {
  if (!(hi > lo)) return 0;
  const int bin = static_cast<int>(std::floor((p - lo) / (hi - lo) * strata));
  return std::clamp(bin, 0, strata - 1);
}

std::vector<std::vector<std::size_t>> stratify(std::span<const Observation> pool, int strata) {
  std::vector<std::vector<std::size_t>> bins(static_cast<std::size_t>(strata));
  if (pool.empty()) return bins;
  auto [lo_it, hi_it] = std::minmax_element(
      pool.begin(), pool.end(), [](const Observation& a, const Observation& b) { return a.p < b.p; });
  const double lo = lo_it->p, hi = hi_it->p;
  for (std::size_t i = 0; i < pool.size(); ++i)
    bins[static_cast<std::size_t>(stratum_of(pool[i].p, lo, hi, strata))].push_back(i);
  return bins;
}

}  // namespace

std::vector<Observation> stratified_sample(std::span<const Observation> pool, int strata,
                                           double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw InvalidConfig("sample fraction must lie in (0, 1]");
  if (strata < 1) throw InvalidConfig("strata must be >= 1");
  if (fraction == 1.0) return {pool.begin(), pool.end()};

  Rng rng(seed);
  std::vector<std::size_t> chosen;
  for (auto& bin : stratify(pool, strata)) {
    if (bin.empty()) continue;
    // Guard against 0.1 * 30 = 3.0000000000000004 rounding up to 4.
    const auto want = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(bin.size()) - 1e-9));
    const std::size_t take = std::clamp<std::size_t>(want, 1, bin.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, bin.size() - 1);
      std::swap(bin[i], bin[pick(rng)]);
    }
    chosen.insert(chosen.end(), bin.begin(), bin.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Observation> out;
  out.reserve(chosen.size());
  for (auto i : chosen) out.push_back(pool[i]);
  return out;
}

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

struct Lu {
  Mat4 a;
  std::array<int, 4> perm;
};

// Partial-pivot LU; nullopt on an exactly zero pivot.
std::optional<Lu> decompose(Mat4 a) {
  std::array<int, 4> perm{0, 1, 2, 3};
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(perm[pivot], perm[col]);
    for (int r = col + 1; r < 4; ++r) {
      a[r][col] /= a[col][col];
      for (int c = col + 1; c < 4; ++c) a[r][c] -= a[r][col] * a[col][c];
    }
  }
  return Lu{a, perm};
}

std::array<double, 4> solve(const Lu& lu, const std::array<double, 4>& b) {
  std::array<double, 4> x{};
  for (int r = 0; r < 4; ++r) {
    double s = b[static_cast<std::size_t>(lu.perm[r])];
    for (int c = 0; c < r; ++c) s -= lu.a[r][c] * x[c];
    x[r] = s;
  }
  for (int r = 3; r >= 0; --r) {
    double s = x[r];
    for (int c = r + 1; c < 4; ++c) s -= lu.a[r][c] * x[c];
    x[r] = s / lu.a[r][r];
  }
  return x;
}

double norm1(const Mat4& m) {
  double best = 0.0;
  for (int c = 0; c < 4; ++c) {
    double s = 0.0;
    for (int r = 0; r < 4; ++r) s += std::abs(m[r][c]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

std::optional<CubicModel> try_fit_exact_cubic(const std::array<Observation, 4>& sample,
                                              double condition_cap) {
  Mat4 a;
  std::array<double, 4> rhs;
  for (std::size_t i = 0; i < 4; ++i) {
    a[i] = expand_cubic(sample[i].v);
    rhs[i] = sample[i].p;
  }
  const auto lu = decompose(a);
  if (!lu) return std::nullopt;

  Mat4 inverse;
  for (std::size_t c = 0; c < 4; ++c) {
    std::array<double, 4> unit{};
    unit[c] = 1.0;
    const auto col = solve(*lu, unit);
    for (std::size_t r = 0; r < 4; ++r) inverse[r][c] = col[r];
  }
  const double cond = norm1(a) * norm1(inverse);
  if (!std::isfinite(cond) || cond > condition_cap) return std::nullopt;

  CubicModel model{solve(*lu, rhs)};
  for (double t : model.theta)
    if (!std::isfinite(t)) return std::nullopt;
  return model;
}

CubicModel fit_exact_cubic(const std::array<Observation, 4>& sample, double condition_cap) {
  if (auto m = try_fit_exact_cubic(sample, condition_cap)) return *m;
  throw SingularSample("four-point sample does not determine a cubic");
}

namespace {

double median_inplace(std::vector<double>& xs) {
  const std::size_t n = xs.size();
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), mid);
  return 0.5 * (lower + upper);
}

double threshold_with_scratch(std::span<const double> residuals, double c,
                              DeviationEstimator estimator, std::vector<double>& scratch) {
  scratch.assign(residuals.begin(), residuals.end());
  const double med = median_inplace(scratch);
  for (std::size_t i = 0; i < residuals.size(); ++i) scratch[i] = std::abs(residuals[i] - med);
  double spread;
  if (estimator == DeviationEstimator::Mean) {
    spread = std::accumulate(scratch.begin(), scratch.end(), 0.0) /
             static_cast<double>(scratch.size());
  } else {
    spread = median_inplace(scratch);
  }
  return c * spread;
}

}  // namespace

double inlier_threshold(std::span<const double> residuals, double c,
                        DeviationEstimator estimator) {
  if (residuals.empty()) throw Error("inlier_threshold: empty residual vector");
  std::vector<double> scratch;
  return threshold_with_scratch(residuals, c, estimator, scratch);
}

RansacFit ransac_fit(std::span<const Observation> training, const RansacConfig& config) {
  config.validate();
  std::vector<Observation> pts(training.begin(), training.end());
  std::sort(pts.begin(), pts.end(), [](const Observation& a, const Observation& b) {
    return std::tie(a.v, a.p, a.index) < std::tie(b.v, b.p, b.index);
  });

  std::size_t distinct = 0;
  for (std::size_t i = 0; i < pts.size() && distinct < 4; ++i)
    if (i == 0 || pts[i].v != pts[i - 1].v) ++distinct;
  if (distinct < 4)
    throw DegenerateData("RANSAC needs at least 4 points with distinct wind speeds, got " +
                         std::to_string(distinct));

  const std::size_t n = pts.size();
  Rng rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> r(n), scratch;
  scratch.reserve(n);

  RansacFit best;
  for (int it = 0; it < config.n_max; ++it) {
    std::optional<CubicModel> model;
    for (int attempt = 0; attempt <= config.max_resamples && !model; ++attempt) {
      std::array<std::size_t, 4> idx{};
      for (std::size_t j = 0; j < 4; ++j) {
        do {
          idx[j] = pick(rng);
        } while (std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(j), idx[j]) !=
                 idx.begin() + static_cast<std::ptrdiff_t>(j));
      }
      model = try_fit_exact_cubic({pts[idx[0]], pts[idx[1]], pts[idx[2]], pts[idx[3]]},
                                  config.condition_cap);
    }
    if (!model) {
      ++best.failed_iterations;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) r[i] = residual(*model, pts[i].v, pts[i].p);
    const double h = threshold_with_scratch(r, config.c, config.me_estimator, scratch);
    std::size_t count = 0;
    if (config.inlier_metric == InlierMetric::Absolute) {
      for (double x : r) count += std::abs(x) < h;
    } else {
      for (double x : r) count += x < h;
    }
    if (best.best_iteration < 0 || count > best.inliers) {
      best.model = *model;
      best.inliers = count;
      best.best_iteration = it;
    }
  }
  if (best.best_iteration < 0)
    throw DegenerateData("all " + std::to_string(config.n_max) + " RANSAC samples were singular");
  return best;
}

bool IqrThresholds::flags(double error) const {
  if (t_low == t_up) return error < t_low || error > t_up;
  return error <= t_low || error >= t_up;
}

double quantile_sorted(std::span<const double> sorted, double fraction) {
  const double pos = fraction * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IqrThresholds iqr_thresholds(std::span<const double> errors, double k) {
  std::vector<double> sorted;
  sorted.reserve(errors.size());
  for (double e : errors)
    if (std::isfinite(e)) sorted.push_back(e);
  if (sorted.size() < 2) throw Error("iqr_thresholds: need at least 2 finite errors");
  std::sort(sorted.begin(), sorted.end());

  IqrThresholds t;
  t.k = k;
  t.q1 = quantile_sorted(sorted, 0.25);
  t.q3 = quantile_sorted(sorted, 0.75);
  t.iqr = t.q3 - t.q1;
  if (t.iqr == 0.0) {
    // Avoid 0 * inf when k is unbounded.
    t.t_low = t.q1;
    t.t_up = t.q3;
  } else {
    t.t_low = t.q1 - k * t.iqr;
    t.t_up = t.q3 + k * t.iqr;
  }
  return t;
}

std::vector<Observation> survivors(const Dataset& dataset, std::span<const Verdict> stage1) {
  if (stage1.size() != dataset.size()) throw Error("stage-1 verdicts do not match dataset size");
  std::vector<Observation> out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& pt = dataset.points[i];
    if (stage1[i] == Verdict::Normal && pt.complete()) out.push_back({*pt.wind_speed, *pt.power, i});
  }
  return out;
}

DetectionResult evaluate_model(const CubicModel& model, std::span<const Observation> evaluated,
                               std::size_t dataset_size, double k) {
  DetectionResult res;
  res.model = model;
  res.errors.assign(dataset_size, std::numeric_limits<double>::quiet_NaN());
  res.flags.assign(dataset_size, false);

  double scale = 1.0;
  for (const auto& o : evaluated) scale = std::max(scale, std::abs(o.p));
  const double snap = kErrorSnapRelative * scale;

  std::vector<double> errs;
  errs.reserve(evaluated.size());
  for (const auto& o : evaluated) {
    double e = model.predict(o.v) - o.p;
    if (std::abs(e) <= snap) e = 0.0;
    res.errors[o.index] = e;
    errs.push_back(e);
  }
  res.thresholds = iqr_thresholds(errs, k);
  for (const auto& o : evaluated) {
    if (res.thresholds.flags(res.errors[o.index])) {
      res.flags[o.index] = true;
      ++res.flagged;
    }
  }
  return res;
}

DetectionResult detect(const Dataset& dataset, std::span<const Verdict> stage1,
                       const RansacConfig& config, double k) {
  config.validate();
  const auto pool = survivors(dataset, stage1);
  const auto training = stratified_sample(pool, config.strata, config.effective_sample_fraction(1),
                                          derive_seed(config.seed, kStreamSampling));
  RansacConfig fit_cfg = config;
  fit_cfg.seed = derive_seed(config.seed, kStreamRansac);
  const auto fit = ransac_fit(training, fit_cfg);
  auto res = evaluate_model(fit.model, pool, dataset.size(), k);
  res.training_size = training.size();
  return res;
}

std::vector<int> assign_folds(std::span<const Observation> pool, int strata, int folds,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> part(pool.size(), 0);
  // Round-robin continues across strata so global part sizes differ by at most one.
  std::size_t next = 0;
  for (auto& bin : stratify(pool, strata)) {
    std::shuffle(bin.begin(), bin.end(), rng);
    for (auto i : bin) part[i] = static_cast<int>(next++ % static_cast<std::size_t>(folds));
  }
  return part;
}

KFoldResult kfold_detect(const Dataset& dataset, std::span<const Verdict> stage1,
                         const RansacConfig& config, double k, int folds) {
  config.validate();
  if (folds < 2) throw InvalidConfig("K-fold detection needs folds >= 2");
  const auto pool = survivors(dataset, stage1);
  if (pool.size() < static_cast<std::size_t>(folds))
    throw DegenerateData("empty fold: " + std::to_string(pool.size()) +
                         " surviving points for " + std::to_string(folds) + " folds");

  const auto part = assign_folds(pool, config.strata, folds, derive_seed(config.seed, kStreamFolds));
  const double fraction = config.effective_sample_fraction(folds);

  KFoldResult out;
  out.votes.assign(dataset.size(), 0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Observation> parts;
    parts.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (part[i] != f) parts.push_back(pool[i]);

    const std::uint64_t fold_seed = derive_seed(config.seed, 100 + static_cast<std::uint64_t>(f));
    const auto training = stratified_sample(parts, config.strata, fraction,
                                            derive_seed(fold_seed, kStreamSampling));
    RansacConfig fit_cfg = config;
    fit_cfg.seed = derive_seed(fold_seed, kStreamRansac);
    const auto fit = ransac_fit(training, fit_cfg);

    auto res = evaluate_model(fit.model, pool, dataset.size(), k);
    res.training_size = training.size();
    for (std::size_t i = 0; i < dataset.size(); ++i) out.votes[i] += res.flags[i];
    out.folds.push_back(std::move(res));
  }
  out.consensus.resize(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) out.consensus[i] = majority(out.votes[i], folds);
  return out;
}

}  // namespace windsweep
