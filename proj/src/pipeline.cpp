#include "windsweep/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "windsweep/error.hpp"

namespace windsweep {

void PipelineConfig::validate() const {
  rule.validate();
  ransac.validate();
  if (!(k >= 0.0)) throw InvalidConfig("k must be >= 0");
  if (folds < 1) throw InvalidConfig("folds must be >= 1");
  if (q < 1) throw InvalidConfig("q must be >= 1");
  if (d < 1) throw InvalidConfig("d must be >= 1");
  if (!(metrics.bins.bin_width > 0.0)) throw InvalidConfig("bin width must be positive");
}

std::vector<std::string> PipelineConfig::range_warnings() const {
  std::vector<std::string> out;
  if (k < 1.0 || k > 2.5)
    out.push_back("k = " + std::to_string(k) + " is outside the recommended range [1.0, 2.5]");
  if (d < 4 || d > 7)
    out.push_back("d = " + std::to_string(d) + " is outside the recommended range [4, 7]");
  return out;
}

nlohmann::json PipelineConfig::to_json() const {
  return {
      {"cut_in", rule.turbine.cut_in_speed},
      {"cut_off", rule.turbine.cut_off_speed},
      {"rated", rule.turbine.rated_power},
      {"zero_power_epsilon", rule.zero_power_epsilon},
      {"duplicate_key", rule.duplicate_key == DuplicateKey::SpeedPower ? "speed_power"
                                                                        : "speed_power_timestamp"},
      {"k", k},
      {"d", d},
      {"q", q},
      {"folds", folds},
      {"n_max", ransac.n_max},
      {"c", ransac.c},
      {"seed", ransac.seed},
      {"strata", ransac.strata},
      {"sample_fraction", ransac.effective_sample_fraction(folds)},
      {"inlier_metric", ransac.inlier_metric == InlierMetric::Absolute ? "abs" : "signed"},
      {"me_estimator", ransac.me_estimator == DeviationEstimator::Mean ? "mean" : "median"},
      {"bin_width", metrics.bins.bin_width},
      {"min_bin_count", metrics.bins.min_bin_count},
      {"all_points", metrics.all_points},
  };
}

std::vector<std::optional<bool>> outlier_labels(const Dataset& dataset) {
  std::vector<std::optional<bool>> out(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i)
    if (const auto& l = dataset.points[i].label) out[i] = *l == Label::Outlier;
  return out;
}

MetricsReport evaluate(const Dataset& dataset, const std::vector<Verdict>& verdicts,
                       double rated_power, const MetricsOptions& options,
                       std::vector<std::string>* warnings) {
  MetricsReport m;
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  const auto everything = select_observations(dataset, verdicts, [](Verdict) { return true; });
  const auto normal = select_observations(dataset, verdicts, [](Verdict v) { return !is_outlier(v); });
  try {
    m.e_rmse_curve_raw = curve_rmse(everything, fit_power_curve(everything, options.bins), rated_power);
  } catch (const Error& e) {
    warn(std::string("metrics: unprocessed power curve unavailable: ") + e.what());
  }
  try {
    const auto curve = fit_power_curve(normal, options.bins);
    m.e_rmse_curve = curve_rmse(options.all_points ? everything : normal, curve, rated_power);
  } catch (const Error& e) {
    warn(std::string("metrics: cleansed power curve unavailable: ") + e.what());
  }

  if (dataset.has_labels()) {
    std::vector<bool> flags(verdicts.size());
    for (std::size_t i = 0; i < verdicts.size(); ++i) flags[i] = is_outlier(verdicts[i]);
    m.classification = classification_metrics(flags, outlier_labels(dataset));
  }
  return m;
}

nlohmann::json PipelineResult::metrics_json() const {
  auto j = metrics.to_json();
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& r : stage2) {
    folds.push_back({{"theta", r.model.theta},
                     {"q1", r.thresholds.q1},
                     {"q3", r.thresholds.q3},
                     {"iqr", r.thresholds.iqr},
                     {"t_low", r.thresholds.t_low},
                     {"t_up", r.thresholds.t_up},
                     {"training_size", r.training_size},
                     {"flagged", r.flagged}});
  }
  j["stage2"] = std::move(folds);
  if (stage3) j["stage3"] = {{"flagged", stage3->flagged}, {"opened_pixels", stage3->opened.count()}};
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

PipelineResult run_pipeline(const Dataset& dataset, const PipelineConfig& config) {
  config.validate();
  if (dataset.empty()) throw Error("dataset is empty");

  PipelineResult out;
  auto& report = out.report;
  report.params = config.to_json();
  report.warnings = config.range_warnings();
  nlohmann::json timings = nlohmann::json::object();
  const auto t_start = Clock::now();

  auto t = Clock::now();
  report.verdicts = run_stage1(dataset, config.rule);
  timings["stage1"] = elapsed_ms(t);

  t = Clock::now();
  try {
    std::vector<bool> flags;
    if (config.folds > 1) {
      auto kf = kfold_detect(dataset, report.verdicts, config.ransac, config.k, config.folds);
      flags = std::move(kf.consensus);
      for (const auto& f : kf.folds) report.fold_flag_counts.push_back(f.flagged);
      out.stage2 = std::move(kf.folds);
    } else {
      auto res = detect(dataset, report.verdicts, config.ransac, config.k);
      flags = res.flags;
      out.stage2.push_back(std::move(res));
    }
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (flags[i]) report.verdicts[i] = merge_verdict(report.verdicts[i], Verdict::RegressionOutlier);
  } catch (const InvalidConfig&) {
    throw;
  } catch (const Error& e) {
    throw StageError("stage2 (regression)", e.what());
  }
  timings["stage2"] = elapsed_ms(t);

  t = Clock::now();
  try {
    const auto remaining =
        select_observations(dataset, report.verdicts, [](Verdict v) { return v == Verdict::Normal; });
    auto morph = morphology_refine(remaining, dataset.size(), config.q, config.d);
    for (std::size_t i = 0; i < morph.flags.size(); ++i)
      if (morph.flags[i]) report.verdicts[i] = merge_verdict(report.verdicts[i], Verdict::MorphologyOutlier);
    out.stage3 = std::move(morph);
  } catch (const EmptyOpening& e) {
    report.warnings.push_back(std::string("stage3 skipped: ") + e.what());
  } catch (const InvalidConfig&) {
    throw;
  } catch (const Error& e) {
    throw StageError("stage3 (morphology)", e.what());
  }
  timings["stage3"] = elapsed_ms(t);

  t = Clock::now();
  out.metrics = evaluate(dataset, report.verdicts, config.rule.turbine.rated_power, config.metrics,
                         &report.warnings);
  timings["metrics"] = elapsed_ms(t);
  timings["total"] = elapsed_ms(t_start);
  report.timings_ms = std::move(timings);
  return out;
}

}  // namespace windsweep
