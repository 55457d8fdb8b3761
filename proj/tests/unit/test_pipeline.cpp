#include <algorithm>
#include <random>

#include "doctest.h"
#include "windsweep/error.hpp"
#include "windsweep/pipeline.hpp"
#include "windsweep/synth.hpp"

using namespace windsweep;

namespace {

std::size_t count(const std::vector<Verdict>& v, Verdict which) {
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), which));
}

Dataset perfect_cubic(std::size_t n) {
  Dataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = 3.5 + 8.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    ds.points.push_back({v, -120.0 + v * (35.0 + v * (-4.5 + v * 1.25)), std::nullopt, Label::Normal});
  }
  return ds;
}

Dataset normals_only(std::size_t n, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_points = n;
  cfg.seed = seed;
  cfg.dispersive_fraction = cfg.stacked_fraction = 0.0;
  return generate(cfg);
}

}  // namespace

TEST_CASE("rule-only contamination is caught by stage 1 alone") {
  auto ds = normals_only(20000, 5);
  const std::size_t normals = ds.size();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> v(4.0, 20.0), p(10.0, 1500.0), low(0.0, 2.9);
  for (std::size_t i = 0; i < 2000; ++i) {
    switch (i % 4) {
      case 0: ds.points.push_back({-v(rng), p(rng), {}, Label::Outlier}); break;
      case 1: ds.points.push_back({v(rng), -p(rng), {}, Label::Outlier}); break;
      case 2: ds.points.push_back({v(rng), 0.0, {}, Label::Outlier}); break;
      default: ds.points.push_back({low(rng), p(rng), {}, Label::Outlier}); break;
    }
  }
  const auto res = run_pipeline(ds, PipelineConfig{});
  const auto& verdicts = res.report.verdicts;
  for (std::size_t i = normals; i < ds.size(); ++i) CHECK(verdicts[i] == Verdict::RuleOutlier);

  std::size_t extra = 0;
  for (std::size_t i = 0; i < normals; ++i) extra += is_outlier(verdicts[i]);
  MESSAGE("normals flagged by stages 2-3: " << extra << " of " << normals);
  CHECK(extra <= normals / 100);
}

TEST_CASE("single pass and K-fold agree on noiseless data") {
  const auto ds = perfect_cubic(3000);
  PipelineConfig one;
  one.folds = 1;
  const auto a = run_pipeline(ds, one);
  const auto b = run_pipeline(ds, PipelineConfig{});
  CHECK(a.report.verdicts == b.report.verdicts);
  CHECK(b.report.fold_flag_counts.size() == 5);
  CHECK(a.report.fold_flag_counts.empty());
  CHECK(count(b.report.verdicts, Verdict::RegressionOutlier) == 0);
}

TEST_CASE("a collapsed opening skips stage 3 with a warning") {
  const auto res = run_pipeline(perfect_cubic(500), PipelineConfig{});
  CHECK_FALSE(res.stage3);
  const auto& w = res.report.warnings;
  CHECK(std::any_of(w.begin(), w.end(), [](auto& s) { return s.starts_with("stage3 skipped"); }));
  CHECK(count(res.report.verdicts, Verdict::Normal) == 500);
}

TEST_CASE("verdict precedence across stages") {
  auto ds = normals_only(5000, 8);
  ds.points.push_back({-2.0, 300.0, {}, Label::Outlier});  // rule
  ds.points.push_back({-2.0, 300.0, {}, Label::Outlier});  // rule and duplicate
  ds.points.push_back({std::nullopt, 300.0, {}, Label::Outlier});
  const auto res = run_pipeline(ds, PipelineConfig{});
  const auto& v = res.report.verdicts;
  const auto n = ds.size();
  CHECK(v[n - 3] == Verdict::RuleOutlier);
  CHECK(v[n - 2] == Verdict::MissingOrDuplicate);
  CHECK(v[n - 1] == Verdict::MissingOrDuplicate);
  CHECK(v.size() == n);
}

TEST_CASE("pipeline on synthetic data") {
  SynthConfig sc;
  sc.n_points = 20000;
  const auto ds = generate(sc);
  const auto res = run_pipeline(ds, PipelineConfig{});

  SUBCASE("metrics are reported") {
    REQUIRE(res.metrics.classification);
    CHECK(res.metrics.classification->accuracy > 85.0);
    REQUIRE(res.metrics.e_rmse_curve);
    REQUIRE(res.metrics.e_rmse_curve_raw);
    CHECK(*res.metrics.e_rmse_curve < *res.metrics.e_rmse_curve_raw);
    const auto j = res.metrics_json();
    CHECK(j["stage2"].size() == 5);
    CHECK(j.contains("stage3"));
    const auto& t = *res.report.timings_ms;
    for (const char* key : {"stage1", "stage2", "stage3", "metrics", "total"}) CHECK(t.contains(key));
  }
  SUBCASE("deterministic for a fixed seed") {
    CHECK(run_pipeline(ds, PipelineConfig{}).report.verdicts == res.report.verdicts);
  }
  SUBCASE("rerun on the cleansed output only shrinks") {
    Dataset cleansed;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (res.report.verdicts[i] == Verdict::Normal) cleansed.points.push_back(ds.points[i]);
    const auto again = run_pipeline(cleansed, PipelineConfig{});
    const auto flagged_before = ds.size() - count(res.report.verdicts, Verdict::Normal);
    const auto flagged_after = cleansed.size() - count(again.report.verdicts, Verdict::Normal);
    CHECK(flagged_after < flagged_before);
  }
}

TEST_CASE("range warnings are advisory") {
  PipelineConfig cfg;
  CHECK(cfg.range_warnings().empty());
  cfg.k = 5.0;
  cfg.d = 9;
  CHECK(cfg.range_warnings().size() == 2);
  CHECK_NOTHROW(cfg.validate());
  cfg.folds = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}

TEST_CASE("stage failures carry the stage name") {
  Dataset ds;
  for (int i = 0; i < 50; ++i) ds.points.push_back({5.0, 100.0 + i, {}, {}});
  try {
    run_pipeline(ds, PipelineConfig{});
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "stage2 (regression)");
  }
}
