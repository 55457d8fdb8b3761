#include <sstream>

#include "doctest.h"
#include "windsweep/config.hpp"
#include "windsweep/error.hpp"

using namespace windsweep;

namespace {

Settings parse(const std::string& text) {
  std::istringstream in(text);
  return parse_settings(in);
}

}  // namespace

TEST_CASE("parse_settings") {
  const auto s = parse("# header\n\nk = 2.0\nd=5   # trailing comment\r\nspeed_column = ws\n");
  CHECK(s.size() == 3);
  CHECK(s.at("k") == "2.0");
  CHECK(s.at("d") == "5");
  CHECK(s.at("speed_column") == "ws");
  CHECK(parse("k=1\nk=2\n").at("k") == "2");
  CHECK_THROWS_AS(parse("no equals sign\n"), InvalidConfig);
  CHECK_THROWS_AS(parse(" = 3\n"), InvalidConfig);
}

TEST_CASE("apply_pipeline_settings") {
  PipelineConfig cfg;
  CsvSchema schema;
  apply_pipeline_settings(parse("k=2.5\nd=4\nfolds=1\nseed=99\nme_estimator=median\n"
                                "inlier_metric=signed\nduplicate_key=speed_power_timestamp\n"
                                "power_column=kw\nmissing_values=-999;9999\nall_points=yes\n"),
                          cfg, schema);
  CHECK(cfg.k == 2.5);
  CHECK(cfg.d == 4);
  CHECK(cfg.folds == 1);
  CHECK(cfg.ransac.seed == 99);
  CHECK(cfg.ransac.me_estimator == DeviationEstimator::Median);
  CHECK(cfg.ransac.inlier_metric == InlierMetric::Signed);
  CHECK(cfg.rule.duplicate_key == DuplicateKey::SpeedPowerTimestamp);
  CHECK(schema.power_column == "kw");
  CHECK(schema.missing.values == std::vector<double>{-999.0, 9999.0});
  CHECK(cfg.metrics.all_points);

  CHECK_THROWS_AS(apply_pipeline_settings(parse("kk=1\n"), cfg, schema), InvalidConfig);
  CHECK_THROWS_AS(apply_pipeline_settings(parse("d=4.5\n"), cfg, schema), InvalidConfig);
  CHECK_THROWS_AS(apply_pipeline_settings(parse("k=abc\n"), cfg, schema), InvalidConfig);
  CHECK_THROWS_AS(apply_pipeline_settings(parse("me_estimator=mode\n"), cfg, schema), InvalidConfig);
}

TEST_CASE("parse_bands") {
  const auto bands = parse_bands("6:14:0:40; 15:18:1200:30");
  REQUIRE(bands.size() == 2);
  CHECK(bands[1].v_low == 15.0);
  CHECK(bands[1].v_high == 18.0);
  CHECK(bands[1].level == 1200.0);
  CHECK(bands[1].thickness == 30.0);
  CHECK(parse_bands("").empty());
  CHECK_THROWS_AS(parse_bands("6:14:0"), InvalidConfig);
}

TEST_CASE("apply_synth_settings") {
  SynthConfig cfg;
  apply_synth_settings(parse("n=500\nnoise_sd=50\nseed=3\nstacked_bands=5:9:0:20\n"), cfg);
  CHECK(cfg.n_points == 500);
  CHECK(cfg.noise_sd == 50.0);
  CHECK(cfg.seed == 3);
  CHECK(cfg.stacked_bands.size() == 1);
  CHECK_THROWS_AS(apply_synth_settings(parse("k=1\n"), cfg), InvalidConfig);
}
