#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "windsweep/csv.hpp"
#include "windsweep/dataset.hpp"
#include "windsweep/error.hpp"

using namespace windsweep;
namespace fs = std::filesystem;

namespace {

Dataset parse(const std::string& text, const CsvSchema& schema = {}) {
  std::istringstream in(text);
  return read_csv(in, schema, "test");
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("windsweep-unit-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

OutlierReport report_of(std::vector<Verdict> v) {
  OutlierReport r;
  r.verdicts = std::move(v);
  return r;
}

}  // namespace

TEST_CASE("read_csv maps columns by name") {
  const auto ds = parse("wind_speed,power\n5.0,800.0\n");
  REQUIRE(ds.size() == 1);
  CHECK(ds.points[0].wind_speed == 5.0);
  CHECK(ds.points[0].power == 800.0);
  CHECK_FALSE(ds.has_labels());

  CsvSchema schema;
  schema.speed_column = "ws";
  schema.power_column = "kw";
  const auto renamed = parse("kw,extra,ws\n800,x,5\n", schema);
  CHECK(renamed.points[0].wind_speed == 5.0);
  CHECK(renamed.points[0].power == 800.0);
}

TEST_CASE("missing cells and sentinels are distinct from zero") {
  const auto ds = parse("wind_speed,power\nNaN,800.0\n-9999,100\n,5\n4,0\n4,nan\n4,oops\n");
  CHECK_FALSE(ds.points[0].wind_speed);
  CHECK(ds.points[0].power == 800.0);
  CHECK_FALSE(ds.points[1].wind_speed);
  CHECK(ds.points[1].power == 100.0);
  CHECK_FALSE(ds.points[2].wind_speed);
  CHECK(ds.points[3].power == 0.0);
  CHECK_FALSE(ds.points[4].power);
  CHECK_FALSE(ds.points[5].power);

  CsvSchema custom;
  custom.missing.values = {-1.0};
  const auto other = parse("wind_speed,power\n-9999,100\n-1,100\n", custom);
  CHECK(other.points[0].wind_speed == -9999.0);
  CHECK_FALSE(other.points[1].wind_speed);
}

TEST_CASE("labels and timestamps are optional columns") {
  const auto ds = parse("timestamp,wind_speed,power,label\nt0,5,800,normal\nt1,6,0,Outlier\nt2,7,9,\n");
  CHECK(ds.has_labels());
  CHECK(ds.points[0].label == Label::Normal);
  CHECK(ds.points[1].label == Label::Outlier);
  CHECK_FALSE(ds.points[2].label);
  CHECK(ds.points[1].timestamp == "t1");
  CHECK_THROWS_AS(parse("wind_speed,power,label\n5,800,maybe\n"), FormatError);
}

TEST_CASE("read_csv errors") {
  CHECK_THROWS_AS(parse("speed,power\n5,800\n"), FormatError);
  CHECK_THROWS_AS(parse("wind_speed,kw\n5,800\n"), FormatError);
  CHECK_THROWS_AS(parse("wind_speed,power\n"), FormatError);
  CHECK_THROWS_AS(parse(""), FormatError);
  CHECK_THROWS_AS(read_csv("/nonexistent/windsweep.csv"), IoError);
}

TEST_CASE("turbine parameters validate") {
  CHECK_NOTHROW(TurbineParams{}.validate());
  CHECK_THROWS_AS((TurbineParams{0.0, 25.0, 2000.0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((TurbineParams{5.0, 4.0, 2000.0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((TurbineParams{3.0, 25.0, 0.0}.validate()), InvalidConfig);
}

TEST_CASE("verdict names and precedence") {
  for (Verdict v : kAllVerdicts) CHECK(parse_verdict(verdict_name(v)) == v);
  CHECK_FALSE(parse_verdict("bogus"));
  CHECK(merge_verdict(Verdict::MorphologyOutlier, Verdict::RuleOutlier) == Verdict::RuleOutlier);
  CHECK(merge_verdict(Verdict::MissingOrDuplicate, Verdict::RuleOutlier) ==
        Verdict::MissingOrDuplicate);
  CHECK(merge_verdict(Verdict::Normal, Verdict::MorphologyOutlier) == Verdict::MorphologyOutlier);
  CHECK(verdict_rank(Verdict::RegressionOutlier) > verdict_rank(Verdict::MorphologyOutlier));
}

TEST_CASE("write_report emits verdict column and summary counts") {
  const auto dir = scratch_dir("report");
  const auto ds = parse("wind_speed,power,site\n5,800,a\n6,900,b\n-1,3,c\n");

  SUBCASE("all normal") {
    write_report(report_of({Verdict::Normal, Verdict::Normal, Verdict::Normal}), ds,
                 dir / "r.csv", dir / "s.json");
    std::ifstream in(dir / "r.csv");
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "wind_speed,power,site,verdict");
    int rows = 0;
    while (std::getline(in, line)) {
      CHECK(line.ends_with(",normal"));
      ++rows;
    }
    CHECK(rows == 3);
  }
  SUBCASE("one rule outlier") {
    const auto report = report_of({Verdict::Normal, Verdict::Normal, Verdict::RuleOutlier});
    write_report(report, ds, dir / "r.csv", dir / "s.json");
    std::ifstream in(dir / "s.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j["counts"]["normal"] == 2);
    CHECK(j["counts"]["rule"] == 1);
    CHECK(j["counts"]["total"] == 3);
    CHECK(j.contains("version"));
    CHECK(j.contains("params"));
    CHECK(j["timings_ms"].is_null());
    CHECK(j.contains("metrics"));
  }
  SUBCASE("length mismatch leaves no file") {
    CHECK_THROWS_AS(write_report(report_of({Verdict::Normal}), ds, dir / "bad.csv", dir / "bad.json"),
                    Error);
    CHECK_FALSE(fs::exists(dir / "bad.csv"));
  }
}

TEST_CASE("split_by_verdict partitions the dataset") {
  const auto ds = parse("wind_speed,power\n1,0\n5,100\n6,200\n7,0\n8,900\n");
  auto [n1, a1] = split_by_verdict(ds, report_of(std::vector<Verdict>(5, Verdict::Normal)));
  CHECK(n1.size() == 5);
  CHECK(a1.empty());
  auto [n2, a2] = split_by_verdict(ds, report_of(std::vector<Verdict>(5, Verdict::RuleOutlier)));
  CHECK(n2.empty());
  CHECK(a2.size() == 5);
  auto [n3, a3] = split_by_verdict(ds, report_of({Verdict::Normal, Verdict::RuleOutlier, Verdict::Normal,
                                                  Verdict::MorphologyOutlier, Verdict::Normal}));
  CHECK(n3.size() == 3);
  CHECK(a3.size() == 2);
  CHECK(a3.points[0].wind_speed == 5.0);
  CHECK(a3.rows[1] == std::vector<std::string>{"7", "0"});
  CHECK_THROWS_AS(split_by_verdict(ds, report_of({Verdict::Normal})), Error);
}

TEST_CASE("property: split_by_verdict keeps every index exactly once") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset ds;
    OutlierReport report;
    for (int i = 0; i < 40; ++i) {
      ds.points.push_back({double(trial * 100 + i), 1.0, std::nullopt, std::nullopt});
      report.verdicts.push_back(kAllVerdicts[pick(rng)]);
    }
    auto [normal, anomalous] = split_by_verdict(ds, report);
    CHECK(normal.size() + anomalous.size() == ds.size());
    std::vector<int> seen(40, 0);
    for (const auto* part : {&normal, &anomalous})
      for (const auto& p : part->points) ++seen[static_cast<int>(*p.wind_speed) - trial * 100];
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("property: write then read preserves finite values bit-exactly") {
  const auto dir = scratch_dir("roundtrip");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(0.0, 30.0), p(-50.0, 2100.0);
  Dataset ds;
  for (int i = 0; i < 500; ++i)
    ds.points.push_back({v(rng), p(rng), std::nullopt, i % 3 ? Label::Normal : Label::Outlier});
  write_dataset(ds, dir / "d.csv");
  const auto back = read_csv(dir / "d.csv");
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.points[i].wind_speed == ds.points[i].wind_speed);
    CHECK(back.points[i].power == ds.points[i].power);
    CHECK(back.points[i].label == ds.points[i].label);
  }

  // The report CSV echoes source cells, so a second read sees the same numbers.
  OutlierReport all_normal;
  all_normal.verdicts.assign(back.size(), Verdict::Normal);
  write_report(all_normal, back, dir / "r.csv", dir / "s.json");
  const auto again = read_csv(dir / "r.csv");
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(again.points[i].power == ds.points[i].power);
}
