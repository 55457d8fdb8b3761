#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace windsweep {

enum class Label { Normal, Outlier };

std::string_view label_name(Label label);

/// One SCADA record. An absent optional means the cell was missing or
/// unparseable, which is distinct from a recorded 0.0.
struct ScadaPoint {
  std::optional<double> wind_speed;  // m/s
  std::optional<double> power;       // kW
  std::optional<std::string> timestamp;
  std::optional<Label> label;

  bool complete() const { return wind_speed.has_value() && power.has_value(); }
};

/// Points in source-file order; the 0-based position is the point identity.
/// `columns`/`rows` keep the raw source cells so reports can echo them; they
/// are empty for generated datasets.
struct Dataset {
  std::string name;
  std::vector<ScadaPoint> points;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_raw_rows() const { return !rows.empty(); }
  /// True when at least one point carries a ground-truth label.
  bool has_labels() const;
};

struct TurbineParams {
  double cut_in_speed = 3.0;    // m/s
  double cut_off_speed = 25.0;  // m/s
  double rated_power = 2000.0;  // kW

  /// Throws InvalidConfig unless 0 < cut_in < cut_off and rated_power > 0.
  void validate() const;
};

enum class Verdict { Normal, RuleOutlier, MissingOrDuplicate, RegressionOutlier, MorphologyOutlier };

inline constexpr Verdict kAllVerdicts[] = {Verdict::Normal, Verdict::RuleOutlier,
                                           Verdict::MissingOrDuplicate,
                                           Verdict::RegressionOutlier,
                                           Verdict::MorphologyOutlier};

/// Wire names used in report CSVs: normal, rule, missing_dup, regression, morphology.
std::string_view verdict_name(Verdict verdict);
std::optional<Verdict> parse_verdict(std::string_view text);

inline bool is_outlier(Verdict v) { return v != Verdict::Normal; }

/// Precedence rank; the higher rank wins when two stages disagree.
int verdict_rank(Verdict v);

/// Keeps the higher-precedence verdict.
inline Verdict merge_verdict(Verdict current, Verdict candidate) {
  return verdict_rank(candidate) > verdict_rank(current) ? candidate : current;
}

struct OutlierReport {
  std::vector<Verdict> verdicts;
  nlohmann::json params = nlohmann::json::object();
  /// Points flagged by each stage-2 fold before consensus (empty for single pass).
  std::vector<std::size_t> fold_flag_counts;
  std::optional<nlohmann::json> timings_ms;
  std::vector<std::string> warnings;

  std::size_t size() const { return verdicts.size(); }
  std::map<Verdict, std::size_t> counts() const;
};

struct MissingSentinels {
  /// Compared case-insensitively after trimming. The empty token covers blank cells.
  std::vector<std::string> tokens{"", "nan"};
  std::vector<double> values{-9999.0};

  bool is_missing(std::string_view cell) const;
};

struct CsvSchema {
  std::string speed_column = "wind_speed";
  std::string power_column = "power";
  /// Optional columns; used only when present in the header.
  std::string label_column = "label";
  std::string timestamp_column = "timestamp";
  MissingSentinels missing;
};

Dataset read_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
Dataset read_csv(std::istream& in, const CsvSchema& schema, std::string name);

/// Writes wind_speed,power[,timestamp][,label] with round-trip precision.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Summary object {version, params, counts, timings_ms, metrics}.
nlohmann::json summary_json(const OutlierReport& report, const nlohmann::json& metrics = nullptr);

/// Writes the report CSV (source columns + `verdict`) and the JSON summary.
void write_report(const OutlierReport& report, const Dataset& dataset,
                  const std::filesystem::path& csv_path,
                  const std::filesystem::path& summary_path,
                  const nlohmann::json& metrics = nullptr);
void write_report_csv(const OutlierReport& report, const Dataset& dataset, std::ostream& out);

/// Returns (U_n, U_a). Raw rows, if any, follow their points.
std::pair<Dataset, Dataset> split_by_verdict(const Dataset& dataset, const OutlierReport& report);

/// Case-insensitive ASCII comparison.
bool iequals(std::string_view a, std::string_view b);

}  // namespace windsweep
