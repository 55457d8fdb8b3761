#include "windsweep/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "windsweep/csv.hpp"
#include "windsweep/error.hpp"

namespace windsweep {

namespace {

constexpr const char* kVersion = "1.0.0";

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::string_view name) {
  // Last match wins so re-processed reports pick up the newest column.
  for (std::size_t i = header.size(); i-- > 0;) {
    if (csv::trim(header[i]) == name) return i;
  }
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view cell, std::size_t line_no) {
  const auto text = csv::trim(cell);
  if (text.empty()) return std::nullopt;
  if (iequals(text, "normal") || text == "0") return Label::Normal;
  if (iequals(text, "outlier") || text == "1") return Label::Outlier;
  throw FormatError("line " + std::to_string(line_no) + ": unrecognized label '" +
                    std::string(text) + "'");
}

}  // namespace

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view label_name(Label label) {
  return label == Label::Normal ? "normal" : "outlier";
}

bool Dataset::has_labels() const {
  return std::any_of(points.begin(), points.end(),
                     [](const ScadaPoint& p) { return p.label.has_value(); });
}

void TurbineParams::validate() const {
  if (!(cut_in_speed > 0.0) || !(cut_off_speed > cut_in_speed))
    throw InvalidConfig("turbine: require 0 < cut_in_speed < cut_off_speed");
  if (!(rated_power > 0.0)) throw InvalidConfig("turbine: rated_power must be positive");
}

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Normal: return "normal";
    case Verdict::RuleOutlier: return "rule";
    case Verdict::MissingOrDuplicate: return "missing_dup";
    case Verdict::RegressionOutlier: return "regression";
    case Verdict::MorphologyOutlier: return "morphology";
  }
  return "normal";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  text = csv::trim(text);
  for (Verdict v : kAllVerdicts) {
    if (iequals(text, verdict_name(v))) return v;
  }
  return std::nullopt;
}

int verdict_rank(Verdict v) {
  switch (v) {
    case Verdict::Normal: return 0;
    case Verdict::MorphologyOutlier: return 1;
    case Verdict::RegressionOutlier: return 2;
    case Verdict::RuleOutlier: return 3;
    case Verdict::MissingOrDuplicate: return 4;
  }
  return 0;
}

std::map<Verdict, std::size_t> OutlierReport::counts() const {
  std::map<Verdict, std::size_t> out;
  for (Verdict v : verdicts) ++out[v];
  return out;
}

bool MissingSentinels::is_missing(std::string_view cell) const {
  const auto text = csv::trim(cell);
  for (const auto& token : tokens) {
    if (iequals(text, token)) return true;
  }
  if (auto value = csv::parse_double(text)) {
    if (!std::isfinite(*value)) return true;
    return std::find(values.begin(), values.end(), *value) != values.end();
  }
  return false;
}

Dataset read_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_csv(in, schema, path.stem().string());
}

Dataset read_csv(std::istream& in, const CsvSchema& schema, std::string name) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty file: header row required");

  Dataset ds;
  ds.name = std::move(name);
  ds.columns = csv::split_record(line);

  const auto speed_col = find_column(ds.columns, schema.speed_column);
  const auto power_col = find_column(ds.columns, schema.power_column);
  if (!speed_col) throw FormatError("missing wind speed column '" + schema.speed_column + "'");
  if (!power_col) throw FormatError("missing power column '" + schema.power_column + "'");
  const auto label_col = find_column(ds.columns, schema.label_column);
  const auto time_col = find_column(ds.columns, schema.timestamp_column);

  auto numeric = [&](const std::string& cell) -> std::optional<double> {
    if (schema.missing.is_missing(cell)) return std::nullopt;
    auto v = csv::parse_double(cell);
    if (v && !std::isfinite(*v)) return std::nullopt;
    return v;
  };

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty() || csv::trim(line) == "\r") continue;
    auto cells = csv::split_record(line);
    cells.resize(std::max(cells.size(), ds.columns.size()));

    ScadaPoint p;
    p.wind_speed = numeric(cells[*speed_col]);
    p.power = numeric(cells[*power_col]);
    if (time_col && !csv::trim(cells[*time_col]).empty())
      p.timestamp = std::string(csv::trim(cells[*time_col]));
    if (label_col) p.label = parse_label(cells[*label_col], line_no);

    ds.points.push_back(std::move(p));
    ds.rows.push_back(std::move(cells));
  }
  if (ds.points.empty()) throw FormatError("no data rows");
  return ds;
}

namespace {

std::vector<std::string> generated_header(const Dataset& ds) {
  std::vector<std::string> header{"wind_speed", "power"};
  const bool has_time = std::any_of(ds.points.begin(), ds.points.end(),
                                    [](const ScadaPoint& p) { return p.timestamp.has_value(); });
  if (has_time) header.emplace_back("timestamp");
  if (ds.has_labels()) header.emplace_back("label");
  return header;
}

std::vector<std::string> generated_row(const ScadaPoint& p, const std::vector<std::string>& header) {
  std::vector<std::string> row;
  row.reserve(header.size());
  auto num = [](const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string("NaN");
  };
  row.push_back(num(p.wind_speed));
  row.push_back(num(p.power));
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c] == "timestamp") row.push_back(p.timestamp.value_or(""));
    else row.emplace_back(p.label ? label_name(*p.label) : "");
  }
  return row;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  const auto header = generated_header(dataset);
  csv::write_record(out, header);
  for (const auto& p : dataset.points) csv::write_record(out, generated_row(p, header));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_report_csv(const OutlierReport& report, const Dataset& dataset, std::ostream& out) {
  if (report.size() != dataset.size())
    throw Error("report has " + std::to_string(report.size()) + " verdicts for " +
                std::to_string(dataset.size()) + " points");

  auto header = dataset.has_raw_rows() ? dataset.columns : generated_header(dataset);
  const auto width = header.size();
  header.emplace_back("verdict");
  csv::write_record(out, header);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto row = dataset.has_raw_rows() ? dataset.rows[i] : generated_row(dataset.points[i], header);
    row.resize(width);
    row.emplace_back(verdict_name(report.verdicts[i]));
    csv::write_record(out, row);
  }
}

nlohmann::json summary_json(const OutlierReport& report, const nlohmann::json& metrics) {
  nlohmann::json counts = nlohmann::json::object();
  const auto tally = report.counts();
  for (Verdict v : kAllVerdicts) {
    auto it = tally.find(v);
    counts[std::string(verdict_name(v))] = it == tally.end() ? 0 : it->second;
  }
  counts["total"] = report.size();
  if (!report.fold_flag_counts.empty()) counts["stage2_fold_flags"] = report.fold_flag_counts;

  nlohmann::json j;
  j["version"] = kVersion;
  j["params"] = report.params;
  j["counts"] = std::move(counts);
  j["timings_ms"] = report.timings_ms ? *report.timings_ms : nlohmann::json(nullptr);
  j["metrics"] = metrics.is_null() ? nlohmann::json::object() : metrics;
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  return j;
}

void write_report(const OutlierReport& report, const Dataset& dataset,
                  const std::filesystem::path& csv_path,
                  const std::filesystem::path& summary_path, const nlohmann::json& metrics) {
  // Render first so a length mismatch never leaves a partial file behind.
  std::ostringstream body;
  write_report_csv(report, dataset, body);
  {
    auto out = open_for_write(csv_path);
    out << body.str();
    if (!out) throw IoError("write failed for '" + csv_path.string() + "'");
  }
  auto out = open_for_write(summary_path);
  out << summary_json(report, metrics).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + summary_path.string() + "'");
}

std::pair<Dataset, Dataset> split_by_verdict(const Dataset& dataset, const OutlierReport& report) {
  if (report.size() != dataset.size())
    throw Error("split_by_verdict: report/dataset length mismatch");

  Dataset normal, anomalous;
  normal.name = dataset.name + "_normal";
  anomalous.name = dataset.name + "_anomalous";
  normal.columns = anomalous.columns = dataset.columns;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    Dataset& target = is_outlier(report.verdicts[i]) ? anomalous : normal;
    target.points.push_back(dataset.points[i]);
    if (dataset.has_raw_rows()) target.rows.push_back(dataset.rows[i]);
  }
  return {std::move(normal), std::move(anomalous)};
}

}  // namespace windsweep
