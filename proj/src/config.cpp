#include "windsweep/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "windsweep/csv.hpp"
#include "windsweep/error.hpp"

namespace windsweep {

Settings parse_settings(std::istream& in) {
  Settings out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = csv::trim(line);
    if (body.empty() || body == "\r") continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw InvalidConfig("config line " + std::to_string(line_no) + ": expected key=value");
    auto key = std::string(csv::trim(body.substr(0, eq)));
    auto value = std::string(csv::trim(body.substr(eq + 1)));
    if (!value.empty() && value.back() == '\r') value.pop_back();
    if (key.empty()) throw InvalidConfig("config line " + std::to_string(line_no) + ": empty key");
    out[std::move(key)] = std::move(value);
  }
  return out;
}

Settings read_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_settings(in);
}

namespace {

double to_double(const std::string& key, const std::string& value) {
  if (auto v = csv::parse_double(value)) return *v;
  throw InvalidConfig("config: '" + key + "' expects a number, got '" + value + "'");
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  Int out{};
  const auto text = csv::trim(value);
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw InvalidConfig("config: '" + key + "' expects an integer, got '" + value + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (iequals(value, "true") || value == "1" || iequals(value, "yes")) return true;
  if (iequals(value, "false") || value == "0" || iequals(value, "no")) return false;
  throw InvalidConfig("config: '" + key + "' expects true/false, got '" + value + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.emplace_back(csv::trim(item));
  return out;
}

}  // namespace

void apply_pipeline_settings(const Settings& settings, PipelineConfig& c, CsvSchema& schema) {
  for (const auto& [key, value] : settings) {
    if (key == "cut_in") c.rule.turbine.cut_in_speed = to_double(key, value);
    else if (key == "cut_off") c.rule.turbine.cut_off_speed = to_double(key, value);
    else if (key == "rated") c.rule.turbine.rated_power = to_double(key, value);
    else if (key == "zero_power_epsilon") c.rule.zero_power_epsilon = to_double(key, value);
    else if (key == "duplicate_key") {
      if (value == "speed_power") c.rule.duplicate_key = DuplicateKey::SpeedPower;
      else if (value == "speed_power_timestamp") c.rule.duplicate_key = DuplicateKey::SpeedPowerTimestamp;
      else throw InvalidConfig("config: duplicate_key must be speed_power or speed_power_timestamp");
    } else if (key == "k") c.k = to_double(key, value);
    else if (key == "d") c.d = to_int<int>(key, value);
    else if (key == "q") c.q = to_int<int>(key, value);
    else if (key == "folds") c.folds = to_int<int>(key, value);
    else if (key == "n_max") c.ransac.n_max = to_int<int>(key, value);
    else if (key == "c") c.ransac.c = to_double(key, value);
    else if (key == "seed") c.ransac.seed = to_int<std::uint64_t>(key, value);
    else if (key == "strata") c.ransac.strata = to_int<int>(key, value);
    else if (key == "sample_fraction") c.ransac.sample_fraction = to_double(key, value);
    else if (key == "inlier_metric") {
      if (value == "abs") c.ransac.inlier_metric = InlierMetric::Absolute;
      else if (value == "signed") c.ransac.inlier_metric = InlierMetric::Signed;
      else throw InvalidConfig("config: inlier_metric must be abs or signed");
    } else if (key == "me_estimator") {
      if (value == "mean") c.ransac.me_estimator = DeviationEstimator::Mean;
      else if (value == "median") c.ransac.me_estimator = DeviationEstimator::Median;
      else throw InvalidConfig("config: me_estimator must be mean or median");
    } else if (key == "bin_width") c.metrics.bins.bin_width = to_double(key, value);
    else if (key == "min_bin_count") c.metrics.bins.min_bin_count = to_int<std::size_t>(key, value);
    else if (key == "all_points") c.metrics.all_points = to_bool(key, value);
    else if (key == "speed_column") schema.speed_column = value;
    else if (key == "power_column") schema.power_column = value;
    else if (key == "label_column") schema.label_column = value;
    else if (key == "timestamp_column") schema.timestamp_column = value;
    else if (key == "missing_tokens") schema.missing.tokens = split(value, ';');
    else if (key == "missing_values") {
      schema.missing.values.clear();
      for (const auto& v : split(value, ';'))
        if (!v.empty()) schema.missing.values.push_back(to_double(key, v));
    } else {
      throw InvalidConfig("config: unknown key '" + key + "'");
    }
  }
}

std::vector<StackedBand> parse_bands(const std::string& text) {
  std::vector<StackedBand> out;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 4)
      throw InvalidConfig("stacked band '" + item + "' must be v_low:v_high:level:thickness");
    out.push_back({to_double("stacked_bands", parts[0]), to_double("stacked_bands", parts[1]),
                   to_double("stacked_bands", parts[2]), to_double("stacked_bands", parts[3])});
  }
  return out;
}

void apply_synth_settings(const Settings& settings, SynthConfig& c) {
  for (const auto& [key, value] : settings) {
    if (key == "n" || key == "n_points") c.n_points = to_int<std::size_t>(key, value);
    else if (key == "cut_in") c.turbine.cut_in_speed = to_double(key, value);
    else if (key == "cut_off") c.turbine.cut_off_speed = to_double(key, value);
    else if (key == "rated") c.turbine.rated_power = to_double(key, value);
    else if (key == "rated_speed") c.rated_speed = to_double(key, value);
    else if (key == "noise_sd") c.noise_sd = to_double(key, value);
    else if (key == "dispersive_fraction") c.dispersive_fraction = to_double(key, value);
    else if (key == "stacked_fraction") c.stacked_fraction = to_double(key, value);
    else if (key == "stacked_bands") c.stacked_bands = parse_bands(value);
    else if (key == "weibull_shape") c.weibull_shape = to_double(key, value);
    else if (key == "weibull_scale") c.weibull_scale = to_double(key, value);
    else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
    else throw InvalidConfig("config: unknown key '" + key + "'");
  }
}

}  // namespace windsweep
