#include "windsweep/rules.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "windsweep/error.hpp"

namespace windsweep {

void RuleConfig::validate() const {
  turbine.validate();
  if (!(zero_power_epsilon >= 0.0)) throw InvalidConfig("zero_power_epsilon must be >= 0");
}

bool violates_rules(double v, double p, const RuleConfig& config) {
  const double cut_in = config.turbine.cut_in_speed;
  const bool zero_power = std::abs(p) <= config.zero_power_epsilon;
  if (v < 0.0) return true;
  if (p < 0.0) return true;
  if (v > cut_in && zero_power) return true;
  if (v < cut_in && !zero_power) return true;
  return false;
}

PartialVerdicts apply_rules(const Dataset& dataset, const RuleConfig& config) {
  PartialVerdicts out(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& pt = dataset.points[i];
    if (pt.complete() && violates_rules(*pt.wind_speed, *pt.power, config))
      out[i] = Verdict::RuleOutlier;
  }
  return out;
}

PartialVerdicts detect_missing(const Dataset& dataset) {
  PartialVerdicts out(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset.points[i].complete()) out[i] = Verdict::MissingOrDuplicate;
  }
  return out;
}

namespace {

// Bit patterns, so that 0.0 and -0.0 are distinct keys.
std::string duplicate_key(const ScadaPoint& p, DuplicateKey mode) {
  const auto vb = std::bit_cast<std::uint64_t>(*p.wind_speed);
  const auto pb = std::bit_cast<std::uint64_t>(*p.power);
  std::string key(reinterpret_cast<const char*>(&vb), sizeof vb);
  key.append(reinterpret_cast<const char*>(&pb), sizeof pb);
  if (mode == DuplicateKey::SpeedPowerTimestamp) {
    key.push_back(p.timestamp ? '\x01' : '\x00');
    key += p.timestamp.value_or("");
  }
  return key;
}

}  // namespace

PartialVerdicts detect_duplicates(const Dataset& dataset, const RuleConfig& config) {
  PartialVerdicts out(dataset.size());
  std::unordered_set<std::string> seen;
  seen.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& pt = dataset.points[i];
    if (!pt.complete()) continue;
    if (!seen.insert(duplicate_key(pt, config.duplicate_key)).second)
      out[i] = Verdict::MissingOrDuplicate;
  }
  return out;
}

std::vector<Verdict> run_stage1(const Dataset& dataset, const RuleConfig& config) {
  std::vector<Verdict> verdicts(dataset.size(), Verdict::Normal);
  for (const auto& partial : {apply_rules(dataset, config), detect_missing(dataset),
                              detect_duplicates(dataset, config)}) {
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      if (partial[i]) verdicts[i] = merge_verdict(verdicts[i], *partial[i]);
    }
  }
  return verdicts;
}

}  // namespace windsweep
