#pragma once

#include <optional>
#include <vector>

#include "windsweep/dataset.hpp"

namespace windsweep {

enum class DuplicateKey { SpeedPower, SpeedPowerTimestamp };

struct RuleConfig {
  TurbineParams turbine;
  DuplicateKey duplicate_key = DuplicateKey::SpeedPower;
  /// |p| <= zero_power_epsilon counts as "p = 0" for the cut-in rules.
  double zero_power_epsilon = 0.0;

  void validate() const;
};

/// Per-point partial verdict; nullopt means "not flagged by this check".
using PartialVerdicts = std::vector<std::optional<Verdict>>;

/// Physical rules: v < 0, p < 0, (v > v_cut_in and p = 0), (v < v_cut_in and p != 0).
/// Points with a missing value are left to detect_missing.
PartialVerdicts apply_rules(const Dataset& dataset, const RuleConfig& config);

/// True when a complete point violates one of the physical rules.
bool violates_rules(double v, double p, const RuleConfig& config);

PartialVerdicts detect_missing(const Dataset& dataset);

/// Flags every later occurrence of an exactly repeated key; the first is kept.
PartialVerdicts detect_duplicates(const Dataset& dataset, const RuleConfig& config);

/// Merges the three checks with verdict precedence applied.
std::vector<Verdict> run_stage1(const Dataset& dataset, const RuleConfig& config);

}  // namespace windsweep
