#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "windsweep/dataset.hpp"

namespace windsweep {

/// A dense cluster of stacked outliers: speeds uniform over [v_low, v_high],
/// power uniform over (level, level + thickness].
struct StackedBand {
  double v_low = 6.0;
  double v_high = 14.0;
  double level = 0.0;
  double thickness = 40.0;
};

struct SynthConfig {
  std::size_t n_points = 50000;
  TurbineParams turbine;
  double rated_speed = 12.0;   // m/s
  double noise_sd = 80.0;      // kW, vertical noise on normal points
  double dispersive_fraction = 0.1;
  double stacked_fraction = 0.2;
  std::vector<StackedBand> stacked_bands{StackedBand{}};
  double weibull_shape = 2.0;
  double weibull_scale = 8.0;  // m/s
  std::uint64_t seed = 42;

  void validate() const;
};

/// Zero outside [cut_in, cut_off], a cubic ramp C ((v - v_ci) / (v_r - v_ci))^3
/// up to the rated speed, then flat at rated power.
double ideal_curve(double v, const TurbineParams& turbine, double rated_speed = 12.0);

/// Minimum vertical distance between any generated outlier and the ideal curve.
inline double separation_margin(const SynthConfig& c) { return 3.0 * c.noise_sd; }

/// Labeled dataset: normal points on the noisy ideal curve plus dispersive and
/// stacked outliers, interleaved in random order. Deterministic per seed.
Dataset generate(const SynthConfig& config);

}  // namespace windsweep
