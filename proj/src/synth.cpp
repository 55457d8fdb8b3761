#include "windsweep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "windsweep/error.hpp"
#include "windsweep/random.hpp"

namespace windsweep {

double ideal_curve(double v, const TurbineParams& t, double rated_speed) {
  if (v < t.cut_in_speed || v > t.cut_off_speed) return 0.0;
  if (v >= rated_speed) return t.rated_power;
  const double x = (v - t.cut_in_speed) / (rated_speed - t.cut_in_speed);
  return t.rated_power * x * x * x;
}

void SynthConfig::validate() const {
  turbine.validate();
  if (n_points == 0) throw InvalidConfig("synth: n_points must be positive");
  if (!(rated_speed > turbine.cut_in_speed && rated_speed <= turbine.cut_off_speed))
    throw InvalidConfig("synth: rated speed must lie in (cut_in, cut_off]");
  if (!(noise_sd >= 0.0)) throw InvalidConfig("synth: noise_sd must be >= 0");
  if (!(dispersive_fraction >= 0.0 && stacked_fraction >= 0.0 &&
        dispersive_fraction + stacked_fraction < 1.0))
    throw InvalidConfig("synth: outlier fractions must be >= 0 and sum below 1");
  if (!(weibull_shape > 0.0 && weibull_scale > 0.0))
    throw InvalidConfig("synth: Weibull parameters must be positive");
  if (stacked_fraction > 0.0 && stacked_bands.empty())
    throw InvalidConfig("synth: stacked outliers requested but no bands configured");
}

namespace {

constexpr int kMaxAttempts = 100000;

class Generator {
 public:
  explicit Generator(const SynthConfig& c) : cfg_(c), rng_(c.seed) {}

  double speed_max() const { return cfg_.turbine.cut_off_speed + 2.0; }
  double ideal(double v) const { return ideal_curve(v, cfg_.turbine, cfg_.rated_speed); }
  bool separated(double v, double p) const {
    return std::abs(p - ideal(v)) >= separation_margin(cfg_);
  }

  ScadaPoint normal() {
    std::weibull_distribution<double> weibull(cfg_.weibull_shape, cfg_.weibull_scale);
    double v;
    do {
      v = weibull(rng_);
    } while (!(v > cfg_.turbine.cut_in_speed && v <= cfg_.turbine.cut_off_speed));

    // Truncated at zero: a running turbine never reports exactly zero power.
    std::normal_distribution<double> noise(ideal(v), cfg_.noise_sd);
    double p;
    do {
      p = noise(rng_);
    } while (!(p > 0.0));
    return {v, p, std::nullopt, Label::Normal};
  }

  ScadaPoint dispersive() {
    std::uniform_real_distribution<double> vs(0.0, speed_max());
    std::uniform_real_distribution<double> ps(0.0, cfg_.turbine.rated_power);
    for (int i = 0; i < kMaxAttempts; ++i) {
      const double v = vs(rng_), p = ps(rng_);
      if (separated(v, p)) return {v, p, std::nullopt, Label::Outlier};
    }
    throw InvalidConfig("synth: no room for dispersive outliers at this noise level");
  }

  ScadaPoint stacked(const StackedBand& band) {
    std::uniform_real_distribution<double> vs(band.v_low, band.v_high);
    std::uniform_real_distribution<double> ps(0.0, 1.0);
    for (int i = 0; i < kMaxAttempts; ++i) {
      const double v = vs(rng_);
      // 1 - u lies in (0, 1], keeping the band strictly above its level.
      const double p = band.level + (1.0 - ps(rng_)) * band.thickness;
      if (separated(v, p)) return {v, p, std::nullopt, Label::Outlier};
    }
    throw InvalidConfig("synth: stacked band is infeasible (too close to the power curve)");
  }

  Rng& rng() { return rng_; }

 private:
  const SynthConfig& cfg_;
  Rng rng_;
};

void check_band(const StackedBand& b, const SynthConfig& c) {
  const bool inside = b.v_low >= 0.0 && b.v_high >= b.v_low && b.v_high <= c.turbine.cut_off_speed + 2.0 &&
                      b.level >= 0.0 && b.thickness > 0.0 &&
                      b.level + b.thickness <= c.turbine.rated_power;
  if (!inside) throw InvalidConfig("synth: stacked band lies outside the speed-power box");
}

}  // namespace

Dataset generate(const SynthConfig& config) {
  config.validate();
  for (const auto& b : config.stacked_bands) check_band(b, config);

  const auto n = config.n_points;
  const auto n_disp = static_cast<std::size_t>(std::llround(config.dispersive_fraction * static_cast<double>(n)));
  const auto n_stack = static_cast<std::size_t>(std::llround(config.stacked_fraction * static_cast<double>(n)));
  if (n_disp + n_stack > n) throw InvalidConfig("synth: outlier counts exceed n_points");

  Generator gen(config);
  Dataset ds;
  ds.name = "synthetic";
  ds.points.reserve(n);
  for (std::size_t i = 0; i < n - n_disp - n_stack; ++i) ds.points.push_back(gen.normal());
  for (std::size_t i = 0; i < n_disp; ++i) ds.points.push_back(gen.dispersive());
  for (std::size_t i = 0; i < n_stack; ++i)
    ds.points.push_back(gen.stacked(config.stacked_bands[i % config.stacked_bands.size()]));
  std::shuffle(ds.points.begin(), ds.points.end(), gen.rng());
  return ds;
}

}  // namespace windsweep
