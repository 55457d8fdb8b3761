#pragma once

#include <span>
#include <vector>

namespace windsweep {

/// Natural cubic spline (zero second derivative at both ends). Evaluation
/// outside [x.front(), x.back()] clamps to the end values.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline() = default;
  /// Requires >= 2 knots with strictly increasing x.
  NaturalCubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double at) const;

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  /// Second derivatives at the knots.
  const std::vector<double>& curvature() const { return m_; }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace windsweep
