#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qsing {

/// Lipschitz nonincreasing cutoff: 1 on [0, 1/2], 0 on [1, inf), linear between knots.
class WeightProfile {
public:
  enum class Kind { Standard, PiecewiseLinear };

  /// 1 on [0, 1/2], 2(1 - t) on [1/2, 1], 0 beyond.
  static WeightProfile standard();
  /// Knots (t, phi(t)), t strictly increasing from 1/2 (value 1) to 1 (value 0), values nonincreasing.
  static WeightProfile piecewise_linear(std::vector<std::pair<double, double>> knots);

  Kind kind() const { return kind_; }
  double phi(double t) const;
  /// Slope of the segment containing t (segments closed on the left).
  double dphi(double t) const;
  /// Knot abscissae; phi is smooth away from them.
  std::vector<double> breakpoints() const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  std::string describe() const;

private:
  Kind kind_ = Kind::Standard;
  std::vector<std::pair<double, double>> knots_;
};

} // namespace qsing
