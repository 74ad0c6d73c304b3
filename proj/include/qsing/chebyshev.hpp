#pragma once

#include <functional>
#include <vector>

namespace qsing {

/// Barycentric interpolation on [a, b] at Chebyshev-Lobatto points.
/// With cosine_map, the points live in v where x = a + (b - a)(1 - cos(pi v)) / 2,
/// which keeps functions with square-root edges at a and b analytic.
class ChebyshevInterpolant {
public:
  ChebyshevInterpolant(double a, double b, int nodes, const std::function<double(double)>& F,
                       bool cosine_map = false);

  double operator()(double x) const;
  double lower() const { return a_; }
  double upper() const { return b_; }

private:
  double a_, b_;
  bool cosine_map_;
  std::vector<double> t_, f_, w_;
};

} // namespace qsing
