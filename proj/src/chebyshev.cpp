#include "qsing/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsing/errors.hpp"

namespace qsing {

namespace {
constexpr double kPi = std::numbers::pi;
}

ChebyshevInterpolant::ChebyshevInterpolant(double a, double b, int nodes,
                                           const std::function<double(double)>& F,
                                           bool cosine_map)
    : a_(a), b_(b), cosine_map_(cosine_map) {
  if (nodes < 2) throw InputError("interpolant needs at least two nodes");
  if (!(b > a)) throw InputError("interpolant needs a < b");
  for (int j = 0; j < nodes; ++j) {
    const double t = 0.5 * (1.0 - std::cos(kPi * j / (nodes - 1)));
    const double s = cosine_map ? 0.5 * (1.0 - std::cos(kPi * t)) : t;
    t_.push_back(t);
    f_.push_back(F(a + (b - a) * s));
    w_.push_back((j % 2 == 0 ? 1.0 : -1.0) * (j == 0 || j == nodes - 1 ? 0.5 : 1.0));
  }
}

double ChebyshevInterpolant::operator()(double x) const {
  double t = std::clamp((x - a_) / (b_ - a_), 0.0, 1.0);
  if (cosine_map_) t = std::acos(1.0 - 2.0 * t) / kPi;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < t_.size(); ++j) {
    const double d = t - t_[j];
    if (d == 0.0) return f_[j];
    const double c = w_[j] / d;
    num += c * f_[j];
    den += c;
  }
  return num / den;
}

} // namespace qsing
