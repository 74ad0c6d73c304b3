#include "qsing/weight.hpp"

#include <sstream>

#include "qsing/errors.hpp"
#include "qsing/text_io.hpp"

namespace qsing {

WeightProfile WeightProfile::standard() {
  WeightProfile w;
  w.kind_ = Kind::Standard;
  w.knots_ = {{0.5, 1.0}, {1.0, 0.0}};
  return w;
}

WeightProfile WeightProfile::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw InputError("weight profile needs at least two knots");
  if (knots.front() != std::pair{0.5, 1.0})
    throw InputError("weight profile must start at knot (0.5, 1)");
  if (knots.back() != std::pair{1.0, 0.0})
    throw InputError("weight profile must end at knot (1, 0)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first))
      throw InputError("weight profile knots must be strictly increasing in t");
    if (knots[i].second > knots[i - 1].second)
      throw InputError("weight profile must be nonincreasing");
  }
  WeightProfile w;
  w.kind_ = Kind::PiecewiseLinear;
  w.knots_ = std::move(knots);
  return w;
}

double WeightProfile::phi(double t) const {
  if (t <= knots_.front().first) return 1.0;
  if (t >= 1.0) return 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const auto [t1, v1] = knots_[i];
    if (t < t1) {
      const auto [t0, v0] = knots_[i - 1];
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  }
  return 0.0;
}

double WeightProfile::dphi(double t) const {
  if (t < knots_.front().first || t >= 1.0) return 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const auto [t1, v1] = knots_[i];
    if (t < t1) {
      const auto [t0, v0] = knots_[i - 1];
      return (v1 - v0) / (t1 - t0);
    }
  }
  return 0.0;
}

std::vector<double> WeightProfile::breakpoints() const {
  std::vector<double> b;
  for (const auto& k : knots_) b.push_back(k.first);
  return b;
}

std::string WeightProfile::describe() const {
  if (kind_ == Kind::Standard) return "standard";
  std::ostringstream ss;
  ss << "piecewise_linear";
  for (const auto& [t, v] : knots_) ss << ' ' << format_double(t) << ':' << format_double(v);
  return ss.str();
}

} // namespace qsing
