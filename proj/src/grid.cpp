#include "qsing/grid.hpp"

#include <algorithm>
#include <cmath>

#include "qsing/errors.hpp"

namespace qsing {

Grid Grid::cube(const Point& center, double half_width, std::size_t count) {
  Grid g;
  for (double c : center) {
    g.lower.push_back(c - half_width);
    g.upper.push_back(c + half_width);
    g.counts.push_back(count);
  }
  g.validate();
  return g;
}

Grid Grid::lattice(const Point& center, double h, std::size_t half_count) {
  return cube(center, h * static_cast<double>(half_count), 2 * half_count + 1);
}

void Grid::validate() const {
  if (counts.empty()) throw InputError("grid needs at least one axis");
  if (lower.size() != counts.size() || upper.size() != counts.size())
    throw InputError("grid bounds and counts disagree in dimension");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) throw InputError("grid axis with zero nodes");
    if (!(upper[i] >= lower[i])) throw InputError("grid upper bound below lower bound");
  }
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (auto c : counts) n *= c;
  return n;
}

double Grid::spacing(std::size_t axis) const {
  return counts[axis] > 1 ? (upper[axis] - lower[axis]) / static_cast<double>(counts[axis] - 1)
                          : 0.0;
}

double Grid::max_spacing() const {
  double h = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) h = std::max(h, spacing(i));
  return h;
}

Point Grid::node(std::size_t flat) const {
  Point p(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    const std::size_t idx = flat % counts[i];
    flat /= counts[i];
    p[i] = counts[i] > 1 ? lower[i] + static_cast<double>(idx) * spacing(i)
                         : 0.5 * (lower[i] + upper[i]);
  }
  return p;
}

Grid Grid::refined(std::size_t factor) const {
  if (factor == 0) throw InputError("refinement factor must be >= 1");
  Grid g = *this;
  for (auto& c : g.counts)
    if (c > 1) c = (c - 1) * factor + 1;
  return g;
}

Grid Grid::expanded(double margin) const {
  Grid g = *this;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double h = spacing(i);
    if (h == 0.0) continue;
    const auto extra = static_cast<std::size_t>(std::ceil(margin / h - 1e-9));
    g.lower[i] -= static_cast<double>(extra) * h;
    g.upper[i] += static_cast<double>(extra) * h;
    g.counts[i] += 2 * extra;
  }
  return g;
}

double q_point_tolerance(const AnalyticField& f, double radius) {
  const auto& terms = f.base().terms();
  if (terms.empty()) return 0.0;
  const double amin = f.base().alpha_min();
  double c2 = 0.0;
  for (const auto& t : terms)
    if (static_cast<double>(t.p) / f.q() == amin) c2 += std::norm(t.c);
  return std::sqrt(f.q() * c2) * std::pow(radius, amin);
}

std::vector<Point> detect_q_points(const AnalyticField& f, const Grid& g, double tol) {
  g.validate();
  if (g.dim() != f.m()) throw InputError("grid dimension does not match field");
  const std::size_t n = g.size();
  std::vector<char> hit(n, 0);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    hit[static_cast<std::size_t>(i)] = is_q_point(f, g.node(static_cast<std::size_t>(i)), tol);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i)
    if (hit[i]) out.push_back(g.node(i));
  return out;
}

} // namespace qsing
