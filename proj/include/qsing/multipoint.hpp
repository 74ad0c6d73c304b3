#pragma once

#include <cstddef>
#include <vector>

#include "qsing/linalg.hpp"

namespace qsing {

/// Unordered Q-tuple of vectors in R^n. The storage order carries no meaning.
class MultiPoint {
public:
  MultiPoint() = default;
  explicit MultiPoint(std::vector<Point> values);
  /// Q copies of p.
  static MultiPoint repeated(const Point& p, std::size_t q);

  std::size_t q() const { return values_.size(); }
  std::size_t n() const { return n_; }
  const std::vector<Point>& values() const { return values_; }
  const Point& operator[](std::size_t i) const { return values_[i]; }

  /// |T|^2 = sum_i |P_i|^2.
  double squared_norm() const;
  double norm() const;

private:
  std::vector<Point> values_;
  std::size_t n_ = 0;
};

/// sigma with b[sigma[i]] matched to a[i], minimizing sum |a_i - b_sigma(i)|^2.
std::vector<std::size_t> optimal_matching(const MultiPoint& a, const MultiPoint& b);

/// Same, forced through the Hungarian solver (exposed for cross-checks).
std::vector<std::size_t> hungarian_matching(const MultiPoint& a, const MultiPoint& b);

double metric_distance(const MultiPoint& a, const MultiPoint& b);

Point eta(const MultiPoint& a);
MultiPoint balance(const MultiPoint& a);

struct ClusterSplit {
  std::vector<MultiPoint> parts;
  double separation = 0.0; // +inf when there is a single part
};

/// Single-linkage partition at threshold delta; parts listed by first occurrence.
ClusterSplit cluster_split(const MultiPoint& a, double delta);

} // namespace qsing
