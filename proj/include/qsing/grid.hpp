#pragma once

#include <cstddef>
#include <vector>

#include "qsing/field.hpp"
#include "qsing/linalg.hpp"

namespace qsing {

/// Tensor grid of nodes lower + i * spacing, i = 0..counts-1 per axis. A single node per
/// axis sits at the midpoint of [lower, upper].
struct Grid {
  Point lower;
  Point upper;
  std::vector<std::size_t> counts;

  /// count^m nodes filling [center - half_width, center + half_width]^m.
  static Grid cube(const Point& center, double half_width, std::size_t count);
  /// Nodes center + i * h with |i| <= half_count on every axis.
  static Grid lattice(const Point& center, double h, std::size_t half_count);

  void validate() const;
  std::size_t dim() const { return counts.size(); }
  std::size_t size() const;
  double spacing(std::size_t axis) const;
  /// Largest axis spacing.
  double max_spacing() const;
  Point node(std::size_t flat) const;
  /// Same box, (counts - 1) * factor + 1 nodes per axis.
  Grid refined(std::size_t factor) const;
  /// Box grown by margin on every side, spacing kept (counts rounded up).
  Grid expanded(double margin) const;
};

/// |u| at planar distance radius from a branch point, to leading order.
double q_point_tolerance(const AnalyticField& f, double radius);

/// Nodes where is_q_point holds, in grid order.
std::vector<Point> detect_q_points(const AnalyticField& f, const Grid& g, double tol);

} // namespace qsing
