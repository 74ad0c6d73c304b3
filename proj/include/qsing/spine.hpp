#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qsing/linalg.hpp"
#include "qsing/oracle.hpp"

namespace qsing {

/// dist(x_i, x_0 + span{x_1 - x_0, ..., x_{i-1} - x_0}) >= rho r for every i >= 1.
bool rho_linearly_independent(const std::vector<Point>& pts, double rho, double r);

struct SpannedPlane {
  AffinePlane plane;
  std::vector<Point> points; // the rho r-linearly independent points, in the order chosen
};

/// Greedy from F[0]: repeatedly adds the point farthest from the current affine hull while
/// that distance is >= rho r. Returns the k-plane once k + 1 points are found.
std::optional<SpannedPlane> spans_k_plane(const std::vector<Point>& F, std::span<const double> x,
                                          double r, double rho, std::size_t k);

/// Largest plane the greedy reaches (dimension < k) when F does not rho r-span a k-plane;
/// F lies within rho r of it (checked). Empty F gives the point {x}.
SpannedPlane tube_fallback(const std::vector<Point>& F, std::span<const double> x, double r,
                           double rho, std::size_t k);

/// Points of V within `extent` of V.base: the base, then for dim V = 1 an even spread over
/// [-extent, extent], otherwise Halton points of the k-ball.
std::vector<Point> plane_samples(const AffinePlane& V, double extent, std::size_t count);

struct SpineConstancy {
  double deviation = 0.0; // max |I(y, r) - I(y', r')| over sampled pairs
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t evaluations = 0;
};

/// Radii spread evenly over [r_lo, r_hi].
SpineConstancy spine_frequency_constancy(const FrequencyOracle& oracle, const AffinePlane& V,
                                         double r_lo, double r_hi, std::size_t points,
                                         std::size_t radii, double extent = 1.0);

} // namespace qsing
