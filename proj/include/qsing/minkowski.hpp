#pragma once

#include <cstddef>
#include <vector>

#include "qsing/field.hpp"
#include "qsing/grid.hpp"

namespace qsing {

struct MinkowskiRecord {
  double rho = 0.0;
  std::size_t cells = 0; // grid nodes within rho of a detected Q-point
  double volume = 0.0;   // cells times the cell volume
};

struct MinkowskiEstimate {
  std::size_t q_points = 0;
  std::vector<MinkowskiRecord> records; // empty when no Q-point is detected
  double slope = 0.0;                   // least squares of log volume against log rho
};

/// Q-points detected on the grid nodes (tolerance chosen from the grid spacing when tol <= 0),
/// then the volume of their rho-neighbourhood measured on the same grid.
MinkowskiEstimate minkowski_content_estimate(const AnalyticField& f, const Grid& region,
                                             const std::vector<double>& rhos, double tol = 0.0);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qsing
