#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsing/frequency.hpp"
#include "qsing/grid.hpp"

namespace qsing {

struct EpsilonViolation {
  Point x;
  double I = 0.0;
};

struct EpsilonScanResult {
  std::vector<EpsilonViolation> violations;
  std::size_t evaluated = 0;  // grid points with a detected Q-point within r/4
  std::size_t q_points = 0;   // detected on the fine subgrid
};

/// Grid points x with I(x, r) <= eps although a Q-point lies in B_{r/4}(x). Q-points are
/// detected on the grid refined by refine_factor and grown by r/4.
EpsilonScanResult epsilon_regularity_scan(const AnalyticField& f, const WeightProfile& phi,
                                          const Grid& region, double r, double eps,
                                          const QuadratureScheme& q,
                                          std::size_t refine_factor = 4);

/// x first, then x +- (R j / (n + 1)) e_i axis by axis, truncated to count points.
std::vector<Point> ball_samples(const Point& x, double R, std::size_t count);

struct UniformBoundReport {
  double height_ratio = 0.0;    // max_{y in B_rho(x)} H(y, rho) / H(x, 4 rho)
  double frequency_ratio = 0.0; // max_{y in B_{rho/4}(x)} I(y, rho) / (I(x, 16 rho) + 1)
  std::size_t samples = 0;
};

UniformBoundReport uniform_bound_report(const AnalyticField& f, const WeightProfile& phi,
                                        std::span<const double> x, double rho,
                                        const QuadratureScheme& q, std::size_t samples = 9);

struct PinchingIntegral {
  double defect = 0.0; // int over B_{2r} \ B_{r/4} of sum |Du_i (z-x) - I(x,|z-x|) u_i|^2
  double scale = 0.0;  // int of sum |Du_i (z-x)|^2 over the same annulus, for relative tolerances
  double W = 0.0;      // I(x, 4r) - I(x, r/8)
  double ratio = 0.0;  // defect / W (0 when both vanish, +inf when only W does)
};

/// The homogeneity defect at scale r (r = 1 is the unit-scale statement).
PinchingIntegral pinching_integral(const AnalyticField& f, const WeightProfile& phi,
                                   std::span<const double> x, const QuadratureScheme& q,
                                   double r = 1.0);

struct VariationCheck {
  double numerator = 0.0;   // max |I(z, r) - I(y, r)| / |z - y| over sampled z, y on [x1, x2]
  double denominator = 0.0; // W^{4r}_{r/8}(x1)^{1/2} + W^{4r}_{r/8}(x2)^{1/2}
  double ratio = 0.0;
};

VariationCheck frequency_variation_check(const AnalyticField& f, const WeightProfile& phi,
                                         std::span<const double> x1, std::span<const double> x2,
                                         double r, const QuadratureScheme& q,
                                         std::size_t samples = 5);

} // namespace qsing
