#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsing/frequency.hpp"
#include "qsing/grid.hpp"
#include "qsing/linalg.hpp"

namespace qsing {

struct DiscreteMeasure {
  std::size_t m = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  DiscreteMeasure() = default;
  DiscreteMeasure(std::size_t dim, std::vector<Point> pts, std::vector<double> w);
  /// Unit weights.
  DiscreteMeasure(std::size_t dim, std::vector<Point> pts);

  void validate() const;
  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  double total_mass() const;
  void add(Point p, double w);
};

/// Atoms with |p - x0| < r0.
DiscreteMeasure restrict_ball(const DiscreteMeasure& mu, std::span<const double> x0, double r0);

struct PlaneFit {
  Point base;                       // barycenter
  std::vector<Point> basis;         // first k eigenvectors (set by beta_k)
  std::vector<double> eigenvalues;  // nonincreasing, clamped at 0
  std::vector<Point> eigenvectors;  // all m, paired with eigenvalues
};

/// Barycenter and eigen-decomposition of b(v, w) = int ((x - xbar).v)((x - xbar).w) dmu.
PlaneFit plane_fit(const DiscreteMeasure& mu);

struct BetaResult {
  Point x0;
  double r0 = 0.0;
  std::size_t k = 0;
  double value = 0.0;
  bool empty = false; // no mass in the ball; value is 0 by convention
  PlaneFit fit;
};

/// r0^{-k-2} times the sum of the m - k smallest eigenvalues of the restricted measure.
BetaResult beta_k(const DiscreteMeasure& mu, std::span<const double> x0, double r0, std::size_t k);

/// r0^{-k-2} min over affine k-planes of int dist(x, L)^2 dmu, searched directly: rotated
/// coordinate planes (all Givens angles) through the barycenter, pattern-searched from
/// `resolution` seeded starts, then barycenter offsets on a grid of `resolution` steps per axis.
double beta_bruteforce(const DiscreteMeasure& mu, std::span<const double> x0, double r0,
                       std::size_t k, std::size_t resolution = 24, std::uint64_t seed = 7);

/// s0, s0/2, ..., count scales.
std::vector<double> dyadic_scales(double s0, std::size_t count);

/// sum over the scales of D^k(x0, s) ln 2. Scales must halve at each step.
double jones_integral(const DiscreteMeasure& mu, std::span<const double> x0, std::size_t k,
                      const std::vector<double>& scales);

struct MeanflatPinching {
  double lhs = 0.0;     // D^{m-2}(x0, r/8)
  double rhs_raw = 0.0; // r^{-(m-2)} sum over atoms in B_{r/8}(x0) of w W^{4r}_{r/8}(x)
  double ratio = 0.0;
  std::size_t atoms = 0;
};

using PinchingFunction = std::function<double(const Point&)>;

MeanflatPinching meanflat_vs_pinching_check(const DiscreteMeasure& mu, std::span<const double> x0,
                                            double r, const PinchingFunction& W);
/// W taken from the field's frequency at radii r/8 and 4r.
MeanflatPinching meanflat_vs_pinching_check(const AnalyticField& f, const WeightProfile& phi,
                                            const DiscreteMeasure& mu,
                                            std::span<const double> x0, double r,
                                            const QuadratureScheme& q);

/// Atoms at grid nodes where is_q_point holds, each of weight h^{m-2} (h the grid spacing).
DiscreteMeasure measure_from_qpoints(const AnalyticField& f, const Grid& g, double tol);

/// One atom per line: m coordinates then the weight. '#' comments.
DiscreteMeasure parse_measure(std::string_view text);
DiscreteMeasure load_measure(const std::string& path);
std::string measure_to_text(const DiscreteMeasure& mu);

} // namespace qsing
