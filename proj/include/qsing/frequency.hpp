#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsing/field.hpp"
#include "qsing/quadrature.hpp"
#include "qsing/weight.hpp"

namespace qsing {

/// D, H, E and the pairing P = -(1/r) int phi'(|y-x|/r) sum d_nu u_i . u_i, each with
/// |fine - coarse| as its error estimate.
struct SmoothedFunctionals {
  double D = 0.0, H = 0.0, E = 0.0, P = 0.0;
  double D_err = 0.0, H_err = 0.0, E_err = 0.0, P_err = 0.0;
  std::size_t nodes = 0;
  std::size_t skipped = 0;
};

SmoothedFunctionals smoothed_functionals(const AnalyticField& f, const WeightProfile& phi,
                                         std::span<const double> x, double r,
                                         const QuadratureScheme& q, bool estimate_error = true);

/// Heights at or below this are treated as zero.
double degenerate_height_tolerance(const AnalyticField& f, double r);

double dirichlet_D(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
                   double r, const QuadratureScheme& q);
/// Throws DegenerateHeightError when the field vanishes on the annulus.
double height_H(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
                double r, const QuadratureScheme& q);
double energy_E(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
                double r, const QuadratureScheme& q);

struct FrequencyReport {
  Point x;
  double r = 0.0;
  double D = 0.0, H = 0.0, E = 0.0, I = 0.0;
  double est_error = 0.0;
  std::size_t skipped_nodes = 0;
};

FrequencyReport frequency_I(const AnalyticField& f, const WeightProfile& phi,
                            std::span<const double> x, double r, const QuadratureScheme& q);

/// I(x, r) - I(x, s).
double pinch_W(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
               double s, double r, const QuadratureScheme& q);

/// Relative gap between s^{1-m} H(s) and r^{1-m} H(r) exp(-2 int_s^r I(t) dt / t).
double doubling_residual(const AnalyticField& f, const WeightProfile& phi,
                         std::span<const double> x, double s, double r,
                         const QuadratureScheme& q);

/// int_s^r I(x, t) dt / t by adaptive Gauss-Legendre in log t.
double log_frequency_integral(const AnalyticField& f, const WeightProfile& phi,
                              std::span<const double> x, double s, double r,
                              const QuadratureScheme& q);

struct IdentityResiduals {
  double pairing = 0.0;            // |D - P| relative
  double dirichlet_derivative = 0.0; // d_r D against (m-2)/r D + 2/r^2 E
  double height_derivative = 0.0;  // d_r H against (m-1)/r H + 2 D
  double cauchy_schwarz = 0.0;     // (H E - r^2 D^2) / (H E); >= 0 up to round-off
  double D = 0.0, H = 0.0, E = 0.0;
};

IdentityResiduals identity_residuals(const AnalyticField& f, const WeightProfile& phi,
                                     std::span<const double> x, double r,
                                     const QuadratureScheme& q);

/// Central difference with one Richardson step: (4 g(h/2) - g(h)) / 3.
double radial_derivative(const std::function<double(double)>& F, double r, double h);

struct FrequencyProfile {
  std::vector<FrequencyReport> reports;
  /// min over consecutive radii of I_{i+1} - I_i (+inf for fewer than two radii).
  double min_increment = 0.0;
  /// True when every consecutive drop is within factor * max(est_error) of the pair.
  bool nondecreasing_within(double factor) const;
};

FrequencyProfile frequency_profile(const AnalyticField& f, const WeightProfile& phi,
                                   std::span<const double> x, const std::vector<double>& radii,
                                   const QuadratureScheme& q);

} // namespace qsing
