#include "qsing/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsing/errors.hpp"

namespace qsing {

namespace {

std::vector<RadialKernel> functional_kernels(const WeightProfile& phi, double r) {
  std::vector<double> breaks;
  for (double t : phi.breakpoints())
    if (t < 1.0) breaks.push_back(t * r);
  RadialKernel k_phi{[phi, r](double s) { return phi.phi(s / r); }, breaks, r};
  RadialKernel k_psi{[phi, r](double s) { return s > 0.0 ? -phi.dphi(s / r) / s : 0.0; }, breaks,
                     r};
  return {std::move(k_phi), std::move(k_psi)};
}

void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("radius must be positive and finite");
}

struct Values {
  double D, H, E, P;
  std::size_t nodes, skipped;
};

Values raw_functionals(const AnalyticField& f, const WeightProfile& phi,
                       std::span<const double> x, double r, const QuadratureScheme& q) {
  const auto k = integrate_kernels(f, x, functional_kernels(phi, r), q);
  return {2.0 * k.sums[0][kDu2], k.sums[1][kU2], k.sums[1][kRadial2], k.sums[1][kPairing] / r,
          k.nodes, k.skipped};
}

double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) / scale;
}

} // namespace

SmoothedFunctionals smoothed_functionals(const AnalyticField& f, const WeightProfile& phi,
                                         std::span<const double> x, double r,
                                         const QuadratureScheme& q, bool estimate_error) {
  check_radius(r);
  const Values v = raw_functionals(f, phi, x, r, q);
  SmoothedFunctionals out;
  out.D = v.D;
  out.H = v.H;
  out.E = v.E;
  out.P = v.P;
  out.nodes = v.nodes;
  out.skipped = v.skipped;
  if (estimate_error) {
    const Values c = raw_functionals(f, phi, x, r, q.coarse());
    out.D_err = std::abs(v.D - c.D);
    out.H_err = std::abs(v.H - c.H);
    out.E_err = std::abs(v.E - c.E);
    out.P_err = std::abs(v.P - c.P);
  }
  return out;
}

double degenerate_height_tolerance(const AnalyticField& f, double r) {
  const double mass = f.q() * f.base().coefficient_mass();
  const double power = static_cast<double>(f.m()) - 1.0 + 2.0 * f.base().alpha_max();
  return 1e-14 * mass * std::pow(r, power);
}

double dirichlet_D(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
                   double r, const QuadratureScheme& q) {
  return smoothed_functionals(f, phi, x, r, q, false).D;
}

double height_H(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
                double r, const QuadratureScheme& q) {
  const auto v = smoothed_functionals(f, phi, x, r, q, false);
  if (v.H <= degenerate_height_tolerance(f, r))
    throw DegenerateHeightError("height vanishes on the annulus", v.D, v.H);
  return v.H;
}

double energy_E(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
                double r, const QuadratureScheme& q) {
  return smoothed_functionals(f, phi, x, r, q, false).E;
}

FrequencyReport frequency_I(const AnalyticField& f, const WeightProfile& phi,
                            std::span<const double> x, double r, const QuadratureScheme& q) {
  check_radius(r);
  const Values v = raw_functionals(f, phi, x, r, q);
  if (v.H <= degenerate_height_tolerance(f, r))
    throw DegenerateHeightError("height vanishes on the annulus; frequency undefined", v.D, v.H);
  const Values c = raw_functionals(f, phi, x, r, q.coarse());
  FrequencyReport rep;
  rep.x.assign(x.begin(), x.end());
  rep.r = r;
  rep.D = v.D;
  rep.H = v.H;
  rep.E = v.E;
  rep.I = r * v.D / v.H;
  rep.est_error = c.H > 0.0 ? std::abs(rep.I - r * c.D / c.H) : std::abs(rep.I);
  rep.skipped_nodes = v.skipped;
  if (v.skipped > 0 && v.nodes > 0)
    rep.est_error += rep.I * static_cast<double>(v.skipped) / static_cast<double>(v.nodes);
  return rep;
}

double pinch_W(const AnalyticField& f, const WeightProfile& phi, std::span<const double> x,
               double s, double r, const QuadratureScheme& q) {
  check_radius(s);
  if (s > r) throw InputError("pinching needs s <= r");
  if (s == r) return 0.0;
  return frequency_I(f, phi, x, r, q).I - frequency_I(f, phi, x, s, q).I;
}

double log_frequency_integral(const AnalyticField& f, const WeightProfile& phi,
                              std::span<const double> x, double s, double r,
                              const QuadratureScheme& q) {
  check_radius(s);
  if (s > r) throw InputError("integral needs s <= r");
  if (s == r) return 0.0;
  const GaussRule g = gauss_legendre(8);
  QuadratureScheme inner = q;
  auto I_at = [&](double u) {
    const double t = std::exp(u);
    const auto v = raw_functionals(f, phi, x, t, inner);
    if (v.H <= degenerate_height_tolerance(f, t))
      throw DegenerateHeightError("height vanishes inside the doubling range", v.D, v.H);
    return t * v.D / v.H;
  };
  auto panel = [&](double a, double b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      sum += g.weights[i] * I_at(a + (b - a) * g.nodes[i]);
    return sum * (b - a);
  };
  std::function<double(double, double, double, int)> adapt = [&](double a, double b,
                                                                 double whole, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = panel(a, mid);
    const double right = panel(mid, b);
    if (depth >= 6 || std::abs(left + right - whole) <= 1e-10 * std::max(1.0, std::abs(whole)))
      return left + right;
    return adapt(a, mid, left, depth + 1) + adapt(mid, b, right, depth + 1);
  };
  // I(x, t) has kinks where the branch point crosses a kernel breakpoint.
  const double a = std::log(s), b = std::log(r);
  std::vector<double> cuts{a};
  if (f.q() >= 2) {
    const double d = std::abs(f.planar_coordinate(x));
    std::vector<double> inner_cuts;
    for (double bp : phi.breakpoints())
      if (bp > 0.0 && d > 0.0) inner_cuts.push_back(std::log(d / bp));
    std::sort(inner_cuts.begin(), inner_cuts.end());
    for (double c : inner_cuts)
      if (c > cuts.back() + 1e-9 && c < b - 1e-9) cuts.push_back(c);
  }
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adapt(cuts[i], cuts[i + 1], panel(cuts[i], cuts[i + 1]), 0);
  return total;
}

double doubling_residual(const AnalyticField& f, const WeightProfile& phi,
                         std::span<const double> x, double s, double r,
                         const QuadratureScheme& q) {
  check_radius(s);
  if (s > r) throw InputError("doubling needs s <= r");
  if (s == r) return 0.0;
  const double m = static_cast<double>(f.m());
  const double Hs = height_H(f, phi, x, s, q);
  const double Hr = height_H(f, phi, x, r, q);
  const double J = log_frequency_integral(f, phi, x, s, r, q);
  const double lhs = std::pow(s, 1.0 - m) * Hs;
  const double rhs = std::pow(r, 1.0 - m) * Hr * std::exp(-2.0 * J);
  return relative_gap(lhs, rhs);
}

double radial_derivative(const std::function<double(double)>& F, double r, double h) {
  const double g1 = (F(r + h) - F(r - h)) / (2.0 * h);
  const double g2 = (F(r + 0.5 * h) - F(r - 0.5 * h)) / h;
  return (4.0 * g2 - g1) / 3.0;
}

IdentityResiduals identity_residuals(const AnalyticField& f, const WeightProfile& phi,
                                     std::span<const double> x, double r,
                                     const QuadratureScheme& q) {
  check_radius(r);
  const Values v = raw_functionals(f, phi, x, r, q);
  if (v.H <= degenerate_height_tolerance(f, r))
    throw DegenerateHeightError("height vanishes on the annulus", v.D, v.H);
  const double h = 0.01 * r;
  const Values p1 = raw_functionals(f, phi, x, r + h, q);
  const Values m1 = raw_functionals(f, phi, x, r - h, q);
  const Values p2 = raw_functionals(f, phi, x, r + 0.5 * h, q);
  const Values m2 = raw_functionals(f, phi, x, r - 0.5 * h, q);
  auto richardson = [&](double Values::*field) {
    const double g1 = (p1.*field - m1.*field) / (2.0 * h);
    const double g2 = (p2.*field - m2.*field) / h;
    return (4.0 * g2 - g1) / 3.0;
  };
  const double m = static_cast<double>(f.m());
  IdentityResiduals out;
  out.D = v.D;
  out.H = v.H;
  out.E = v.E;
  out.pairing = relative_gap(v.D, v.P);
  out.dirichlet_derivative =
      relative_gap(richardson(&Values::D), (m - 2.0) / r * v.D + 2.0 / (r * r) * v.E);
  out.height_derivative = relative_gap(richardson(&Values::H), (m - 1.0) / r * v.H + 2.0 * v.D);
  const double he = v.H * v.E;
  out.cauchy_schwarz = he > 0.0 ? (he - r * r * v.D * v.D) / he : 0.0;
  return out;
}

bool FrequencyProfile::nondecreasing_within(double factor) const {
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const double drop = reports[i].I - reports[i - 1].I;
    const double err = std::max(reports[i].est_error, reports[i - 1].est_error);
    if (drop < -factor * err) return false;
  }
  return true;
}

FrequencyProfile frequency_profile(const AnalyticField& f, const WeightProfile& phi,
                                   std::span<const double> x, const std::vector<double>& radii,
                                   const QuadratureScheme& q) {
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw InputError("profile radii must be sorted ascending");
  FrequencyProfile out;
  out.min_increment = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    out.reports.push_back(frequency_I(f, phi, x, r, q));
    const std::size_t n = out.reports.size();
    if (n >= 2)
      out.min_increment = std::min(out.min_increment, out.reports[n - 1].I - out.reports[n - 2].I);
  }
  return out;
}

} // namespace qsing
