#include "qsing/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsing/chebyshev.hpp"
#include "qsing/errors.hpp"

namespace qsing {

namespace {

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

QuadratureScheme serial_inner(QuadratureScheme q) {
  q.policy = ExecutionPolicy::Serial;
  return q;
}

} // namespace

EpsilonScanResult epsilon_regularity_scan(const AnalyticField& f, const WeightProfile& phi,
                                          const Grid& region, double r, double eps,
                                          const QuadratureScheme& q,
                                          std::size_t refine_factor) {
  region.validate();
  if (region.dim() != f.m()) throw InputError("scan grid dimension does not match field");
  if (!(r > 0.0)) throw InputError("scan radius must be positive");
  EpsilonScanResult out;
  if (f.q() < 2) return out;

  const Grid fine = region.refined(refine_factor).expanded(0.25 * r);
  const double h = fine.max_spacing();
  const double tol = q_point_tolerance(f, 0.5 * h * std::sqrt(static_cast<double>(f.m())));
  const auto qpts = detect_q_points(f, fine, tol);
  out.q_points = qpts.size();
  if (qpts.empty()) return out;

  std::vector<Point> candidates;
  const double reach2 = 0.0625 * r * r;
  for (std::size_t i = 0; i < region.size(); ++i) {
    const Point x = region.node(i);
    for (const auto& p : qpts)
      if (squared_distance(x, p) < reach2) {
        candidates.push_back(x);
        break;
      }
  }
  out.evaluated = candidates.size();

  std::vector<double> values(candidates.size());
  const QuadratureScheme inner = serial_inner(q);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(candidates.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    values[k] = frequency_I(f, phi, candidates[k], r, inner).I;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (values[i] <= eps) out.violations.push_back({candidates[i], values[i]});
  return out;
}

std::vector<Point> ball_samples(const Point& x, double R, std::size_t count) {
  if (count == 0) throw InputError("sampling set is empty");
  std::vector<Point> out{x};
  const std::size_t m = x.size();
  const std::size_t per_axis = (count + 2 * m - 2) / (2 * m);
  for (std::size_t j = 1; j <= per_axis && out.size() < count; ++j)
    for (std::size_t i = 0; i < m && out.size() < count; ++i)
      for (double sign : {1.0, -1.0}) {
        if (out.size() >= count) break;
        Point y = x;
        y[i] += sign * R * static_cast<double>(j) / static_cast<double>(per_axis + 1);
        out.push_back(std::move(y));
      }
  return out;
}

UniformBoundReport uniform_bound_report(const AnalyticField& f, const WeightProfile& phi,
                                        std::span<const double> x, double rho,
                                        const QuadratureScheme& q, std::size_t samples) {
  if (!(rho > 0.0)) throw InputError("rho must be positive");
  const Point xc(x.begin(), x.end());
  const auto ys = ball_samples(xc, rho, samples);
  const auto yq = ball_samples(xc, 0.25 * rho, samples);
  const double H4 = height_H(f, phi, x, 4.0 * rho, q);
  const double I16 = frequency_I(f, phi, x, 16.0 * rho, q).I;
  UniformBoundReport out;
  out.samples = ys.size();
  for (const auto& y : ys)
    out.height_ratio = std::max(out.height_ratio, height_H(f, phi, y, rho, q) / H4);
  for (const auto& y : yq)
    out.frequency_ratio =
        std::max(out.frequency_ratio, frequency_I(f, phi, y, rho, q).I / (I16 + 1.0));
  return out;
}

PinchingIntegral pinching_integral(const AnalyticField& f, const WeightProfile& phi,
                                   std::span<const double> x, const QuadratureScheme& q,
                                   double r) {
  if (!(r > 0.0)) throw InputError("scale must be positive");
  const double lo = 0.25 * r, hi = 2.0 * r;
  const ChebyshevInterpolant I(lo, hi, 24, [&](double s) {
    return frequency_I(f, phi, x, s, q).I;
  });
  auto chi = [lo, hi](double s) { return s >= lo && s < hi ? 1.0 : 0.0; };
  std::vector<RadialKernel> kernels{
      {chi, {lo}, hi},
      {[=](double s) { return chi(s) * I(s); }, {lo}, hi},
      {[=](double s) { return chi(s) * I(s) * I(s); }, {lo}, hi},
  };
  const auto k = integrate_kernels(f, x, kernels, q);
  PinchingIntegral out;
  out.scale = k.sums[0][kRadial2];
  out.defect = k.sums[0][kRadial2] - 2.0 * k.sums[1][kPairing] + k.sums[2][kU2];
  // The expanded square cancels; anything at round-off level is zero.
  if (out.defect <= 1e-12 * out.scale) out.defect = 0.0;
  out.W = pinch_W(f, phi, x, 0.125 * r, 4.0 * r, q);
  out.ratio = safe_ratio(out.defect, out.W);
  return out;
}

VariationCheck frequency_variation_check(const AnalyticField& f, const WeightProfile& phi,
                                         std::span<const double> x1, std::span<const double> x2,
                                         double r, const QuadratureScheme& q,
                                         std::size_t samples) {
  if (x1.size() != x2.size()) throw InputError("points differ in dimension");
  if (!(r > 0.0)) throw InputError("radius must be positive");
  const double gap = distance(x1, x2);
  if (gap > 0.25 * r) throw InputError("variation check needs |x1 - x2| <= r/4");
  if (samples < 2) throw InputError("variation check needs at least two samples");

  VariationCheck out;
  auto root_pinch = [&](std::span<const double> y) {
    return std::sqrt(std::max(0.0, pinch_W(f, phi, y, 0.125 * r, 4.0 * r, q)));
  };
  out.denominator = root_pinch(x1) + root_pinch(x2);
  if (gap == 0.0) return out;

  std::vector<Point> pts;
  std::vector<double> vals;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    Point z(x1.size());
    for (std::size_t d = 0; d < z.size(); ++d) z[d] = x1[d] + t * (x2[d] - x1[d]);
    vals.push_back(frequency_I(f, phi, z, r, q).I);
    pts.push_back(std::move(z));
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      out.numerator =
          std::max(out.numerator, std::abs(vals[i] - vals[j]) / distance(pts[i], pts[j]));
  out.ratio = safe_ratio(out.numerator, out.denominator);
  return out;
}

} // namespace qsing
