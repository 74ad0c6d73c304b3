#include "qsing/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsing/errors.hpp"

namespace qsing {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope needs two or more pairs");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InputError("slope needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw InputError("slope needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

MinkowskiEstimate minkowski_content_estimate(const AnalyticField& f, const Grid& region,
                                             const std::vector<double>& rhos, double tol) {
  region.validate();
  if (region.dim() != f.m()) throw InputError("grid dimension does not match field");
  for (std::size_t c : region.counts)
    if (c < 2) throw InputError("volume estimate needs two or more nodes per axis");
  if (rhos.empty()) throw InputError("rho list is empty");
  for (double r : rhos)
    if (!(r > 0.0)) throw InputError("rho values must be positive");
  const double h = region.max_spacing();
  if (tol <= 0.0) tol = q_point_tolerance(f, 0.5 * h * std::sqrt(static_cast<double>(f.m())));

  MinkowskiEstimate out;
  const auto qpts = detect_q_points(f, region, tol);
  out.q_points = qpts.size();
  if (qpts.empty()) return out;

  const double reach = *std::max_element(rhos.begin(), rhos.end());
  const std::size_t n = region.size();
  std::vector<double> nearest(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const Point x = region.node(static_cast<std::size_t>(i));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : qpts) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < x.size() && d2 < reach * reach; ++d)
        d2 += (x[d] - p[d]) * (x[d] - p[d]);
      best = std::min(best, d2);
    }
    nearest[static_cast<std::size_t>(i)] = std::sqrt(best);
  }

  double cell = 1.0;
  for (std::size_t a = 0; a < region.dim(); ++a) cell *= region.spacing(a);
  std::vector<double> xs, ys;
  for (double r : rhos) {
    MinkowskiRecord rec;
    rec.rho = r;
    rec.cells = static_cast<std::size_t>(
        std::count_if(nearest.begin(), nearest.end(), [r](double d) { return d < r; }));
    rec.volume = static_cast<double>(rec.cells) * cell;
    out.records.push_back(rec);
    if (rec.cells > 0) {
      xs.push_back(r);
      ys.push_back(rec.volume);
    }
  }
  out.slope = xs.size() >= 2 ? log_log_slope(xs, ys) : std::nan("");
  return out;
}

} // namespace qsing
