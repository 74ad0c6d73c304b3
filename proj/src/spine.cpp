#include "qsing/spine.hpp"

#include <algorithm>
#include <cmath>

#include "qsing/errors.hpp"

namespace qsing {

namespace {

void check_inside(const std::vector<Point>& F, std::span<const double> x, double r) {
  for (const auto& p : F) {
    if (p.size() != x.size()) throw InputError("point dimension does not match the center");
    if (distance(p, x) > r * (1.0 + 1e-12)) throw InputError("point set is not inside B_r(x)");
  }
}

SpannedPlane greedy_span(const std::vector<Point>& F, std::span<const double> x, double r,
                         double rho, std::size_t max_points) {
  SpannedPlane out;
  if (F.empty()) {
    out.plane.base.assign(x.begin(), x.end());
    return out;
  }
  out.plane.base = F.front();
  out.points.push_back(F.front());
  const double threshold = rho * r;
  while (out.points.size() < max_points) {
    double best = -1.0;
    std::size_t arg = 0;
    Point best_res;
    for (std::size_t i = 0; i < F.size(); ++i) {
      Point res = out.plane.residual(F[i]);
      const double d = norm(res);
      if (d > best) {
        best = d;
        arg = i;
        best_res = std::move(res);
      }
    }
    if (best < threshold || best <= 0.0) break;
    for (double& c : best_res) c /= best;
    // One more pass keeps the basis orthonormal to round-off.
    Point e = orthogonal_residual(best_res, out.plane.basis);
    const double n = norm(e);
    for (double& c : e) c /= n;
    out.plane.basis.push_back(std::move(e));
    out.points.push_back(F[arg]);
  }
  return out;
}

} // namespace

bool rho_linearly_independent(const std::vector<Point>& pts, double rho, double r) {
  if (pts.empty()) throw InputError("point list is empty");
  AffinePlane hull{pts.front(), {}};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Point res = hull.residual(pts[i]);
    const double d = norm(res);
    if (d < rho * r) return false;
    for (double& c : res) c /= d;
    hull.basis.push_back(orthogonal_residual(res, hull.basis));
    const double n = norm(hull.basis.back());
    for (double& c : hull.basis.back()) c /= n;
  }
  return true;
}

std::optional<SpannedPlane> spans_k_plane(const std::vector<Point>& F, std::span<const double> x,
                                          double r, double rho, std::size_t k) {
  check_inside(F, x, r);
  auto s = greedy_span(F, x, r, rho, k + 1);
  if (s.points.size() == k + 1) return s;
  return std::nullopt;
}

SpannedPlane tube_fallback(const std::vector<Point>& F, std::span<const double> x, double r,
                           double rho, std::size_t k) {
  check_inside(F, x, r);
  auto s = greedy_span(F, x, r, rho, k + 1);
  if (s.points.size() == k + 1 && k + 1 > 0 && !F.empty())
    throw InputError("point set spans a k-plane; no tube fallback applies");
  for (const auto& p : F)
    if (s.plane.distance_to(p) >= rho * r)
      throw InternalLogicError("tube fallback: a point escapes B_{rho r}(L)");
  return s;
}

namespace {

double radical_inverse(std::size_t base, std::size_t n) {
  double inv = 1.0 / static_cast<double>(base), f = inv, v = 0.0;
  while (n > 0) {
    v += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return v;
}

} // namespace

std::vector<Point> plane_samples(const AffinePlane& V, double extent, std::size_t count) {
  if (count == 0) throw InputError("sample count must be positive");
  if (!(extent >= 0.0)) throw InputError("sample extent must be nonnegative");
  const std::size_t k = V.dim();
  std::vector<Point> out;
  auto at = [&](const std::vector<double>& c) {
    Point y = V.base;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t d = 0; d < y.size(); ++d) y[d] += c[i] * V.basis[i][d];
    return y;
  };
  if (k == 0) return {V.base};
  if (k == 1) {
    for (std::size_t j = 0; j < count; ++j) {
      const double t = count == 1 ? 0.0
                                  : -extent + 2.0 * extent * static_cast<double>(j) /
                                                  static_cast<double>(count - 1);
      out.push_back(at({t}));
    }
    return out;
  }
  static constexpr std::size_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (k > std::size(primes)) throw InputError("plane dimension too large for sampling");
  out.push_back(V.base);
  for (std::size_t n = 1; out.size() < count; ++n) {
    std::vector<double> c(k);
    double r2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      c[i] = extent * (2.0 * radical_inverse(primes[i], n) - 1.0);
      r2 += c[i] * c[i];
    }
    if (r2 <= extent * extent) out.push_back(at(c));
  }
  return out;
}

SpineConstancy spine_frequency_constancy(const FrequencyOracle& oracle, const AffinePlane& V,
                                         double r_lo, double r_hi, std::size_t points,
                                         std::size_t radii, double extent) {
  if (!(r_lo > 0.0) || r_hi < r_lo) throw InputError("radii range must satisfy 0 < r_lo <= r_hi");
  if (radii == 0) throw InputError("radius count must be positive");
  const auto ys = plane_samples(V, extent, points);
  SpineConstancy out;
  bool first = true;
  for (std::size_t j = 0; j < radii; ++j) {
    const double r = radii == 1 ? r_lo
                                : r_lo + (r_hi - r_lo) * static_cast<double>(j) /
                                             static_cast<double>(radii - 1);
    for (double v : oracle.frequencies(ys, r)) {
      ++out.evaluations;
      out.min_value = first ? v : std::min(out.min_value, v);
      out.max_value = first ? v : std::max(out.max_value, v);
      first = false;
    }
  }
  out.deviation = out.max_value - out.min_value;
  return out;
}

} // namespace qsing
