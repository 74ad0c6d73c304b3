#include "qsing/meanflat.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qsing/errors.hpp"
#include "qsing/text_io.hpp"

namespace qsing {

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<Point> pts, std::vector<double> w)
    : m(dim), points(std::move(pts)), weights(std::move(w)) {
  validate();
}

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<Point> pts)
    : m(dim), points(std::move(pts)), weights(points.size(), 1.0) {
  validate();
}

void DiscreteMeasure::validate() const {
  if (m == 0) throw InputError("measure dimension must be positive");
  if (points.size() != weights.size()) throw InputError("points and weights differ in length");
  for (const auto& p : points)
    if (p.size() != m) throw InputError("measure atom has the wrong dimension");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("measure weights must be >= 0");
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void DiscreteMeasure::add(Point p, double w) {
  if (p.size() != m) throw InputError("measure atom has the wrong dimension");
  if (!(w >= 0.0)) throw InputError("measure weights must be >= 0");
  points.push_back(std::move(p));
  weights.push_back(w);
}

DiscreteMeasure restrict_ball(const DiscreteMeasure& mu, std::span<const double> x0, double r0) {
  if (!(r0 > 0.0)) throw InputError("restriction radius must be positive");
  if (x0.size() != mu.m) throw InputError("center has the wrong dimension");
  DiscreteMeasure out;
  out.m = mu.m;
  const double r2 = r0 * r0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (squared_distance(mu.points[i], x0) < r2) {
      out.points.push_back(mu.points[i]);
      out.weights.push_back(mu.weights[i]);
    }
  return out;
}

PlaneFit plane_fit(const DiscreteMeasure& mu) {
  const double mass = mu.total_mass();
  if (!(mass > 0.0)) throw InputError("plane fit needs positive mass");
  const std::size_t m = mu.m;
  PlaneFit fit;
  fit.base.assign(m, 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t d = 0; d < m; ++d) fit.base[d] += mu.weights[i] * mu.points[i][d];
  for (double& b : fit.base) b /= mass;

  SymmetricMatrix B(m);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double w = mu.weights[i];
    for (std::size_t a = 0; a < m; ++a) {
      const double da = mu.points[i][a] - fit.base[a];
      for (std::size_t b = a; b < m; ++b) B(a, b) += w * da * (mu.points[i][b] - fit.base[b]);
    }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < a; ++b) B(a, b) = B(b, a);

  auto eig = symmetric_eigen(B);
  for (double& l : eig.values) l = std::max(l, 0.0);
  fit.eigenvalues = std::move(eig.values);
  fit.eigenvectors = std::move(eig.vectors);
  return fit;
}

BetaResult beta_k(const DiscreteMeasure& mu, std::span<const double> x0, double r0,
                  std::size_t k) {
  if (k >= mu.m) throw InputError("beta needs 0 <= k <= m - 1");
  BetaResult out;
  out.x0.assign(x0.begin(), x0.end());
  out.r0 = r0;
  out.k = k;
  const DiscreteMeasure local = restrict_ball(mu, x0, r0);
  if (!(local.total_mass() > 0.0)) {
    out.empty = true;
    return out;
  }
  out.fit = plane_fit(local);
  out.fit.basis.assign(out.fit.eigenvectors.begin(),
                       out.fit.eigenvectors.begin() + static_cast<std::ptrdiff_t>(k));
  double tail = 0.0;
  for (std::size_t l = k; l < mu.m; ++l) tail += out.fit.eigenvalues[l];
  out.value = std::pow(r0, -static_cast<double>(k) - 2.0) * tail;
  return out;
}

namespace {

// Frame: first k columns of a product of Givens rotations applied to the identity.
std::vector<Point> rotated_frame(const std::vector<double>& angles, std::size_t m, std::size_t k) {
  std::vector<Point> cols(k, Point(m, 0.0));
  if (k == 0) return cols;
  for (std::size_t c = 0; c < k; ++c) cols[c][c] = 1.0;
  std::size_t a = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j, ++a) {
      const double cs = std::cos(angles[a]), sn = std::sin(angles[a]);
      for (auto& v : cols) {
        const double vi = v[i], vj = v[j];
        v[i] = cs * vi - sn * vj;
        v[j] = sn * vi + cs * vj;
      }
    }
  return cols;
}

double plane_cost(const DiscreteMeasure& mu, const Point& base, const std::vector<Point>& frame) {
  double s = 0.0;
  Point d(mu.m);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t c = 0; c < mu.m; ++c) d[c] = mu.points[i][c] - base[c];
    double n2 = dot(d, d);
    for (const auto& e : frame) {
      const double t = dot(d, e);
      n2 -= t * t;
    }
    s += mu.weights[i] * std::max(n2, 0.0);
  }
  return s;
}

} // namespace

double beta_bruteforce(const DiscreteMeasure& mu, std::span<const double> x0, double r0,
                       std::size_t k, std::size_t resolution, std::uint64_t seed) {
  if (k >= mu.m) throw InputError("beta needs 0 <= k <= m - 1");
  if (resolution == 0) throw InputError("brute-force resolution must be positive");
  const DiscreteMeasure local = restrict_ball(mu, x0, r0);
  const double mass = local.total_mass();
  if (!(mass > 0.0)) return 0.0;
  const std::size_t m = mu.m;

  Point center(m, 0.0);
  for (std::size_t i = 0; i < local.size(); ++i)
    for (std::size_t d = 0; d < m; ++d) center[d] += local.weights[i] * local.points[i][d];
  for (double& c : center) c /= mass;

  const std::size_t na = k == 0 ? 0 : m * (m - 1) / 2;
  const std::size_t dims = na + m;
  auto cost = [&](const std::vector<double>& v) {
    std::vector<double> angles(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(na));
    Point base(m);
    for (std::size_t d = 0; d < m; ++d) base[d] = center[d] + v[na + d];
    return plane_cost(local, base, rotated_frame(angles, m, k));
  };

  // Hooke-Jeeves over the coordinates in [first, last): exploratory probes plus pattern moves,
  // step halved when nothing improves.
  auto search = [&](std::vector<double>& v, std::size_t first, std::size_t last, double step) {
    auto explore = [&](std::vector<double> base, double fbase, double h) {
      for (std::size_t i = first; i < last; ++i) {
        const double scale = i < na ? 1.0 : r0;
        for (double dir : {1.0, -1.0}) {
          std::vector<double> w = base;
          w[i] += dir * h * scale;
          const double fw = cost(w);
          // Round-off moves along directions the cost ignores would never end.
          if (fw < fbase - 1e-14 * std::abs(fbase)) {
            base = std::move(w);
            fbase = fw;
            break;
          }
        }
      }
      return std::pair{base, fbase};
    };
    double fv = cost(v);
    for (std::size_t iter = 0; step > 1e-8 && iter < 20000; ++iter) {
      auto [w, fw] = explore(v, fv, step);
      if (!(fw < fv)) {
        step *= 0.5;
        continue;
      }
      while (fw < fv) {
        std::vector<double> jump(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) jump[i] = 2.0 * w[i] - v[i];
        v = std::move(w);
        fv = fw;
        std::tie(w, fw) = explore(jump, cost(jump), step);
      }
    }
    return fv;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_v(dims, 0.0);
  for (std::size_t start = 0; start < resolution; ++start) {
    std::vector<double> v(dims, 0.0);
    for (std::size_t a = 0; a < na; ++a) v[a] = angle(rng);
    const double fv = search(v, 0, na, 0.5);
    if (fv < best) {
      best = fv;
      best_v = v;
    }
  }
  // Offsets from the barycenter: a grid of shifts, then a joint refinement.
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t j = 1; j <= resolution; ++j)
      for (double dir : {1.0, -1.0}) {
        std::vector<double> v = best_v;
        v[na + d] += dir * 0.1 * r0 * static_cast<double>(j) / static_cast<double>(resolution);
        const double fv = cost(v);
        if (fv < best) {
          best = fv;
          best_v = v;
        }
      }
  best = std::min(best, search(best_v, 0, dims, 1e-3));
  return std::pow(r0, -static_cast<double>(k) - 2.0) * best;
}

std::vector<double> dyadic_scales(double s0, std::size_t count) {
  if (!(s0 > 0.0)) throw InputError("top scale must be positive");
  std::vector<double> out;
  double s = s0;
  for (std::size_t i = 0; i < count; ++i, s *= 0.5) out.push_back(s);
  return out;
}

double jones_integral(const DiscreteMeasure& mu, std::span<const double> x0, std::size_t k,
                      const std::vector<double>& scales) {
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw InputError("scales must be positive");
    if (i > 0 && std::abs(scales[i] - 0.5 * scales[i - 1]) > 1e-12 * scales[i - 1])
      throw InputError("scales must be descending and dyadic");
  }
  double sum = 0.0;
  for (double s : scales) sum += beta_k(mu, x0, s, k).value * std::numbers::ln2;
  return sum;
}

MeanflatPinching meanflat_vs_pinching_check(const DiscreteMeasure& mu, std::span<const double> x0,
                                            double r, const PinchingFunction& W) {
  if (!(r > 0.0)) throw InputError("radius must be positive");
  if (mu.m < 2) throw InputError("mean flatness against pinching needs m >= 2");
  MeanflatPinching out;
  const double s = 0.125 * r;
  const auto local = restrict_ball(mu, x0, s);
  out.atoms = local.size();
  if (local.empty()) return out;
  out.lhs = beta_k(mu, x0, s, mu.m - 2).value;
  double sum = 0.0;
  for (std::size_t i = 0; i < local.size(); ++i) sum += local.weights[i] * W(local.points[i]);
  out.rhs_raw = std::pow(r, -static_cast<double>(mu.m - 2)) * sum;
  out.ratio = out.rhs_raw > 0.0 ? out.lhs / out.rhs_raw
                                : (out.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return out;
}

MeanflatPinching meanflat_vs_pinching_check(const AnalyticField& f, const WeightProfile& phi,
                                            const DiscreteMeasure& mu,
                                            std::span<const double> x0, double r,
                                            const QuadratureScheme& q) {
  if (mu.m != f.m()) throw InputError("measure and field differ in dimension");
  return meanflat_vs_pinching_check(mu, x0, r, [&](const Point& x) {
    return pinch_W(f, phi, x, 0.125 * r, 4.0 * r, q);
  });
}

DiscreteMeasure measure_from_qpoints(const AnalyticField& f, const Grid& g, double tol) {
  const double h = g.max_spacing();
  const double w = std::pow(h, static_cast<double>(f.m()) - 2.0);
  DiscreteMeasure mu;
  mu.m = f.m();
  for (auto& p : detect_q_points(f, g, tol)) mu.add(std::move(p), w);
  return mu;
}

DiscreteMeasure parse_measure(std::string_view text) {
  const auto rows = parse_numeric_rows(text);
  DiscreteMeasure mu;
  if (rows.empty()) throw ParseError("measure file has no atoms", 1, 1);
  const std::size_t cols = rows.front().values.size();
  if (cols < 2) throw ParseError("an atom needs coordinates and a weight", rows.front().line, 1);
  mu.m = cols - 1;
  for (const auto& row : rows) {
    if (row.values.size() != cols)
      throw ParseError("expected " + std::to_string(cols) + " columns, found " +
                           std::to_string(row.values.size()),
                       row.line, 1);
    if (row.values.back() < 0.0) throw ParseError("negative weight", row.line, 1);
    mu.points.emplace_back(row.values.begin(), row.values.end() - 1);
    mu.weights.push_back(row.values.back());
  }
  return mu;
}

DiscreteMeasure load_measure(const std::string& path) { return parse_measure(read_text_file(path)); }

std::string measure_to_text(const DiscreteMeasure& mu) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double c : mu.points[i]) ss << format_double(c) << ' ';
    ss << format_double(mu.weights[i]) << '\n';
  }
  return ss.str();
}

} // namespace qsing
