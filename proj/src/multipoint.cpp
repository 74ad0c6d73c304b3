#include "qsing/multipoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qsing/errors.hpp"

namespace qsing {

MultiPoint::MultiPoint(std::vector<Point> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("MultiPoint needs Q >= 1 values");
  n_ = values_.front().size();
  for (const auto& v : values_)
    if (v.size() != n_) throw InputError("MultiPoint values have mixed dimensions");
}

MultiPoint MultiPoint::repeated(const Point& p, std::size_t q) {
  return MultiPoint(std::vector<Point>(q, p));
}

double MultiPoint::squared_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += dot(v, v);
  return s;
}

double MultiPoint::norm() const { return std::sqrt(squared_norm()); }

namespace {

void check_compatible(const MultiPoint& a, const MultiPoint& b) {
  if (a.q() != b.q()) throw InputError("multiplicity mismatch");
  if (a.n() != b.n()) throw InputError("dimension mismatch");
}

std::vector<double> cost_matrix(const MultiPoint& a, const MultiPoint& b) {
  const std::size_t q = a.q();
  std::vector<double> c(q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) c[i * q + j] = squared_distance(a[i], b[j]);
  return c;
}

std::vector<std::size_t> exhaustive(const std::vector<double>& c, std::size_t q) {
  std::vector<std::size_t> perm(q), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < q; ++i) s += c[i * q + perm[i]];
    if (s < best_cost) {
      best_cost = s;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Shortest augmenting path with row/column potentials, 1-based internally.
std::vector<std::size_t> hungarian(const std::vector<double>& c, std::size_t q) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(q + 1, 0.0), v(q + 1, 0.0);
  std::vector<std::size_t> p(q + 1, 0), way(q + 1, 0);
  for (std::size_t i = 1; i <= q; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(q + 1, inf);
    std::vector<char> used(q + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= q; ++j) {
        if (used[j]) continue;
        const double cur = c[(i0 - 1) * q + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= q; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> sigma(q);
  for (std::size_t j = 1; j <= q; ++j) sigma[p[j] - 1] = j - 1;
  return sigma;
}

} // namespace

std::vector<std::size_t> optimal_matching(const MultiPoint& a, const MultiPoint& b) {
  check_compatible(a, b);
  const auto c = cost_matrix(a, b);
  return a.q() <= 8 ? exhaustive(c, a.q()) : hungarian(c, a.q());
}

std::vector<std::size_t> hungarian_matching(const MultiPoint& a, const MultiPoint& b) {
  check_compatible(a, b);
  return hungarian(cost_matrix(a, b), a.q());
}

double metric_distance(const MultiPoint& a, const MultiPoint& b) {
  const auto sigma = optimal_matching(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.q(); ++i) s += squared_distance(a[i], b[sigma[i]]);
  return std::sqrt(s);
}

Point eta(const MultiPoint& a) {
  Point m(a.n(), 0.0);
  for (const auto& v : a.values())
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += v[k];
  for (double& x : m) x /= static_cast<double>(a.q());
  return m;
}

MultiPoint balance(const MultiPoint& a) {
  const Point mean = eta(a);
  std::vector<Point> out = a.values();
  for (auto& v : out)
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= mean[k];
  return MultiPoint(std::move(out));
}

ClusterSplit cluster_split(const MultiPoint& a, double delta) {
  if (!(delta > 0.0)) throw InputError("cluster_split needs delta > 0");
  const std::size_t q = a.q();
  std::vector<std::size_t> parent(q);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j)
      if (distance(a[i], a[j]) <= delta) {
        const std::size_t ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }

  std::vector<std::size_t> label(q);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < q; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    label[i] = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) roots.push_back(r);
  }

  std::vector<std::vector<Point>> groups(roots.size());
  for (std::size_t i = 0; i < q; ++i) groups[label[i]].push_back(a[i]);

  ClusterSplit out;
  out.separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j)
      if (label[i] != label[j]) out.separation = std::min(out.separation, distance(a[i], a[j]));
  for (auto& g : groups) out.parts.emplace_back(std::move(g));
  return out;
}

} // namespace qsing
