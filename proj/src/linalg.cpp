#include "qsing/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsing {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < m; ++i) t += (*this)(i, i);
  return t;
}

EigenDecomposition symmetric_eigen(const SymmetricMatrix& s, int max_sweeps) {
  const std::size_t m = s.m;
  SymmetricMatrix a = s;
  std::vector<double> v(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) v[i * m + i] = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      diag += a(i, i) * a(i, i);
      for (std::size_t j = i + 1; j < m; ++j) off += a(i, j) * a(i, j);
    }
    if (off == 0.0 || off <= 1e-32 * diag) break;

    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          const double vkp = v[k * m + p];
          const double vkq = v[k * m + q];
          v[k * m + p] = c * vkp - sn * vkq;
          v[k * m + q] = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.reserve(m);
  out.vectors.reserve(m);
  for (std::size_t idx : order) {
    // Round-off can push a zero eigenvalue of a PSD form slightly negative.
    out.values.push_back(a(idx, idx));
    Point col(m);
    for (std::size_t k = 0; k < m; ++k) col[k] = v[k * m + idx];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

Point orthogonal_residual(std::span<const double> v, const std::vector<Point>& orthonormal) {
  Point r(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : orthonormal) {
      const double c = dot(r, e);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * e[i];
    }
  }
  return r;
}

Point AffinePlane::residual(std::span<const double> y) const {
  if (y.size() != base.size()) throw std::invalid_argument("AffinePlane: dimension mismatch");
  Point d(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[i] - base[i];
  return orthogonal_residual(d, basis);
}

double AffinePlane::distance_to(std::span<const double> y) const { return norm(residual(y)); }

} // namespace qsing
