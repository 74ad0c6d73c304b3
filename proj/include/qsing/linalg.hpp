#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qsing {

using Point = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Dense symmetric matrix stored row-major, size m x m.
struct SymmetricMatrix {
  std::size_t m = 0;
  std::vector<double> a;

  explicit SymmetricMatrix(std::size_t dim = 0) : m(dim), a(dim * dim, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * m + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * m + j]; }
  double trace() const;
};

struct EigenDecomposition {
  std::vector<double> values;             // nonincreasing
  std::vector<std::vector<double>> vectors; // vectors[i] pairs with values[i], orthonormal
};

/// Cyclic Jacobi rotations with a fixed sweep budget. Exact zero rows and columns stay exactly zero.
EigenDecomposition symmetric_eigen(const SymmetricMatrix& s, int max_sweeps = 60);

/// Affine plane base + span(basis); basis is orthonormal. An empty basis is the point {base}.
struct AffinePlane {
  Point base;
  std::vector<Point> basis;

  std::size_t dim() const { return basis.size(); }
  /// Component of (y - base) orthogonal to the plane.
  Point residual(std::span<const double> y) const;
  double distance_to(std::span<const double> y) const;
};

/// Orthogonal part of v with respect to an orthonormal family (two Gram-Schmidt passes).
Point orthogonal_residual(std::span<const double> v, const std::vector<Point>& orthonormal);

} // namespace qsing
