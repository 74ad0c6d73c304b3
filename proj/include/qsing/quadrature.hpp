#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qsing/field.hpp"

namespace qsing {

enum class ExecutionPolicy { Serial, Parallel };

/// How integrals over R^m, m >= 3, are computed. SlabReduction integrates the
/// trailing invariant coordinates into the kernel; QuasiMonteCarlo samples the ball.
enum class SpatialMethod { SlabReduction, QuasiMonteCarlo };

struct QuadratureScheme {
  int radial_nodes = 16;   // Gauss-Legendre nodes per radial panel
  int angular_nodes = 256; // uniform angular rule
  int mc_samples = 1 << 18;
  std::uint64_t seed = 20240611;
  SpatialMethod method = SpatialMethod::SlabReduction;
  ExecutionPolicy policy = ExecutionPolicy::Parallel;

  void validate() const;
  /// Roughly half the resolution; the gap between the two results is the error estimate.
  QuadratureScheme coarse() const;
};

/// k(s) with s = |y - x|; k is smooth between breakpoints and vanishes for s >= support.
struct RadialKernel {
  std::function<double(double)> k;
  std::vector<double> breakpoints;
  double support = 0.0;
};

/// Integrand factors built from the branch values u_k and derivatives f'_k,
/// with v the planar part of y - x:
///   U2 = sum |u_k|^2, DU2 = sum |f'_k|^2 (= |Du|^2 / 2),
///   Radial2 = sum |f'_k v|^2 (= |Du (y-x)|^2), Pairing = sum Re(f'_k v conj u_k) (= Du (y-x) . u).
enum Feature : std::size_t { kU2 = 0, kDu2 = 1, kRadial2 = 2, kPairing = 3, kFeatureCount = 4 };
using FeatureSums = std::array<double, kFeatureCount>;

struct KernelIntegrals {
  std::vector<FeatureSums> sums; // sums[j][f] = int k_j(|y-x|) feature_f(y) dy
  std::size_t nodes = 0;
  std::size_t skipped = 0;       // nodes on the branch set, left out
};

/// Integrates every kernel against every feature over B_support(x) in R^m.
/// Result does not depend on the thread count.
KernelIntegrals integrate_kernels(const AnalyticField& f, std::span<const double> x,
                                  const std::vector<RadialKernel>& kernels,
                                  const QuadratureScheme& q);

struct GaussRule {
  std::vector<double> nodes;   // in (0, 1)
  std::vector<double> weights; // sum to 1
};
GaussRule gauss_legendre(int n);

/// |S^{m-3}| int_0^inf k(sqrt(rho^2 + t^2)) t^{m-3} dt, the kernel seen by a field
/// constant in m - 2 directions.
double reduced_kernel(const RadialKernel& k, std::size_t m, double rho, int nodes);
double reduced_kernel(const RadialKernel& k, std::size_t m, double rho, const GaussRule& g);

} // namespace qsing
