#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsing/chebyshev.hpp"
#include "qsing/errors.hpp"
#include "qsing/frequency.hpp"
#include "qsing/quadrature.hpp"
#include "qsing/weight.hpp"

using namespace qsing;

namespace {

AnalyticField mixed() { return AnalyticField::planar(2, {{1, {1.0, 0.0}}, {3, {0.2, 0.0}}}); }

std::vector<RadialKernel> sample_kernels(double r) {
  const auto phi = WeightProfile::standard();
  return {{[=](double s) { return phi.phi(s / r); }, {0.5 * r}, r},
          {[=](double s) { return s < 0.5 * r ? 0.0 : 2.0 / s; }, {0.5 * r}, r}};
}

} // namespace

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
  for (int n : {4, 7, 16}) {
    const auto g = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], d);
      CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("reduced kernels of an indicator match the slab volumes") {
  const RadialKernel chi{[](double s) { return s < 1.0 ? 1.0 : 0.0; }, {}, 1.0};
  for (double rho : {0.0, 0.3, 0.9}) {
    // m = 3: 2 sqrt(1 - rho^2); m = 4: pi (1 - rho^2).
    CHECK(reduced_kernel(chi, 3, rho, 40) == doctest::Approx(2.0 * std::sqrt(1 - rho * rho)).epsilon(1e-12));
    CHECK(reduced_kernel(chi, 4, rho, 40) == doctest::Approx(std::numbers::pi * (1 - rho * rho)).epsilon(1e-12));
  }
}

TEST_CASE("cosine-mapped interpolation resolves square-root edges") {
  const ChebyshevInterpolant p(0.0, 1.0, 40, [](double x) { return std::sqrt(x * (1 - x)); }, true);
  for (double x : {0.001, 0.2, 0.5, 0.97, 0.9999})
    CHECK(p(x) == doctest::Approx(std::sqrt(x * (1 - x))).epsilon(1e-12).scale(1.0));
}

TEST_CASE("serial and parallel quadrature agree") {
  QuadratureScheme par, ser;
  ser.policy = ExecutionPolicy::Serial;
  const auto cyl = AnalyticField::cylinder(mixed(), 3);
  for (const auto& [f, x] : {std::pair{mixed(), Point{0.05, 0.1}}, std::pair{cyl, Point{0.1, 0.0, 0.2}}}) {
    const auto a = integrate_kernels(f, x, sample_kernels(0.7), par);
    const auto b = integrate_kernels(f, x, sample_kernels(0.7), ser);
    for (std::size_t k = 0; k < a.sums.size(); ++k)
      for (std::size_t j = 0; j < kFeatureCount; ++j)
        CHECK(std::abs(a.sums[k][j] - b.sums[k][j]) <= 1e-12 * std::max(1.0, std::abs(b.sums[k][j])));
  }
}

TEST_CASE("quasi-Monte-Carlo and slab reduction agree to sampling accuracy") {
  const auto cyl = AnalyticField::cylinder(AnalyticField::planar(2, {{1, {1, 0}}}), 3);
  QuadratureScheme qmc;
  qmc.method = SpatialMethod::QuasiMonteCarlo;
  const auto phi = WeightProfile::standard();
  const double slab = frequency_I(cyl, phi, Point{0, 0, 0}, 1.0, QuadratureScheme{}).I;
  const double mc = frequency_I(cyl, phi, Point{0, 0, 0}, 1.0, qmc).I;
  CHECK(slab == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(mc - slab) < 1e-2);
}

TEST_CASE("quadrature scheme validation") {
  QuadratureScheme q;
  q.radial_nodes = 3;
  CHECK_THROWS_AS(q.validate(), InputError);
  q = {};
  q.angular_nodes = 2;
  CHECK_THROWS_AS(q.validate(), InputError);
}
