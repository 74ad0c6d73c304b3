#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsing/errors.hpp"
#include "qsing/frequency.hpp"

using namespace qsing;
using std::numbers::pi;

namespace {

const QuadratureScheme kDefault{};
const WeightProfile kPhi = WeightProfile::standard();
const Point kOrigin{0, 0};

AnalyticField linear() { return AnalyticField::planar(1, {{1, {1, 0}}}); }
AnalyticField q2() { return AnalyticField::planar(2, {{1, {1, 0}}}); }
AnalyticField mixed() { return AnalyticField::planar(2, {{1, {1, 0}}, {3, {0.2, 0}}}); }
AnalyticField cylinder() { return AnalyticField::cylinder(q2(), 3); }

// Mixed field w + 0.2 w^3, w = sqrt(z): after the angular average only the two pure modes
// survive, giving sum |u|^2 = 2s(1 + 0.04 s^2) and sum |f'|^2 = 2(1/(4s) + 0.09 s).
double mixed_H(double r) {
  auto F = [](double s) { return s * s / 2 + 0.01 * std::pow(s, 4); };
  return 8 * pi * (F(r) - F(r / 2));
}
double mixed_D(double r) { return 8 * pi * r * (3.0 / 16 + 0.09 * r * r * 5.0 / 32); }

} // namespace

TEST_CASE("u = z: the three functionals equal 7 pi / 6 and I = 1") {
  const auto s = smoothed_functionals(linear(), kPhi, kOrigin, 1.0, kDefault);
  CHECK(s.D == doctest::Approx(7 * pi / 6).epsilon(1e-12));
  CHECK(s.H == doctest::Approx(7 * pi / 6).epsilon(1e-12));
  CHECK(s.E == doctest::Approx(7 * pi / 6).epsilon(1e-12));
  CHECK(s.P == doctest::Approx(s.D).epsilon(1e-12));
  CHECK(frequency_I(linear(), kPhi, kOrigin, 0.6, kDefault).I == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("square-root branch field: H = 3 pi, D = 3 pi / 2, I = 1/2 at every radius") {
  CHECK(height_H(q2(), kPhi, kOrigin, 1.0, kDefault) == doctest::Approx(3 * pi).epsilon(1e-12));
  CHECK(dirichlet_D(q2(), kPhi, kOrigin, 1.0, kDefault) == doctest::Approx(1.5 * pi).epsilon(1e-12));
  for (double r : {0.1, 0.25, 0.5, 1.0})
    CHECK(frequency_I(q2(), kPhi, kOrigin, r, kDefault).I == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("single-term fields have frequency p / Q") {
  for (auto [p, q] : {std::pair{1, 2}, {3, 2}, {1, 3}, {2, 3}, {5, 4}})
    for (double r : {0.25, 1.0})
      CHECK(frequency_I(AnalyticField::planar(q, {{p, {0.7, -0.4}}}), kPhi, kOrigin, r, kDefault).I ==
            doctest::Approx(static_cast<double>(p) / q).epsilon(1e-10));
}

TEST_CASE("mixed field matches the two-mode closed form") {
  for (double r : {0.05, 0.25, 0.5, 1.0}) {
    const auto rep = frequency_I(mixed(), kPhi, kOrigin, r, kDefault);
    CHECK(rep.H == doctest::Approx(mixed_H(r)).epsilon(1e-11));
    CHECK(rep.D == doctest::Approx(mixed_D(r)).epsilon(1e-11));
    CHECK(rep.I == doctest::Approx(r * mixed_D(r) / mixed_H(r)).epsilon(1e-11));
  }
  // Frozen: I(0, 1) = 1.6125 / 3.075.
  CHECK(frequency_I(mixed(), kPhi, kOrigin, 1.0, kDefault).I == doctest::Approx(0.5243902439024390).epsilon(1e-11));
}

TEST_CASE("cylinder over the branch field: spherical closed forms") {
  // H = 4 int sin^2 * 2 pi * int_{r/2}^r s^2 ds = 7 pi^2 r^3 / 6; D = 7 pi^2 r^2 / 12.
  const Point x{0, 0, 0.3};
  for (double r : {0.5, 1.0}) {
    const auto s = smoothed_functionals(cylinder(), kPhi, x, r, kDefault);
    CHECK(s.H == doctest::Approx(7 * pi * pi * r * r * r / 6).epsilon(1e-9));
    CHECK(s.D == doctest::Approx(7 * pi * pi * r * r / 12).epsilon(1e-9));
  }
  CHECK(frequency_I(cylinder(), kPhi, x, 0.8, kDefault).I == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("homogeneous scaling of D") {
  // alpha = 1/2, m = 2: D(lambda r) = lambda D(r).
  const double d1 = dirichlet_D(q2(), kPhi, kOrigin, 0.3, kDefault);
  const double d2 = dirichlet_D(q2(), kPhi, kOrigin, 0.9, kDefault);
  CHECK(d2 == doctest::Approx(3.0 * d1).epsilon(1e-12));
  const auto f = AnalyticField::planar(3, {{2, {1, 0}}});
  CHECK(dirichlet_D(f, kPhi, kOrigin, 0.8, kDefault) ==
        doctest::Approx(std::pow(2.0, 4.0 / 3) * dirichlet_D(f, kPhi, kOrigin, 0.4, kDefault)).epsilon(1e-11));
}

TEST_CASE("frequency is invariant under translating field and center together") {
  const auto shifted = AnalyticField::shifted(mixed(), {0.3, -0.2});
  const double a = frequency_I(mixed(), kPhi, Point{0.05, 0.02}, 0.6, kDefault).I;
  const double b = frequency_I(shifted, kPhi, Point{0.35, -0.18}, 0.6, kDefault).I;
  CHECK(b == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("energy E: radial closed form and equality in Cauchy-Schwarz") {
  CHECK(energy_E(linear(), kPhi, kOrigin, 1.0, kDefault) == doctest::Approx(7 * pi / 6).epsilon(1e-12));
  const auto id = identity_residuals(q2(), kPhi, kOrigin, 0.7, kDefault);
  CHECK(std::abs(id.cauchy_schwarz) < 1e-12);
  const auto mid = identity_residuals(mixed(), kPhi, kOrigin, 0.7, kDefault);
  CHECK(mid.cauchy_schwarz > 0.0);
}

TEST_CASE("cylinder E equals the planar E times the slab weight") {
  // For r-independent slabs the 3-D kernel is the reduced kernel of the 2-D one; at the spine
  // point E_3(r) = int over the plane of |f' v|^2 K(|v|), and the frequency stays 1/2.
  const auto s = smoothed_functionals(cylinder(), kPhi, Point{0, 0, 0}, 1.0, kDefault);
  // Homogeneous of degree 1/2 about the spine: r^2 D^2 = H E.
  CHECK(s.D * s.D == doctest::Approx(s.H * s.E).epsilon(1e-9));
}

TEST_CASE("zero field has zero energy and a degenerate height") {
  const auto zero = AnalyticField::planar(2, {});
  CHECK(dirichlet_D(zero, kPhi, kOrigin, 1.0, kDefault) == 0.0);
  CHECK(energy_E(zero, kPhi, kOrigin, 1.0, kDefault) == 0.0);
  CHECK_THROWS_AS(height_H(zero, kPhi, kOrigin, 1.0, kDefault), DegenerateHeightError);
  try {
    frequency_I(zero, kPhi, kOrigin, 1.0, kDefault);
    FAIL("expected degenerate height");
  } catch (const DegenerateHeightError& e) {
    CHECK(e.height() == 0.0);
  }
}

TEST_CASE("pinching") {
  CHECK(std::abs(pinch_W(q2(), kPhi, kOrigin, 0.1, 1.0, kDefault)) < 1e-12);
  CHECK(pinch_W(mixed(), kPhi, kOrigin, 0.5, 0.5, kDefault) == 0.0);
  CHECK(pinch_W(mixed(), kPhi, kOrigin, 0.1, 1.0, kDefault) > 0.02);
}

TEST_CASE("identities hold on every built-in field") {
  const std::vector<std::pair<AnalyticField, Point>> cases{
      {linear(), kOrigin}, {q2(), kOrigin}, {mixed(), kOrigin}, {mixed(), Point{0.1, -0.05}},
      {AnalyticField::shifted(mixed(), {0.03, -0.02}), kOrigin}, {cylinder(), Point{0.05, 0, 0.1}}};
  for (const auto& [f, x] : cases)
    for (double r : {0.5, 1.0}) {
      const auto id = identity_residuals(f, kPhi, x, r, kDefault);
      CHECK(id.pairing <= 1e-3);
      CHECK(id.dirichlet_derivative <= 1e-3);
      CHECK(id.height_derivative <= 1e-3);
      CHECK(id.cauchy_schwarz >= -1e-6);
      CHECK(doubling_residual(f, kPhi, x, 0.25 * r, r, kDefault) <= 1e-3);
    }
}

TEST_CASE("doubling: trivial interval and homogeneous decay") {
  CHECK(doubling_residual(mixed(), kPhi, kOrigin, 0.5, 0.5, kDefault) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  // m - 1 + 2 alpha = 2 for the branch field.
  const double ratio = height_H(q2(), kPhi, kOrigin, 0.2, kDefault) / height_H(q2(), kPhi, kOrigin, 0.8, kDefault);
  CHECK(ratio == doctest::Approx(std::pow(0.25, 2.0)).epsilon(1e-12));
  CHECK(log_frequency_integral(q2(), kPhi, kOrigin, 0.2, 0.8, kDefault) ==
        doctest::Approx(0.5 * std::log(4.0)).epsilon(1e-10));
}

TEST_CASE("radial derivative is exact on cubics") {
  auto F = [](double r) { return r * r * r - 2 * r; };
  CHECK(radial_derivative(F, 0.7, 0.01) == doctest::Approx(3 * 0.49 - 2).epsilon(1e-12));
}

TEST_CASE("mixed-field frequency profile is nondecreasing") {
  std::vector<double> radii;
  for (int i = 0; i < 50; ++i) radii.push_back(0.05 + 0.95 * i / 49.0);
  const auto prof = frequency_profile(mixed(), kPhi, kOrigin, radii, kDefault);
  CHECK(prof.nondecreasing_within(5.0));
  CHECK(prof.min_increment > -1e-12);
  CHECK_THROWS_AS(frequency_profile(mixed(), kPhi, kOrigin, {0.5, 0.2}, kDefault), InputError);
}
