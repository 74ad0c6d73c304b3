#include <doctest.h>

#include <cmath>
#include <random>

#include "qsing/errors.hpp"
#include "qsing/spine.hpp"

using namespace qsing;

namespace {

// n points on a random affine plane of dimension a in R^m.
std::vector<Point> plane_cloud(std::mt19937_64& rng, std::size_t m, std::size_t a, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point> dirs(a, Point(m));
  for (auto& d : dirs)
    for (auto& c : d) c = g(rng);
  Point base(m);
  for (auto& c : base) c = 0.1 * g(rng);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    Point p = base;
    for (const auto& d : dirs) {
      const double t = 0.1 * g(rng);
      for (std::size_t c = 0; c < m; ++c) p[c] += t * d[c];
    }
    out.push_back(p);
  }
  return out;
}

double max_residual(const AffinePlane& L, const std::vector<Point>& F) {
  double worst = 0.0;
  for (const auto& p : F) worst = std::max(worst, norm(L.residual(p)));
  return worst;
}

} // namespace

TEST_CASE("rho-linear independence examples") {
  CHECK(rho_linearly_independent({{0, 0, 0}, {1, 0, 0}}, 0.5, 1.0));
  CHECK_FALSE(rho_linearly_independent({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}}, 0.5, 1.0));
  CHECK_FALSE(rho_linearly_independent({{0, 0, 0}, {1, 0, 0}, {1, 0.1, 0}}, 0.2, 1.0));
  CHECK(rho_linearly_independent({{0, 0, 0}, {1, 0, 0}, {1, 0.1, 0}}, 0.05, 1.0));
  CHECK(rho_linearly_independent({{0.3, 0.3}}, 0.5, 1.0));
}

TEST_CASE("spanning examples") {
  const std::vector<Point> tri{{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}};
  const auto plane = spans_k_plane(tri, Point{0, 0, 0}, 1.0, 0.1, 2);
  REQUIRE(plane.has_value());
  CHECK(plane->plane.dim() == 2);
  CHECK(plane->points.size() == 3);
  CHECK(plane->points.front() == tri.front());
  CHECK(max_residual(plane->plane, tri) < 1e-14);
  CHECK(std::abs(dot(plane->plane.basis[0], plane->plane.basis[1])) < 1e-12);

  std::vector<Point> line;
  for (int i = 0; i < 9; ++i) line.push_back({0.1 * i - 0.4, 0, 0});
  CHECK_FALSE(spans_k_plane(line, Point{0, 0, 0}, 1.0, 0.01, 2).has_value());
  CHECK(spans_k_plane(line, Point{0, 0, 0}, 1.0, 0.01, 1).has_value());
  CHECK_THROWS_AS(spans_k_plane({{2, 0, 0}}, Point{0, 0, 0}, 1.0, 0.01, 1), InputError);
}

TEST_CASE("spanning agrees with the affine rank for tiny rho") {
  std::mt19937_64 rng(42);
  for (std::size_t m = 2; m <= 4; ++m)
    for (std::size_t a = 0; a < m; ++a) {
      const auto F = plane_cloud(rng, m, a, 12);
      for (std::size_t k = 1; k < m; ++k)
        CHECK(spans_k_plane(F, Point(m, 0.0), 10.0, 1e-9, k).has_value() == (a >= k));
    }
}

TEST_CASE("tube fallback") {
  std::vector<Point> line;
  for (int i = 0; i < 9; ++i) line.push_back({0.1 * i - 0.4, 0.2, 0});
  const auto L = tube_fallback(line, Point{0, 0, 0}, 1.0, 0.01, 2);
  CHECK(L.plane.dim() == 1);
  CHECK(max_residual(L.plane, line) < 1e-14);

  const auto pt = tube_fallback({}, Point{0.1, 0.2, 0.3}, 1.0, 0.01, 2);
  CHECK(pt.plane.dim() == 0);
  CHECK(pt.plane.base == Point{0.1, 0.2, 0.3});

  const double rho = 0.01, r = 1.0;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> noisy;
  for (int i = 0; i < 40; ++i) {
    Point n{u(rng), u(rng)};
    const double len = std::hypot(n[0], n[1]);
    noisy.push_back({-0.5 + i / 40.0, 0.4 * rho * r * n[0] / len, 0.4 * rho * r * n[1] / len});
  }
  const auto fit = tube_fallback(noisy, Point{0, 0, 0}, r, rho, 2);
  CHECK(fit.plane.dim() <= 1);
  CHECK(max_residual(fit.plane, noisy) < rho * r);

  CHECK_THROWS_AS(tube_fallback({{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}}, Point{0, 0, 0}, 1.0, 0.1, 2),
                  InputError);
}

TEST_CASE("plane samples") {
  AffinePlane V{{0, 0, 0.5}, {{0, 0, 1}}};
  const auto s = plane_samples(V, 1.0, 5);
  REQUIRE(s.size() == 5);
  CHECK(s.front()[2] == doctest::Approx(-0.5));
  CHECK(s.back()[2] == doctest::Approx(1.5));
  for (const auto& p : s) CHECK(norm(V.residual(p)) < 1e-15);
  AffinePlane P{{0, 0, 0}, {{1, 0, 0}, {0, 1, 0}}};
  for (const auto& p : plane_samples(P, 0.5, 20)) {
    CHECK(norm(p) <= 0.5);
    CHECK(p[2] == 0.0);
  }
}

TEST_CASE("spine constancy") {
  AffinePlane axis{{0, 0}, {{1, 0}}};
  const FunctionOracle ramp([](const Point& y, double) { return 1.0 + 0.1 * y[0]; });
  const auto rc = spine_frequency_constancy(ramp, axis, 0.25, 1.0, 11, 3);
  CHECK(rc.deviation == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(rc.evaluations == 33);

  const auto q2 = AnalyticField::planar(2, {{1, {1, 0}}});
  const FieldOracle cyl(AnalyticField::cylinder(q2, 3), WeightProfile::standard(), QuadratureScheme{});
  AffinePlane spine{{0, 0, 0}, {{0, 0, 1}}};
  const auto c = spine_frequency_constancy(cyl, spine, 0.25, 1.0, 10, 4);
  CHECK(c.deviation <= 1e-3);
  CHECK(c.min_value == doctest::Approx(0.5).epsilon(1e-6));
}
