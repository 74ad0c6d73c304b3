#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsing/errors.hpp"
#include "qsing/field.hpp"
#include "qsing/field_io.hpp"

using namespace qsing;

namespace {

AnalyticField q2() { return AnalyticField::planar(2, {{1, {1.0, 0.0}}}); }
AnalyticField mixed() { return AnalyticField::planar(2, {{1, {1.0, 0.0}}, {3, {0.2, 0.0}}}); }

double jacobian_gap(const Jacobian& a, const Jacobian& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) s = std::max(s, std::abs(a[i][j] - b[i][j]));
  return s;
}

// Central differences with each shifted tuple matched to the branches at x.
std::vector<Jacobian> fd_gradient(const AnalyticField& f, const Point& x, double h) {
  const auto base = evaluate(f, x);
  std::vector<Jacobian> out(f.q(), Jacobian(2, std::vector<double>(f.m(), 0.0)));
  for (std::size_t j = 0; j < f.m(); ++j) {
    Point xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const auto up = evaluate(f, xp), dn = evaluate(f, xm);
    const auto sp = optimal_matching(base, up), sm = optimal_matching(base, dn);
    for (std::size_t k = 0; k < base.q(); ++k)
      for (std::size_t i = 0; i < 2; ++i)
        out[k][i][j] = (up[sp[k]][i] - dn[sm[k]][i]) / (2.0 * h);
  }
  return out;
}

} // namespace

TEST_CASE("branch values at z = 1 and z = 0") {
  CHECK(metric_distance(evaluate(q2(), Point{1, 0}), MultiPoint({{1, 0}, {-1, 0}})) < 1e-15);
  CHECK(evaluate(q2(), Point{0, 0}).norm() == 0.0);
}

TEST_CASE("value at z = -1 agrees with analytic continuation around the circle") {
  // Follow one sheet from z = 1 along the upper unit half circle, always stepping to the
  // nearest branch value; monodromy puts it at exp(i pi / 2).
  const auto f = q2();
  Point tracked{1, 0};
  const int steps = 2000;
  for (int s = 1; s <= steps; ++s) {
    const double th = std::numbers::pi * s / steps;
    const auto v = evaluate(f, Point{std::cos(th), std::sin(th)});
    tracked = distance(v[0], tracked) < distance(v[1], tracked) ? v[0] : v[1];
  }
  CHECK(tracked[0] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK(tracked[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(metric_distance(evaluate(f, Point{-1, 0}), MultiPoint({{0, 1}, {0, -1}})) < 1e-15);
}

TEST_CASE("built-in fields are balanced") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto f3 = AnalyticField::planar(3, {{1, {0.4, -1.1}}, {2, {0.3, 0.2}}});
  for (int i = 0; i < 50; ++i) {
    const Point x{u(rng), u(rng)};
    CHECK(norm(eta(evaluate(mixed(), x))) < 1e-14);
    CHECK(norm(eta(evaluate(f3, x))) < 1e-14);
  }
}

TEST_CASE("cylindrical extension is invariant along the spine") {
  const auto cyl = AnalyticField::cylinder(mixed(), 4);
  const Point a{0.3, -0.2, 0.0, 0.0}, b{0.3, -0.2, 5.0, -7.0};
  CHECK(metric_distance(evaluate(cyl, a), evaluate(cyl, b)) == 0.0);
  CHECK(is_q_point(cyl, Point{0, 0, 0.4, 2.0}, 1e-12));
  for (const auto& J : gradient(cyl, b))
    for (const auto& row : J) {
      CHECK(row[2] == 0.0);
      CHECK(row[3] == 0.0);
    }
}

TEST_CASE("gradient closed forms") {
  const auto id = gradient(AnalyticField::planar(1, {{1, {1, 0}}}), Point{0.3, 0.7});
  CHECK(jacobian_gap(id[0], Jacobian{{1, 0}, {0, 1}}) < 1e-15);
  // u = z is smooth at the origin.
  CHECK_NOTHROW(gradient(AnalyticField::planar(1, {{1, {1, 0}}}), Point{0, 0}));
  const auto g = gradient(q2(), Point{1, 0});
  const auto v = evaluate(q2(), Point{1, 0});
  for (std::size_t k = 0; k < 2; ++k) {
    const double sign = v[k][0] > 0 ? 1.0 : -1.0;
    CHECK(jacobian_gap(g[k], Jacobian{{0.5 * sign, 0}, {0, 0.5 * sign}}) < 1e-15);
  }
  CHECK_THROWS_AS(gradient(q2(), Point{0, 0}), SingularPointError);
}

TEST_CASE("finite differences converge to the gradient at second order") {
  for (const auto& f : {mixed(), AnalyticField::planar(3, {{2, {0.4, -1.1}}, {4, {0.3, 0.2}}}),
                        AnalyticField::shifted(mixed(), {0.1, -0.05})}) {
    const Point x{0.31, 0.42};
    const auto exact = gradient(f, x);
    auto err = [&](double h) {
      const auto fd = fd_gradient(f, x, h);
      double e = 0.0;
      for (std::size_t k = 0; k < exact.size(); ++k) e = std::max(e, jacobian_gap(fd[k], exact[k]));
      return e;
    };
    const double order = std::log2(err(1e-2) / err(5e-3));
    CHECK(order >= 1.9);
  }
}

TEST_CASE("Q-point detection") {
  CHECK(is_q_point(q2(), Point{0, 0}, 1e-12));
  CHECK_FALSE(is_q_point(q2(), Point{1, 0}, 1e-3));
}

TEST_CASE("invalid term sets are rejected") {
  CHECK_THROWS_AS(AnalyticField::planar(2, {{2, {1, 0}}}), InputError);
  CHECK_THROWS_AS(AnalyticField::planar(0, {{1, {1, 0}}}), InputError);
  CHECK_THROWS_AS(AnalyticField::planar(2, {{0, {1, 0}}}), InputError);
  CHECK_THROWS_AS(AnalyticField::cylinder(q2(), 2), InputError);
}

TEST_CASE("field descriptions round-trip and report parse positions") {
  const auto f = AnalyticField::shifted(AnalyticField::cylinder(mixed(), 3), {0.1, 0.2, 0.3});
  const auto g = parse_field(field_to_json(f));
  CHECK(g.kind() == FieldKind::Shifted);
  CHECK(g.m() == 3);
  const Point x{0.4, -0.3, 0.9};
  CHECK(metric_distance(evaluate(f, x), evaluate(g, x)) == 0.0);
  try {
    parse_field("{\"kind\": \"planar_branch\",\n  \"Q\": 2,, }");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 10);
  }
  CHECK_THROWS_AS(parse_field("{\"kind\": \"torus\"}"), InputError);
  // Comments are accepted.
  CHECK_NOTHROW(parse_field("// branch field\n{\"kind\":\"planar_branch\",\"Q\":2,\"terms\":[{\"p\":1,\"re\":1}]}"));
}
