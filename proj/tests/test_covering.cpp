#include <doctest.h>

#include <cmath>
#include <set>

#include "qsing/covering.hpp"
#include "qsing/errors.hpp"

using namespace qsing;

namespace {

std::vector<Point> segment(std::size_t n) {
  std::vector<Point> D;
  for (std::size_t i = 0; i < n; ++i) D.push_back({-0.5 + static_cast<double>(i) / (n - 1.0), 0.0, 0.0});
  return D;
}

const FunctionOracle kConstant([](const Point&, double) { return 1.0; });

// I drops by 0.05 per decade of r on the half x1 > 0.
const FunctionOracle kStaircase([](const Point& y, double r) {
  return y[0] > 0 ? 1.0 - 0.05 * std::floor(std::log10(1.0 / r)) : 1.0;
});

void check_partition(const CoveringResult& res, std::size_t n) {
  std::multiset<std::size_t> seen;
  for (const auto& set : res.assigned_sets) seen.insert(set.begin(), set.end());
  CHECK(seen.size() == n);
  CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == n);
}

void check_exhaustive(const CoveringResult& res, const std::vector<Point>& D, double r) {
  const auto audit = packing_verify(res, D, r);
  CHECK(audit.covered);
  CHECK(audit.assignment_ok);
  CHECK(audit.missed.empty());
  check_partition(res, D.size());
}

} // namespace

TEST_CASE("intermediate cover: single point") {
  const auto res = intermediate_cover({{0.1, 0.0}}, kConstant, {0, 0}, 1.0, 0.02, 0.01, 0.05);
  CHECK(res.kappa == 2);
  REQUIRE(res.balls.size() == 1);
  CHECK(res.balls[0].tag == BallTag::Floor);
  CHECK(res.balls[0].radius == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(res.rounds <= res.kappa);
}

TEST_CASE("intermediate cover: scale discipline and disjoint shrunken balls") {
  const auto D = segment(200);
  const double tau = 0.6, sigma = 1e-3, rho = 0.01;
  const auto res = intermediate_cover(D, kConstant, {0, 0, 0}, tau, sigma, rho, 0.05);
  check_exhaustive(res, D, tau);
  for (const auto& b : res.balls) {
    CHECK(b.scale_index >= 0);
    CHECK(static_cast<std::size_t>(b.scale_index) <= res.kappa);
    CHECK(b.radius == doctest::Approx(tau * std::pow(10 * rho, b.scale_index)).epsilon(1e-12));
    CHECK(b.radius >= 10 * rho * sigma);
  }
  for (std::size_t i = 0; i < res.balls.size(); ++i)
    for (std::size_t j = i + 1; j < res.balls.size(); ++j)
      CHECK(distance(res.balls[i].center, res.balls[j].center) >=
            (res.balls[i].radius + res.balls[j].radius) / 5.0);
  // Constant frequency on a line: every F spans the line, nothing is kept early.
  for (const auto& b : res.balls) CHECK(b.tag == BallTag::Floor);
  CHECK(res.off_tube_points == 0);
}

TEST_CASE("intermediate cover: points off the marked line never enter F") {
  std::vector<Point> D = segment(41);
  for (int i = 0; i < 10; ++i) D.push_back({-0.4 + 0.08 * i, 0.3, 0.0});
  const FunctionOracle marked([](const Point& y, double) {
    return std::hypot(y[1], y[2]) < 1e-12 ? 1.0 : 0.9;
  });
  const auto res = intermediate_cover(D, marked, {0, 0, 0}, 0.6, 1e-3, 0.01, 0.05);
  check_exhaustive(res, D, 0.6);
  for (const auto& hs : res.high_sets)
    for (std::size_t i : hs) CHECK(i < 41);
  for (std::size_t b = 0; b < res.balls.size(); ++b) {
    bool off_only = true;
    for (std::size_t i : res.assigned_sets[b]) off_only = off_only && i >= 41;
    if (off_only) {
      CHECK(res.balls[b].tag == BallTag::Bad);
      CHECK(res.high_sets[b].empty());
    }
  }
}

TEST_CASE("intermediate cover: parameter checks") {
  CHECK_THROWS_AS(intermediate_cover({{0, 0}}, kConstant, {0, 0}, 1.0, 0.1, 0.02, 0.05), InputError);
  CHECK_THROWS_AS(intermediate_cover({{0, 0}}, kConstant, {0, 0}, 1.0, 1.0, 0.01, 0.05), InputError);
  CHECK_THROWS_AS(intermediate_cover({{2, 0}}, kConstant, {0, 0}, 1.0, 0.1, 0.01, 0.05), InputError);
  CHECK_THROWS_AS(intermediate_cover({{0}}, kConstant, {0}, 1.0, 0.1, 0.01, 0.05), InputError);
}

TEST_CASE("final cover: empty, constant and staircase oracles") {
  const auto empty = final_cover({}, kConstant, {0, 0, 0}, 1.0, 0.1, 0.05);
  CHECK(empty.balls.empty());
  CHECK(empty.packing_sum == 0.0);

  const auto D = segment(200);
  const auto flat = final_cover(D, kConstant, {0, 0, 0}, 0.6, 0.01, 0.05);
  check_exhaustive(flat, D, 0.6);
  for (const auto& b : flat.balls) {
    CHECK(b.tag == BallTag::Floor);
    CHECK(b.radius == 0.01);
  }
  CHECK(flat.max_tube_count <= flat.tube_bound);
  CHECK(flat.tube_bound == static_cast<std::size_t>(std::ceil(216.0)));

  const auto stair = final_cover(D, kStaircase, {0, 0, 0}, 0.6, 1e-4, 0.05);
  check_exhaustive(stair, D, 0.6);
  std::size_t floors = 0, drops = 0;
  const double U = stair.drop_log.front();
  CHECK(U == 1.0);
  for (std::size_t b = 0; b < stair.balls.size(); ++b) {
    const auto& ball = stair.balls[b];
    if (ball.tag == BallTag::Floor) {
      ++floors;
      CHECK(ball.radius == 1e-4);
    } else {
      REQUIRE(ball.tag == BallTag::Drop);
      ++drops;
      CHECK(ball.radius >= 1e-4);
      for (std::size_t i : stair.assigned_sets[b]) CHECK(kStaircase.fresh(D[i], ball.radius) <= U - 0.05);
    }
  }
  CHECK(floors == 118);
  CHECK(drops == 82);
  CHECK_THROWS_AS(final_cover(D, kConstant, {0, 0, 0}, 0.6, 0.6, 0.05), InputError);
}

TEST_CASE("driver: single point and the round bound") {
  const auto one = minkowski_cover_driver({{0.2, 0.1, 0.0}}, kConstant, 0.02);
  CHECK(one.balls.size() == 1);
  CHECK(one.rounds <= one.kappa);

  const auto D = segment(200);
  for (const auto* oracle : {&kConstant, &kStaircase}) {
    const auto res = minkowski_cover_driver(D, *oracle, 0.02);
    CHECK(res.rounds <= res.kappa);
    CHECK(res.drop_log.size() == res.rounds);
    check_exhaustive(res, D, 1.0);
    for (const auto& b : res.balls) CHECK(b.radius == 0.02);
  }
  const auto stair = minkowski_cover_driver(D, kStaircase, 1e-4);
  CHECK(stair.rounds == 2);
  REQUIRE(stair.drop_log.size() == 2);
  CHECK(stair.drop_log[0] == 1.0);
  CHECK(stair.drop_log[1] == doctest::Approx(0.85));
  CHECK_THROWS_AS(minkowski_cover_driver(D, kConstant, 0.02, 0.05, 0.02), InputError);
  CHECK_THROWS_AS(minkowski_cover_driver(D, kConstant, 0.0), InputError);
}

TEST_CASE("driver: segment covering counts are stable as the target halves") {
  const auto D = segment(200);
  const std::vector<std::pair<double, std::size_t>> frozen{{0.08, 13}, {0.04, 25}, {0.02, 50}};
  std::vector<double> normalized;
  for (auto [rt, n] : frozen) {
    const auto res = minkowski_cover_driver(D, kConstant, rt);
    CHECK(res.balls.size() == n);
    CHECK(res.kappa == 21);
    CHECK(res.rounds == 1);
    CHECK(static_cast<double>(res.balls.size()) * rt <= std::pow(res.C_V, static_cast<double>(res.kappa)));
    normalized.push_back(res.packing_sum);
  }
  for (std::size_t i = 1; i < normalized.size(); ++i)
    CHECK(std::abs(normalized[i] / normalized[i - 1] - 1.0) <= 0.2);
}

TEST_CASE("packing audit") {
  const std::vector<Point> D{{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}};
  CoveringResult trivial;
  trivial.m = 3;
  trivial.balls.push_back({{0, 0, 0}, 1.0, 0, BallTag::Good});
  trivial.assigned_sets.push_back({0, 1, 2});
  const auto a = packing_verify(trivial, D, 1.0);
  CHECK(a.packing_sum == 1.0);
  CHECK(a.normalized == 1.0);
  CHECK(a.covered);
  CHECK(a.assignment_ok);

  auto res = minkowski_cover_driver(segment(200), kConstant, 0.04);
  const auto gone = res.assigned_sets[3];
  res.balls.erase(res.balls.begin() + 3);
  res.assigned_sets.erase(res.assigned_sets.begin() + 3);
  const auto broken = packing_verify(res, segment(200), 1.0);
  CHECK_FALSE(broken.covered);
  CHECK_FALSE(broken.missed.empty());
  for (std::size_t i : broken.missed) CHECK(std::find(gone.begin(), gone.end(), i) != gone.end());

  const auto text = covering_to_text(res, broken);
  CHECK(text.find("# audit fail") != std::string::npos);
}

TEST_CASE("table oracle") {
  // I = y1 + r on the corners of [0,1]^2 x [0,1]: multilinear interpolation is exact.
  std::string text = "# y1 y2 r I\n";
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        text += std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(c) + " " +
                std::to_string(a + c) + "\n";
  const auto t = TableOracle::parse(text);
  CHECK(t.dim() == 2);
  CHECK(t.rows() == 8);
  CHECK(t.frequency({0.25, 0.7}, 0.5) == doctest::Approx(0.75));
  CHECK(t.frequency({3.0, -1.0}, 9.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(t.frequency({0.5}, 0.5), InputError);

  CHECK_THROWS_AS(TableOracle::parse("0 0 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(TableOracle::parse("0 0 1\n0 0 1\n"), ParseError);
  CHECK_THROWS_AS(TableOracle::parse("0 0 1\n1 1 1\n"), InputError);
  CHECK_THROWS_AS(TableOracle::parse("0 0 1\n0 1 0.5\n"), InputError);
  CHECK_THROWS_AS(TableOracle::parse("0 0 -1\n0 1 0\n"), InputError);

  const auto c = TableOracle::load(QSING_DATA_DIR "/const.tab");
  CHECK(c.dim() == 3);
  CHECK(c.frequency({0.1, -0.3, 0.2}, 0.5) == 1.0);
}

TEST_CASE("field oracle cache returns the fresh value") {
  const auto q2 = AnalyticField::planar(2, {{1, {1, 0}}});
  const FieldOracle o(q2, WeightProfile::standard(), QuadratureScheme{});
  const Point y{0.01, -0.02};
  const double first = o.frequency(y, 0.3);
  CHECK(o.cache_size() == 1);
  CHECK(o.frequency(y, 0.3) == first);
  CHECK(o.cache_size() == 1);
  CHECK(o.fresh(y, 0.3) == first);
  const auto batch = o.frequencies({y, {0, 0}}, 0.3);
  CHECK(batch[0] == first);
  CHECK(batch[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(o.cache_size() == 2);
}
