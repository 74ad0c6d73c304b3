#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qsing/errors.hpp"
#include "qsing/multipoint.hpp"

using namespace qsing;

namespace {

MultiPoint random_multipoint(std::mt19937_64& rng, std::size_t q, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Point> v(q, Point(n));
  for (auto& p : v)
    for (double& c : p) c = g(rng);
  return MultiPoint(v);
}

MultiPoint shuffled(const MultiPoint& a, std::mt19937_64& rng) {
  auto v = a.values();
  std::shuffle(v.begin(), v.end(), rng);
  return MultiPoint(v);
}

// Exhaustive minimum over permutations, written independently of the library.
double brute_distance(const MultiPoint& a, const MultiPoint& b) {
  std::vector<std::size_t> perm(a.q());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.q(); ++i) s += squared_distance(a[i], b[perm[i]]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best);
}

} // namespace

TEST_CASE("metric distance on the documented pairs") {
  const MultiPoint a({{1, 0}, {0, 1}});
  CHECK(metric_distance(a, MultiPoint::repeated({0, 0}, 2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const MultiPoint b({{1, 0}, {-1, 0}}), c({{0, 1}, {0, -1}});
  CHECK(metric_distance(b, c) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(metric_distance(a, a) == 0.0);
}

TEST_CASE("metric distance rejects mismatched shapes") {
  CHECK_THROWS_AS(metric_distance(MultiPoint({{1, 0}}), MultiPoint({{1, 0}, {0, 0}})), InputError);
  CHECK_THROWS_AS(metric_distance(MultiPoint({{1, 0}}), MultiPoint({{1, 0, 0}})), InputError);
}

TEST_CASE("metric axioms and agreement with exhaustive search") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t q = 1 + trial % 4, n = 1 + trial % 3;
    const auto a = random_multipoint(rng, q, n), b = random_multipoint(rng, q, n),
               c = random_multipoint(rng, q, n);
    const double ab = metric_distance(a, b);
    CHECK(ab == doctest::Approx(metric_distance(b, a)).epsilon(1e-14));
    CHECK(metric_distance(a, c) <= ab + metric_distance(b, c) + 1e-12);
    CHECK(ab == doctest::Approx(brute_distance(a, b)).epsilon(1e-13));
  }
}

TEST_CASE("Hungarian solver matches exhaustive search and sorted 1-D matching") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_multipoint(rng, 6, 2), b = random_multipoint(rng, 6, 2);
    const auto sigma = hungarian_matching(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i) s += squared_distance(a[i], b[sigma[i]]);
    CHECK(std::sqrt(s) == doctest::Approx(brute_distance(a, b)).epsilon(1e-12));
  }
  // On the line the optimal matching pairs order statistics.
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_multipoint(rng, 12, 1), b = random_multipoint(rng, 12, 1);
    std::vector<double> x, y;
    for (const auto& p : a.values()) x.push_back(p[0]);
    for (const auto& p : b.values()) y.push_back(p[0]);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    CHECK(metric_distance(a, b) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
  }
}

TEST_CASE("permutation invariance of distance, mean and balancing") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_multipoint(rng, 1 + trial % 5, 2), b = random_multipoint(rng, a.q(), 2);
    const auto as = shuffled(a, rng);
    CHECK(metric_distance(as, b) == doctest::Approx(metric_distance(a, b)).epsilon(1e-14));
    const auto e1 = eta(a), e2 = eta(as);
    CHECK(distance(e1, e2) < 1e-14);
    CHECK(metric_distance(balance(a), balance(as)) < 1e-12);
  }
}

TEST_CASE("mean and balancing examples") {
  const MultiPoint a({{2, 0}, {0, 2}});
  CHECK(eta(a) == Point{1, 1});
  CHECK(metric_distance(balance(a), MultiPoint({{1, -1}, {-1, 1}})) == 0.0);
  CHECK(eta(MultiPoint::repeated({3, -4}, 3)) == Point{3, -4});
  CHECK(norm(eta(MultiPoint({{0.7, -0.2}, {-0.7, 0.2}}))) == 0.0);
  CHECK(balance(MultiPoint::repeated({3, -4}, 3)).norm() == 0.0);
  const MultiPoint bal({{0.5, 1}, {-0.5, -1}});
  CHECK(metric_distance(balance(bal), bal) == 0.0);
}

TEST_CASE("balancing removes exactly Q |eta|^2") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_multipoint(rng, 1 + trial % 4, 1 + trial % 3);
    const double e2 = dot(eta(a), eta(a));
    CHECK(balance(a).squared_norm() ==
          doctest::Approx(a.squared_norm() - static_cast<double>(a.q()) * e2).epsilon(1e-12));
  }
}

TEST_CASE("single-linkage cluster split") {
  const auto two = cluster_split(MultiPoint({{0, 0}, {5, 0}}), 1.0);
  CHECK(two.parts.size() == 2);
  CHECK(two.separation == 5.0);
  const auto one = cluster_split(MultiPoint::repeated({1, 2}, 4), 0.1);
  CHECK(one.parts.size() == 1);
  CHECK(std::isinf(one.separation));
  // 0.5, 0.5 and 1.0 apart: the chain joins everything at delta 0.6.
  const auto chain = cluster_split(MultiPoint({{0, 0}, {0.5, 0}, {1.0, 0}}), 0.6);
  CHECK(chain.parts.size() == 1);
  CHECK(chain.parts[0].q() == 3);
}

TEST_CASE("cluster parts reassemble the input and stay separated") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_multipoint(rng, 6, 2);
    const double delta = 0.3 + 0.1 * (trial % 7);
    const auto split = cluster_split(a, delta);
    std::vector<Point> all;
    for (const auto& p : split.parts) all.insert(all.end(), p.values().begin(), p.values().end());
    CHECK(metric_distance(MultiPoint(all), a) < 1e-14);
    if (split.parts.size() > 1) {
      CHECK(split.separation > delta);
      for (std::size_t i = 0; i < split.parts.size(); ++i)
        for (std::size_t j = i + 1; j < split.parts.size(); ++j)
          for (const auto& p : split.parts[i].values())
            for (const auto& q : split.parts[j].values()) CHECK(distance(p, q) >= split.separation);
    }
  }
}
