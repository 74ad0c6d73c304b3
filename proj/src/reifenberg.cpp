#include "qsing/reifenberg.hpp"

#include <cmath>
#include <numbers>

#include "qsing/errors.hpp"
#include "qsing/meanflat.hpp"

namespace qsing {

ReifenbergReport reifenberg_hypothesis_check(const std::vector<SourceBall>& balls, std::size_t k,
                                             double delta0, std::size_t radii,
                                             std::size_t inner_scales) {
  if (!(delta0 > 0.0)) throw InputError("delta0 must be positive");
  if (radii == 0 || inner_scales == 0) throw InputError("scale counts must be positive");
  ReifenbergReport out;
  if (balls.empty()) return out;
  const std::size_t m = balls.front().center.size();
  if (k > m) throw InputError("k must not exceed the dimension");
  for (const auto& b : balls) {
    if (b.center.size() != m) throw InputError("source balls differ in dimension");
    if (!(b.radius > 0.0)) throw InputError("source ball radius must be positive");
  }
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      if (distance(balls[i].center, balls[j].center) < balls[i].radius + balls[j].radius)
        throw InputError("source balls " + std::to_string(i) + " and " + std::to_string(j) +
                         " overlap");

  DiscreteMeasure mu;
  mu.m = m;
  for (const auto& b : balls) mu.add(b.center, std::pow(b.radius, static_cast<double>(k)));

  std::vector<double> rs;
  for (std::size_t l = 0; l < radii; ++l) rs.push_back(std::ldexp(1.0, -static_cast<int>(l)));

  // inner[j][l]: dyadic integral of D^k(x_j, .) over (0, rs[l]].
  std::vector<std::vector<double>> inner(balls.size(), std::vector<double>(radii, 0.0));
  if (k < m)
    for (std::size_t j = 0; j < balls.size(); ++j)
      for (std::size_t l = 0; l < radii; ++l) {
        double sum = 0.0;
        for (std::size_t t = 0; t < inner_scales; ++t)
          sum += beta_k(mu, mu.points[j], std::ldexp(rs[l], -static_cast<int>(t)), k).value;
        inner[j][l] = sum * std::numbers::ln2;
      }

  std::vector<Point> centers{Point(m, 0.0)};
  for (const auto& b : balls)
    if (norm(b.center) < 1.0) centers.push_back(b.center);

  bool first = true;
  for (const auto& x : centers)
    for (std::size_t l = 0; l < radii; ++l) {
      const double r = rs[l];
      if (norm(x) + r > 2.0) continue;
      double value = 0.0;
      for (std::size_t j = 0; j < balls.size(); ++j)
        if (distance(mu.points[j], x) < r) value += mu.weights[j] * inner[j][l];
      const double ratio = value / std::pow(r, static_cast<double>(k));
      ++out.evaluations;
      if (first || ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.argmax_x = x;
        out.argmax_r = r;
        first = false;
      }
    }
  out.passes = out.max_ratio < delta0 * delta0;
  return out;
}

} // namespace qsing
