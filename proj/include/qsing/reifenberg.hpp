#pragma once

#include <cstddef>
#include <vector>

#include "qsing/linalg.hpp"

namespace qsing {

struct SourceBall {
  Point center;
  double radius = 0.0;
};

struct ReifenbergReport {
  double max_ratio = 0.0; // max over (x, r) of r^{-k} int_{B_r(x)} int_0^r D^k(y, s) ds/s dmu(y)
  Point argmax_x;
  double argmax_r = 0.0;
  bool passes = true;     // max_ratio < delta0^2
  std::size_t evaluations = 0;
};

/// mu = sum s_j^k delta_{x_j} over pairwise disjoint balls B_{s_j}(x_j). Centers x are the
/// origin and the atoms in B_1; radii r = 1, 1/2, ... (`radii` of them) with B_r(x) ⊂ B_2.
/// The inner integral is the dyadic sum over s = r, r/2, ... (`inner_scales` terms) times ln 2.
ReifenbergReport reifenberg_hypothesis_check(const std::vector<SourceBall>& balls, std::size_t k,
                                             double delta0, std::size_t radii = 4,
                                             std::size_t inner_scales = 8);

} // namespace qsing
