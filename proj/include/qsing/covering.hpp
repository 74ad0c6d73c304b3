#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsing/linalg.hpp"
#include "qsing/oracle.hpp"

namespace qsing {

enum class BallTag { Good, Bad, Floor, Drop };
const char* tag_name(BallTag t);

struct Ball {
  Point center;
  double radius = 0.0;
  int scale_index = 0; // level of refinement that produced the ball, -1 for consolidated floors
  BallTag tag = BallTag::Floor;
};

struct CoveringResult {
  std::size_t m = 0;
  std::vector<Ball> balls;
  std::vector<std::vector<std::size_t>> assigned_sets; // indices into the input points, a partition
  double packing_sum = 0.0;                             // sum of radius^{m-2}
  std::size_t rounds = 0;
  std::vector<double> drop_log; // frequency supremum U at the start of each round

  // Per ball, filled by intermediate_cover only: the high-frequency set F (indices into the
  // input) and the plane whose rho r-tube contains it.
  std::vector<std::vector<std::size_t>> high_sets;
  std::vector<AffinePlane> tubes;

  std::size_t kappa = 0;          // level (intermediate) or round (driver) bound
  std::size_t off_tube_points = 0; // refined points farther than rho r from the spanned plane
  std::size_t tube_bound = 0;      // ceil(6^m rho^{3-m})
  std::size_t max_tube_count = 0;  // largest tube-coverage count actually used
  double C_V = 0.0;                // packing_sum / r^{m-2} (driver: largest over its final covers)
  std::size_t raw_balls = 0;       // driver: balls before the last floor consolidation
};

/// Balls at radii tau (10 rho)^j; good balls (F rho r-spans an (m-2)-plane) are refined until the
/// radius drops to sigma or below, bad balls are kept with the tube holding F.
/// F = D ∩ B ∩ {I(y, rho radius) > U - delta}, U = max over D of I(y, tau).
CoveringResult intermediate_cover(const std::vector<Point>& D, const FrequencyOracle& oracle,
                                  const Point& x, double tau, double sigma, double rho,
                                  double delta);

/// Every assigned set either sits in a floor ball of radius s or in a ball B_{s_i} with
/// max I(y, s_i) <= U - delta over the set, re-audited with fresh oracle calls.
CoveringResult final_cover(const std::vector<Point>& D, const FrequencyOracle& oracle,
                           const Point& x, double r, double s, double delta, double rho = 0.01);

/// Repeats final_cover on the dropped sets until every ball has radius rho_target.
CoveringResult minkowski_cover_driver(const std::vector<Point>& D, const FrequencyOracle& oracle,
                                      double rho_target, double delta = 0.05, double rho = 0.01);

struct PackingAudit {
  double packing_sum = 0.0;
  double normalized = 0.0; // packing_sum / r^{m-2}
  bool covered = true;
  std::vector<std::size_t> missed; // points in no ball
  bool assignment_ok = true;       // each assigned point lies in its ball
};

PackingAudit packing_verify(const CoveringResult& result, const std::vector<Point>& D, double r);

/// One line per ball (center, radius, scale_index, tag) then a '#' summary block.
std::string covering_to_text(const CoveringResult& result, const PackingAudit& audit);

} // namespace qsing
