#include "qsing/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qsing/errors.hpp"
#include "qsing/spine.hpp"
#include "qsing/text_io.hpp"

namespace qsing {

const char* tag_name(BallTag t) {
  switch (t) {
  case BallTag::Good: return "good";
  case BallTag::Bad: return "bad";
  case BallTag::Floor: return "floor";
  case BallTag::Drop: return "drop";
  }
  return "?";
}

namespace {

using Indices = std::vector<std::size_t>;

struct Piece {
  Point center;
  double radius = 0.0;
  Indices pts;
};

void check_common(const std::vector<Point>& D, const Point& x, double R, double rho,
                  double delta) {
  if (!(rho > 0.0) || rho > 0.01) throw InputError("rho must lie in (0, 1/100]");
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (!(R > 0.0)) throw InputError("covering radius must be positive");
  for (const auto& p : D) {
    if (p.size() != x.size()) throw InputError("point dimension does not match the center");
    if (distance(p, x) >= R * (1.0 + 1e-12)) throw InputError("point set is not inside B_r(x)");
  }
}

Indices lex_sorted(const std::vector<Point>& D, Indices idx) {
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (D[a] != D[b]) return D[a] < D[b];
    return a < b;
  });
  return idx;
}

/// Centers at points of D, taken in lexicographic order when no earlier center is within
/// `radius`; centers are therefore >= radius apart and every point is in some open ball.
std::vector<Piece> greedy_cover(const std::vector<Point>& D, const Indices& idx, double radius) {
  std::vector<Piece> out;
  for (std::size_t i : lex_sorted(D, idx)) {
    bool inside = false;
    for (const auto& c : out)
      if (distance(D[i], c.center) < radius) {
        inside = true;
        break;
      }
    if (!inside) out.push_back({D[i], radius, {}});
  }
  for (std::size_t i : idx)
    for (auto& c : out)
      if (distance(D[i], c.center) < radius) {
        c.pts.push_back(i);
        break;
      }
  for (auto& c : out) std::sort(c.pts.begin(), c.pts.end());
  return out;
}

double sup_frequency(const FrequencyOracle& oracle, const std::vector<Point>& D, const Indices& idx,
                     double r) {
  std::vector<Point> ys;
  ys.reserve(idx.size());
  for (std::size_t i : idx) ys.push_back(D[i]);
  double u = -std::numeric_limits<double>::infinity();
  for (double v : oracle.frequencies(ys, r)) u = std::max(u, v);
  return u;
}

std::vector<Point> gather(const std::vector<Point>& D, const Indices& idx) {
  std::vector<Point> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(D[i]);
  return out;
}

double packing_power(double radius, std::size_t m) {
  return std::pow(radius, static_cast<double>(m) - 2.0);
}

void finish(CoveringResult& res) {
  res.packing_sum = 0.0;
  for (const auto& b : res.balls) res.packing_sum += packing_power(b.radius, res.m);
}

} // namespace

CoveringResult intermediate_cover(const std::vector<Point>& D, const FrequencyOracle& oracle,
                                  const Point& x, double tau, double sigma, double rho,
                                  double delta) {
  check_common(D, x, tau, rho, delta);
  if (!(sigma > 0.0) || !(sigma < tau)) throw InputError("intermediate cover needs 0 < sigma < tau");
  const std::size_t m = x.size();
  if (m < 2) throw InputError("covering needs m >= 2");

  CoveringResult res;
  res.m = m;
  const double factor = 10.0 * rho;
  while (tau * std::pow(factor, static_cast<double>(res.kappa)) > sigma) ++res.kappa;
  if (D.empty()) return res;

  Indices all(D.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double U = sup_frequency(oracle, D, all, tau);
  res.drop_log.push_back(U);

  struct Kept {
    Ball ball;
    Indices pts;
    Indices high;
    AffinePlane tube;
  };
  std::vector<Kept> kept;
  std::vector<Piece> current{{x, tau, all}};

  for (std::size_t k = 0; k < res.kappa; ++k) {
    ++res.rounds;
    const double rk = tau * std::pow(factor, static_cast<double>(k));
    const double rnext = rk * factor;

    // One batched oracle call per level: every point lying in some current ball.
    Indices touched;
    for (std::size_t i = 0; i < D.size(); ++i)
      for (const auto& w : current)
        if (distance(D[i], w.center) < w.radius) {
          touched.push_back(i);
          break;
        }
    const auto freq = oracle.frequencies(gather(D, touched), rho * rk);
    std::vector<char> high(D.size(), 0);
    for (std::size_t t = 0; t < touched.size(); ++t)
      if (freq[t] > U - delta) high[touched[t]] = 1;

    Indices refine;
    std::vector<AffinePlane> spines;
    for (const auto& w : current) {
      Indices F;
      for (std::size_t i : touched)
        if (high[i] && distance(D[i], w.center) < w.radius) F.push_back(i);
      const auto Fp = gather(D, F);
      if (auto span = spans_k_plane(Fp, w.center, w.radius, rho, m - 2)) {
        for (std::size_t i : w.pts) {
          refine.push_back(i);
          if (span->plane.distance_to(D[i]) >= rho * rk) ++res.off_tube_points;
        }
        spines.push_back(span->plane);
      } else {
        auto tube = tube_fallback(Fp, w.center, w.radius, rho, m - 2);
        kept.push_back({{w.center, w.radius, static_cast<int>(k), BallTag::Bad}, w.pts,
                        std::move(F), std::move(tube.plane)});
      }
    }
    std::sort(refine.begin(), refine.end());

    auto next = greedy_cover(D, refine, rnext);
    // A new ball meeting the shrunken ball of a kept one lies inside the kept ball.
    std::vector<Piece> survivors;
    Indices orphans;
    for (auto& c : next) {
      bool clash = false;
      for (const auto& kb : kept)
        if (distance(c.center, kb.ball.center) < rnext + kb.ball.radius / 5.0) {
          clash = true;
          break;
        }
      if (clash)
        orphans.insert(orphans.end(), c.pts.begin(), c.pts.end());
      else
        survivors.push_back(std::move(c));
    }
    for (std::size_t i : orphans) {
      bool placed = false;
      for (auto& s : survivors)
        if (distance(D[i], s.center) < s.radius) {
          s.pts.push_back(i);
          placed = true;
          break;
        }
      for (auto it = kept.begin(); !placed && it != kept.end(); ++it)
        if (distance(D[i], it->ball.center) < it->ball.radius) {
          it->pts.push_back(i);
          placed = true;
        }
      if (!placed) throw InternalLogicError("intermediate cover lost a point while dropping balls");
    }
    for (auto& s : survivors) std::sort(s.pts.begin(), s.pts.end());
    for (auto& kb : kept) std::sort(kb.pts.begin(), kb.pts.end());
    current = std::move(survivors);
  }

  for (auto& kb : kept) {
    res.balls.push_back(kb.ball);
    res.assigned_sets.push_back(std::move(kb.pts));
    res.high_sets.push_back(std::move(kb.high));
    res.tubes.push_back(std::move(kb.tube));
  }
  for (auto& w : current) {
    res.balls.push_back({w.center, w.radius, static_cast<int>(res.kappa), BallTag::Floor});
    res.assigned_sets.push_back(std::move(w.pts));
    res.high_sets.emplace_back();
    res.tubes.push_back(AffinePlane{w.center, {}});
  }
  finish(res);
  res.C_V = res.packing_sum / packing_power(tau, m);
  return res;
}

CoveringResult final_cover(const std::vector<Point>& D, const FrequencyOracle& oracle,
                           const Point& x, double r, double s, double delta, double rho) {
  check_common(D, x, r, rho, delta);
  if (!(s > 0.0) || !(s < r)) throw InputError("final cover needs 0 < s < r");
  const std::size_t m = x.size();
  if (m < 2) throw InputError("covering needs m >= 2");

  CoveringResult res;
  res.m = m;
  res.tube_bound = static_cast<std::size_t>(
      std::ceil(std::pow(6.0, static_cast<double>(m)) * std::pow(rho, 3.0 - static_cast<double>(m))));
  if (D.empty()) return res;

  Indices all(D.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double U = sup_frequency(oracle, D, all, r);
  res.drop_log.push_back(U);

  Indices floor_pts;
  std::vector<Piece> pieces;
  std::vector<Piece> pending{{x, r, all}};
  while (!pending.empty()) {
    ++res.rounds;
    std::vector<Piece> next;
    for (const auto& w : pending) {
      if (w.radius <= s) {
        floor_pts.insert(floor_pts.end(), w.pts.begin(), w.pts.end());
        continue;
      }
      const auto local = gather(D, w.pts);
      const auto sub = intermediate_cover(local, oracle, w.center, w.radius, s, rho, delta);
      res.off_tube_points += sub.off_tube_points;
      for (std::size_t b = 0; b < sub.balls.size(); ++b) {
        Indices pts;
        for (std::size_t i : sub.assigned_sets[b]) pts.push_back(w.pts[i]);
        if (sub.balls[b].tag == BallTag::Floor) {
          floor_pts.insert(floor_pts.end(), pts.begin(), pts.end());
          continue;
        }
        const double rb = sub.balls[b].radius;
        std::vector<char> in_high(D.size(), 0);
        for (std::size_t i : sub.high_sets[b]) in_high[w.pts[i]] = 1;
        Indices tube_pts, rest;
        for (std::size_t i : pts) (in_high[i] ? tube_pts : rest).push_back(i);

        const auto tube_balls = greedy_cover(D, tube_pts, 4.0 * rho * rb);
        res.max_tube_count = std::max(res.max_tube_count, tube_balls.size());
        if (tube_balls.size() > res.tube_bound)
          throw InternalLogicError("tube coverage needs " + std::to_string(tube_balls.size()) +
                                   " balls, above the bound " + std::to_string(res.tube_bound));
        for (const auto& tb : tube_balls) {
          if (tb.radius <= s)
            floor_pts.insert(floor_pts.end(), tb.pts.begin(), tb.pts.end());
          else
            next.push_back(tb);
        }
        if (!rest.empty()) pieces.push_back({sub.balls[b].center, rb, std::move(rest)});
      }
    }
    pending = std::move(next);
  }

  const double ceiling = U - delta + 1e-12 * std::max(1.0, std::abs(U));
  for (const auto& pc : pieces) {
    const double radius = rho * pc.radius;
    if (radius <= s) {
      floor_pts.insert(floor_pts.end(), pc.pts.begin(), pc.pts.end());
      continue;
    }
    for (auto& part : greedy_cover(D, pc.pts, radius)) {
      for (std::size_t i : part.pts)
        if (!(oracle.fresh(D[i], radius) <= ceiling))
          throw InternalLogicError("frequency drop not confirmed on a dropped set");
      res.balls.push_back({part.center, radius, static_cast<int>(res.rounds), BallTag::Drop});
      res.assigned_sets.push_back(std::move(part.pts));
    }
  }

  std::sort(floor_pts.begin(), floor_pts.end());
  for (auto& fl : greedy_cover(D, floor_pts, s)) {
    res.balls.push_back({fl.center, s, -1, BallTag::Floor});
    res.assigned_sets.push_back(std::move(fl.pts));
  }
  finish(res);
  res.C_V = res.packing_sum / packing_power(r, m);
  return res;
}

CoveringResult minkowski_cover_driver(const std::vector<Point>& D, const FrequencyOracle& oracle,
                                      double rho_target, double delta, double rho) {
  if (!(rho_target > 0.0)) throw InputError("rho_target must be positive");
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  CoveringResult res;
  if (D.empty()) return res;
  const std::size_t m = D.front().size();
  res.m = m;
  for (const auto& p : D)
    if (p.size() != m) throw InputError("points differ in dimension");

  Point lo = D.front(), hi = D.front();
  for (const auto& p : D)
    for (std::size_t d = 0; d < m; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  Point x(m);
  for (std::size_t d = 0; d < m; ++d) x[d] = 0.5 * (lo[d] + hi[d]);
  double reach = 0.0;
  for (const auto& p : D) reach = std::max(reach, distance(p, x));
  const double r0 = std::max(reach * (1.0 + 1e-9) + 1e-12, 2.0 * rho_target);

  Indices all(D.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double U0 = sup_frequency(oracle, D, all, r0);
  res.kappa = static_cast<std::size_t>(std::floor(U0 / delta)) + 1;

  Indices floor_pts;
  std::vector<Piece> work{{x, r0, all}};
  while (!work.empty()) {
    if (++res.rounds > res.kappa)
      throw InternalLogicError("frequency-drop iteration exceeded floor(U0/delta) + 1 rounds");
    double U = -std::numeric_limits<double>::infinity();
    for (const auto& w : work) U = std::max(U, sup_frequency(oracle, D, w.pts, w.radius));
    res.drop_log.push_back(U);

    std::vector<Piece> next;
    for (const auto& w : work) {
      if (w.radius <= rho_target) {
        floor_pts.insert(floor_pts.end(), w.pts.begin(), w.pts.end());
        continue;
      }
      const auto sub = final_cover(gather(D, w.pts), oracle, w.center, w.radius, rho_target,
                                   delta, rho);
      res.C_V = std::max(res.C_V, sub.C_V);
      res.tube_bound = sub.tube_bound;
      res.max_tube_count = std::max(res.max_tube_count, sub.max_tube_count);
      res.off_tube_points += sub.off_tube_points;
      for (std::size_t b = 0; b < sub.balls.size(); ++b) {
        Indices pts;
        for (std::size_t i : sub.assigned_sets[b]) pts.push_back(w.pts[i]);
        if (sub.balls[b].tag == BallTag::Floor) {
          ++res.raw_balls;
          floor_pts.insert(floor_pts.end(), pts.begin(), pts.end());
        } else {
          next.push_back({sub.balls[b].center, sub.balls[b].radius, std::move(pts)});
        }
      }
    }
    work = std::move(next);
  }

  std::sort(floor_pts.begin(), floor_pts.end());
  for (auto& fl : greedy_cover(D, floor_pts, rho_target)) {
    res.balls.push_back({fl.center, rho_target, -1, BallTag::Floor});
    res.assigned_sets.push_back(std::move(fl.pts));
  }
  finish(res);
  return res;
}

PackingAudit packing_verify(const CoveringResult& result, const std::vector<Point>& D, double r) {
  if (!(r > 0.0)) throw InputError("reference radius must be positive");
  PackingAudit a;
  a.packing_sum = 0.0;
  for (const auto& b : result.balls) a.packing_sum += packing_power(b.radius, result.m);
  a.normalized = a.packing_sum / packing_power(r, result.m);
  for (std::size_t i = 0; i < D.size(); ++i) {
    bool in = false;
    for (const auto& b : result.balls)
      if (distance(D[i], b.center) < b.radius) {
        in = true;
        break;
      }
    if (!in) {
      a.covered = false;
      a.missed.push_back(i);
    }
  }
  for (std::size_t b = 0; b < result.balls.size() && b < result.assigned_sets.size(); ++b)
    for (std::size_t i : result.assigned_sets[b])
      if (i >= D.size() || distance(D[i], result.balls[b].center) >= result.balls[b].radius)
        a.assignment_ok = false;
  return a;
}

std::string covering_to_text(const CoveringResult& result, const PackingAudit& audit) {
  std::ostringstream ss;
  ss << "# center radius scale_index tag\n";
  for (const auto& b : result.balls) {
    for (double c : b.center) ss << format_double(c) << ' ';
    ss << format_double(b.radius) << ' ' << b.scale_index << ' ' << tag_name(b.tag) << '\n';
  }
  ss << "# balls " << result.balls.size() << '\n';
  ss << "# packing_sum " << format_double(result.packing_sum) << '\n';
  ss << "# normalized " << format_double(audit.normalized) << '\n';
  ss << "# rounds " << result.rounds << '\n';
  ss << "# kappa " << result.kappa << '\n';
  ss << "# drop_log";
  for (double u : result.drop_log) ss << ' ' << format_double(u);
  ss << '\n';
  ss << "# audit " << (audit.covered && audit.assignment_ok ? "pass" : "fail");
  if (!audit.missed.empty()) {
    ss << " missed";
    for (std::size_t i : audit.missed) ss << ' ' << i;
  }
  ss << '\n';
  return ss.str();
}

} // namespace qsing
