#include "qsing/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/legendre.hpp>
#include <boost/random/sobol.hpp>

#include "qsing/chebyshev.hpp"
#include "qsing/errors.hpp"

namespace qsing {

void QuadratureScheme::validate() const {
  if (radial_nodes < 4) throw InputError("radial_nodes must be >= 4");
  if (angular_nodes < 4) throw InputError("angular_nodes must be >= 4");
  if (mc_samples < 4) throw InputError("mc_samples must be >= 4");
}

QuadratureScheme QuadratureScheme::coarse() const {
  QuadratureScheme c = *this;
  c.radial_nodes = std::max(4, radial_nodes / 2 + 2);
  c.angular_nodes = std::max(4, angular_nodes / 2);
  c.mc_samples = std::max(4, mc_samples / 4);
  c.seed = seed + 1;
  return c;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InputError("Gauss-Legendre rule needs n >= 1");
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> xs;
  for (double z : zeros) {
    xs.push_back(z);
    if (z != 0.0) xs.push_back(-z);
  }
  std::sort(xs.begin(), xs.end());
  GaussRule g;
  for (double x : xs) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    g.nodes.push_back(0.5 * (x + 1.0));
    g.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return g;
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGradingRatio = 0.25;
constexpr double kGradingFloor = 1e-14;
constexpr int kReducedNodes = 40;

struct RadialNode {
  double rho;
  double weight;
};

// Gauss-Legendre on [a, b] after rho = a + (b - a)(1 - cos(pi v)) / 2, which absorbs
// square-root behaviour at both ends of the panel.
void append_mapped_panel(double a, double b, const GaussRule& g, std::vector<RadialNode>& out) {
  const double len = b - a;
  if (!(len > 0.0)) return;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double v = g.nodes[i];
    out.push_back({a + 0.5 * len * (1.0 - std::cos(kPi * v)),
                   g.weights[i] * 0.5 * len * kPi * std::sin(kPi * v)});
  }
}

void append_plain_panel(double a, double b, const GaussRule& g, std::vector<RadialNode>& out) {
  const double len = b - a;
  if (!(len > 0.0)) return;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    out.push_back({a + len * g.nodes[i], g.weights[i] * len});
}

// Geometric panels refining toward 0, for integrands with a power singularity there.
void append_graded_panel(double b, double scale, const GaussRule& g,
                         std::vector<RadialNode>& out) {
  if (!(b > 0.0)) return;
  const double floor = kGradingFloor * scale;
  double hi = b;
  bool top = true;
  while (hi > floor) {
    const double lo = hi * kGradingRatio;
    // The top panel ends on a kernel circle, where the integrand may have a square-root edge.
    if (top)
      append_mapped_panel(lo, hi, g, out);
    else
      append_plain_panel(lo, hi, g, out);
    top = false;
    hi = lo;
  }
  append_plain_panel(0.0, hi, g, out);
}

double sphere_area(std::size_t dim) {
  // |S^{dim-1}| in R^dim
  const double h = 0.5 * static_cast<double>(dim);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

struct KernelTable {
  std::vector<RadialKernel> kernels;
  std::vector<double> breaks; // sorted, in (0, R], last is R
  double R = 0.0;
  std::size_t m = 2;
  std::vector<std::vector<ChebyshevInterpolant>> reduced; // [kernel][panel between breaks]

  void build_reduced(int nodes) {
    const GaussRule g = gauss_legendre(nodes);
    reduced.assign(kernels.size(), {});
    for (std::size_t j = 0; j < kernels.size(); ++j) {
      double lo = 0.0;
      for (double b : breaks) {
        reduced[j].emplace_back(
            lo, b, kReducedNodes, [&](double rho) { return reduced_kernel(kernels[j], m, rho, g); },
            true);
        lo = b;
      }
    }
  }

  void eval(double rho, double* out) const {
    if (m == 2) {
      for (std::size_t j = 0; j < kernels.size(); ++j)
        out[j] = rho < kernels[j].support ? kernels[j].k(rho) : 0.0;
      return;
    }
    if (rho >= R) {
      std::fill(out, out + kernels.size(), 0.0);
      return;
    }
    const auto panel = static_cast<std::size_t>(
        std::upper_bound(breaks.begin(), breaks.end(), rho) - breaks.begin());
    for (std::size_t j = 0; j < kernels.size(); ++j)
      out[j] = rho >= kernels[j].support ? 0.0 : reduced[j][panel](rho);
  }
};

class NodeAccumulator {
public:
  NodeAccumulator(const PlanarBranch& base, Complex c, std::size_t nk)
      : base_(base), c_(c), u_(static_cast<std::size_t>(base.q())),
        du_(static_cast<std::size_t>(base.q())), sums_(nk, FeatureSums{}) {}

  void add(Complex z, double weight, const double* kv) {
    ++nodes_;
    bool any = false;
    for (std::size_t j = 0; j < sums_.size(); ++j) any = any || kv[j] != 0.0;
    if (!any || weight == 0.0) return;
    if (!base_.sample(z, u_.data(), du_.data())) {
      ++skipped_;
      return;
    }
    const Complex v = z - c_;
    const double v2 = std::norm(v);
    double fu = 0.0, fd = 0.0, fp = 0.0;
    for (std::size_t k = 0; k < u_.size(); ++k) {
      fu += std::norm(u_[k]);
      fd += std::norm(du_[k]);
      fp += std::real(du_[k] * v * std::conj(u_[k]));
    }
    const FeatureSums feat{fu, fd, fd * v2, fp};
    for (std::size_t j = 0; j < sums_.size(); ++j) {
      const double wk = weight * kv[j];
      for (std::size_t i = 0; i < kFeatureCount; ++i) sums_[j][i] += wk * feat[i];
    }
  }

  const std::vector<FeatureSums>& sums() const { return sums_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t skipped() const { return skipped_; }

private:
  const PlanarBranch& base_;
  Complex c_;
  std::vector<Complex> u_, du_;
  std::vector<FeatureSums> sums_;
  std::size_t nodes_ = 0;
  std::size_t skipped_ = 0;
};

struct Partial {
  std::vector<FeatureSums> sums;
  std::size_t nodes = 0;
  std::size_t skipped = 0;
};

KernelIntegrals reduce_in_order(const std::vector<Partial>& parts, std::size_t nk) {
  KernelIntegrals out;
  out.sums.assign(nk, FeatureSums{});
  for (const auto& p : parts) {
    for (std::size_t j = 0; j < nk; ++j)
      for (std::size_t i = 0; i < kFeatureCount; ++i) out.sums[j][i] += p.sums[j][i];
    out.nodes += p.nodes;
    out.skipped += p.skipped;
  }
  return out;
}

// Radial nodes along the ray t -> t e from the branch point, split where the ray
// crosses the kernel circles |y - c| = b.
std::vector<RadialNode> ray_nodes(Complex c, double theta, const KernelTable& kt,
                                  const GaussRule& g) {
  const double px = std::cos(theta) * c.real() + std::sin(theta) * c.imag();
  const double d2 = std::norm(c);
  std::vector<double> cuts;
  double tmax = 0.0;
  for (double b : kt.breaks) {
    const double disc = px * px - d2 + b * b;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    for (double t : {px - sq, px + sq})
      if (t > 0.0) cuts.push_back(t);
    if (b == kt.R) tmax = px + sq;
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double t) { return t > tmax; }),
             cuts.end());
  std::vector<RadialNode> out;
  if (cuts.empty()) return out;
  append_graded_panel(cuts.front(), kt.R, g, out);
  for (std::size_t i = 1; i < cuts.size(); ++i) append_mapped_panel(cuts[i - 1], cuts[i], g, out);
  return out;
}

// Angles (from the branch point) where a ray is tangent to a kernel circle; the angular
// integrand has square-root edges there.
std::vector<double> tangent_angles(Complex c, const KernelTable& kt) {
  const double d = std::abs(c);
  std::vector<double> out;
  if (d == 0.0) return out;
  const double phase = std::arg(c);
  for (double b : kt.breaks) {
    if (b >= d) continue;
    const double half = std::acos(std::sqrt(d * d - b * b) / d);
    for (double t : {phase - half, phase + half}) out.push_back(t);
  }
  return out;
}

struct AngularNode {
  double theta;
  double weight;
};

// Uniform rule when the angular integrand is smooth and periodic, otherwise cosine-mapped
// Gauss-Legendre panels between the tangent angles with about na nodes in total.
std::vector<AngularNode> angular_rule(const std::vector<double>& tangents, int na) {
  std::vector<AngularNode> out;
  if (tangents.empty()) {
    const double dtheta = 2.0 * kPi / na;
    for (int a = 0; a < na; ++a) out.push_back({dtheta * a, dtheta});
    return out;
  }
  std::vector<double> cuts;
  for (double t : tangents) cuts.push_back(std::remainder(t - tangents.front(), 2.0 * kPi));
  for (double& t : cuts)
    if (t < 0.0) t += 2.0 * kPi;
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  cuts.push_back(2.0 * kPi);
  constexpr int kPanelNodes = 16;
  const GaussRule g = gauss_legendre(kPanelNodes);
  std::vector<RadialNode> tmp;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (!(len > 0.0)) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(na * len / (2.0 * kPi * kPanelNodes))));
    for (int j = 0; j < pieces; ++j)
      append_mapped_panel(cuts[i] + len * j / pieces, cuts[i] + len * (j + 1) / pieces, g, tmp);
  }
  for (const auto& n : tmp) out.push_back({n.rho + tangents.front(), n.weight});
  return out;
}

KernelIntegrals planar_rule(const PlanarBranch& base, Complex c, const KernelTable& kt,
                            const QuadratureScheme& q) {
  const GaussRule g = gauss_legendre(q.radial_nodes);
  const std::size_t nk = kt.kernels.size();
  // Branch point inside the disc: polar coordinates about the branch point.
  const bool about_branch = std::abs(c) < kt.R;
  const auto angles = angular_rule(about_branch ? tangent_angles(c, kt) : std::vector<double>{},
                                   q.angular_nodes);
  const int na = static_cast<int>(angles.size());

  std::vector<RadialNode> centered;
  std::vector<double> centered_kv;
  if (!about_branch) {
    double lo = 0.0;
    for (double b : kt.breaks) {
      append_mapped_panel(lo, b, g, centered);
      lo = b;
    }
    centered_kv.resize(centered.size() * nk);
    for (std::size_t i = 0; i < centered.size(); ++i)
      kt.eval(centered[i].rho, &centered_kv[i * nk]);
  }

  auto sweep = [&](int a, NodeAccumulator& acc) {
    const auto [theta, dtheta] = angles[static_cast<std::size_t>(a)];
    const Complex e = std::polar(1.0, theta);
    std::vector<double> kv(nk);
    if (about_branch) {
      for (const auto& n : ray_nodes(c, theta, kt, g)) {
        const Complex z = n.rho * e;
        kt.eval(std::abs(z - c), kv.data());
        acc.add(z, n.weight * n.rho * dtheta, kv.data());
      }
    } else {
      for (std::size_t i = 0; i < centered.size(); ++i) {
        const auto& n = centered[i];
        acc.add(c + n.rho * e, n.weight * n.rho * dtheta, &centered_kv[i * nk]);
      }
    }
  };

  if (q.policy == ExecutionPolicy::Serial) {
    NodeAccumulator acc(base, c, nk);
    for (int a = 0; a < na; ++a) sweep(a, acc);
    KernelIntegrals out;
    out.sums = acc.sums();
    out.nodes = acc.nodes();
    out.skipped = acc.skipped();
    return out;
  }

  std::vector<Partial> parts(static_cast<std::size_t>(na));
#pragma omp parallel for schedule(dynamic, 4)
  for (int a = 0; a < na; ++a) {
    NodeAccumulator acc(base, c, nk);
    sweep(a, acc);
    parts[static_cast<std::size_t>(a)] = {acc.sums(), acc.nodes(), acc.skipped()};
  }
  return reduce_in_order(parts, nk);
}

KernelIntegrals qmc_rule(const AnalyticField& f, Complex c,
                         const std::vector<RadialKernel>& kernels, double R,
                         const QuadratureScheme& q) {
  const std::size_t m = f.m();
  const std::size_t nk = kernels.size();
  const auto n = static_cast<std::size_t>(q.mc_samples);

  boost::random::sobol qrng(m);
  std::mt19937_64 rng(q.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(m);
  for (auto& s : shift) s = unif(rng);
  const double scale = 1.0 / (static_cast<double>(qrng.max()) + 1.0);
  std::vector<double> pts(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < m; ++d) {
      double u = static_cast<double>(qrng()) * scale + shift[d];
      u -= std::floor(u);
      pts[i * m + d] = R * (2.0 * u - 1.0);
    }
  const double weight = std::pow(2.0 * R, static_cast<double>(m)) / static_cast<double>(n);

  constexpr std::size_t kBlock = 4096;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  auto block = [&](std::size_t b, NodeAccumulator& acc) {
    std::vector<double> kv(nk);
    const std::size_t hi = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < hi; ++i) {
      const double* w = &pts[i * m];
      double s2 = 0.0;
      for (std::size_t d = 0; d < m; ++d) s2 += w[d] * w[d];
      const double s = std::sqrt(s2);
      if (s >= R) continue;
      for (std::size_t j = 0; j < nk; ++j)
        kv[j] = s < kernels[j].support ? kernels[j].k(s) : 0.0;
      acc.add(c + Complex(w[0], w[1]), weight, kv.data());
    }
  };

  const PlanarBranch& base = f.base();
  if (q.policy == ExecutionPolicy::Serial) {
    NodeAccumulator acc(base, c, nk);
    for (std::size_t b = 0; b < nblocks; ++b) block(b, acc);
    return {acc.sums(), acc.nodes(), acc.skipped()};
  }
  std::vector<Partial> parts(nblocks);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    NodeAccumulator acc(base, c, nk);
    block(static_cast<std::size_t>(b), acc);
    parts[static_cast<std::size_t>(b)] = {acc.sums(), acc.nodes(), acc.skipped()};
  }
  return reduce_in_order(parts, nk);
}

} // namespace

double reduced_kernel(const RadialKernel& k, std::size_t m, double rho, int nodes) {
  return reduced_kernel(k, m, rho, gauss_legendre(nodes));
}

double reduced_kernel(const RadialKernel& k, std::size_t m, double rho, const GaussRule& g) {
  if (m < 3) throw InputError("reduced kernel needs m >= 3");
  if (rho >= k.support) return 0.0;
  const double r2 = rho * rho;
  std::vector<double> cuts;
  for (double b : k.breakpoints)
    if (b > rho && b < k.support) cuts.push_back(std::sqrt(b * b - r2));
  cuts.push_back(std::sqrt(k.support * k.support - r2));
  std::sort(cuts.begin(), cuts.end());

  std::vector<RadialNode> tn;
  double lo = 0.0;
  for (double t : cuts) {
    append_mapped_panel(lo, t, g, tn);
    lo = t;
  }
  const int pw = static_cast<int>(m) - 3;
  double s = 0.0;
  for (const auto& n : tn) {
    const double sr = std::sqrt(r2 + n.rho * n.rho);
    s += n.weight * k.k(sr) * (pw == 0 ? 1.0 : std::pow(n.rho, pw));
  }
  return sphere_area(m - 2) * s;
}

KernelIntegrals integrate_kernels(const AnalyticField& f, std::span<const double> x,
                                  const std::vector<RadialKernel>& kernels,
                                  const QuadratureScheme& q) {
  q.validate();
  if (kernels.empty()) return {};
  const Complex c = f.planar_coordinate(x);

  KernelTable kt;
  kt.kernels = kernels;
  kt.m = f.m();
    for (const auto& k : kernels) {
    if (!(k.support > 0.0)) throw InputError("kernel support must be positive");
    kt.R = std::max(kt.R, k.support);
  }
  for (const auto& k : kernels) {
    for (double b : k.breakpoints)
      if (b > 0.0 && b < kt.R) kt.breaks.push_back(b);
    kt.breaks.push_back(k.support);
  }
  std::sort(kt.breaks.begin(), kt.breaks.end());
  kt.breaks.erase(std::unique(kt.breaks.begin(), kt.breaks.end()), kt.breaks.end());

  if (f.m() >= 3 && q.method == SpatialMethod::QuasiMonteCarlo)
    return qmc_rule(f, c, kernels, kt.R, q);
  if (kt.m >= 3) kt.build_reduced(q.radial_nodes);
  return planar_rule(f.base(), c, kt, q);
}

} // namespace qsing
