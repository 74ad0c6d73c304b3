#include "qsing/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsing/errors.hpp"

namespace qsing {

PlanarBranch::PlanarBranch(int q, std::vector<Term> terms) : q_(q), terms_(std::move(terms)) {
  if (q_ < 1) throw InputError("branching order Q must be >= 1");
  for (const auto& t : terms_) {
    if (t.p < 1) throw InputError("term powers must be positive integers");
    if (q_ >= 2 && t.p % q_ == 0)
      throw InputError("term power " + std::to_string(t.p) + " is a multiple of Q=" +
                       std::to_string(q_) + "; its branches do not average to zero");
  }
  roots_.resize(terms_.size() * static_cast<std::size_t>(q_));
  for (std::size_t t = 0; t < terms_.size(); ++t)
    for (int k = 0; k < q_; ++k) {
      const long long e = (static_cast<long long>(k) * terms_[t].p) % q_;
      roots_[t * q_ + k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / q_);
    }
}

double PlanarBranch::alpha_min() const {
  if (terms_.empty()) return 0.0;
  int p = terms_.front().p;
  for (const auto& t : terms_) p = std::min(p, t.p);
  return static_cast<double>(p) / q_;
}

double PlanarBranch::alpha_max() const {
  if (terms_.empty()) return 0.0;
  int p = terms_.front().p;
  for (const auto& t : terms_) p = std::max(p, t.p);
  return static_cast<double>(p) / q_;
}

double PlanarBranch::coefficient_mass() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.c);
  return s;
}

void PlanarBranch::values(Complex z, Complex* u) const {
  for (int k = 0; k < q_; ++k) u[k] = 0.0;
  const double r = std::abs(z);
  if (r == 0.0) return;
  const double logr = std::log(r);
  const double arg = std::arg(z);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const double a = static_cast<double>(terms_[t].p) / q_;
    const Complex w0p = std::polar(std::exp(a * logr), a * arg);
    const Complex cw = terms_[t].c * w0p;
    for (int k = 0; k < q_; ++k) u[k] += cw * roots_[t * q_ + k];
  }
}

bool PlanarBranch::sample(Complex z, Complex* u, Complex* du) const {
  const double r = std::abs(z);
  if (r == 0.0) {
    for (int k = 0; k < q_; ++k) u[k] = 0.0;
    if (q_ >= 2) return false;
    Complex d = 0.0;
    for (const auto& t : terms_)
      if (t.p == 1) d += t.c;
    du[0] = d;
    return true;
  }
  for (int k = 0; k < q_; ++k) {
    u[k] = 0.0;
    du[k] = 0.0;
  }
  const double logr = std::log(r);
  const double arg = std::arg(z);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const double a = static_cast<double>(terms_[t].p) / q_;
    const Complex cw = terms_[t].c * std::polar(std::exp(a * logr), a * arg);
    for (int k = 0; k < q_; ++k) {
      const Complex v = cw * roots_[t * q_ + k];
      u[k] += v;
      du[k] += a * v;
    }
  }
  for (int k = 0; k < q_; ++k) du[k] /= z;
  return true;
}

AnalyticField AnalyticField::planar(int q, std::vector<Term> terms) {
  return planar(PlanarBranch(q, std::move(terms)));
}

AnalyticField AnalyticField::planar(const PlanarBranch& base) {
  AnalyticField f;
  f.kind_ = FieldKind::PlanarBranch;
  f.base_ = base;
  f.m_ = 2;
  f.offset_ = Point(2, 0.0);
  return f;
}

AnalyticField AnalyticField::cylinder(const AnalyticField& base, std::size_t m) {
  if (m < 3) throw InputError("cylindrical extension needs m >= 3");
  if (base.m() != 2) throw InputError("cylindrical extension base must be a planar field");
  AnalyticField f;
  f.kind_ = FieldKind::CylindricalExtension;
  f.base_ = base.base_;
  f.m_ = m;
  f.offset_ = Point(m, 0.0);
  f.offset_[0] = base.offset_[0];
  f.offset_[1] = base.offset_[1];
  f.child_ = std::make_shared<const AnalyticField>(base);
  return f;
}

AnalyticField AnalyticField::shifted(const AnalyticField& inner, Point offset) {
  if (offset.size() != inner.m()) throw InputError("shift offset dimension does not match field");
  AnalyticField f = inner;
  f.kind_ = FieldKind::Shifted;
  for (std::size_t i = 0; i < offset.size(); ++i) f.offset_[i] += offset[i];
  f.own_offset_ = std::move(offset);
  f.child_ = std::make_shared<const AnalyticField>(inner);
  return f;
}

Complex AnalyticField::planar_coordinate(std::span<const double> y) const {
  if (y.size() != m_)
    throw InputError("point has dimension " + std::to_string(y.size()) + ", field expects " +
                     std::to_string(m_));
  return {y[0] - offset_[0], y[1] - offset_[1]};
}

MultiPoint evaluate(const AnalyticField& f, std::span<const double> x) {
  const Complex z = f.planar_coordinate(x);
  std::vector<Complex> u(static_cast<std::size_t>(f.q()));
  f.base().values(z, u.data());
  std::vector<Point> vals;
  vals.reserve(u.size());
  for (const auto& v : u) vals.push_back({v.real(), v.imag()});
  return MultiPoint(std::move(vals));
}

std::vector<Jacobian> gradient(const AnalyticField& f, std::span<const double> x) {
  const Complex z = f.planar_coordinate(x);
  const auto q = static_cast<std::size_t>(f.q());
  std::vector<Complex> u(q), du(q);
  if (!f.base().sample(z, u.data(), du.data()))
    throw SingularPointError("gradient requested on the branch set");
  std::vector<Jacobian> out;
  out.reserve(q);
  for (const auto& d : du) {
    Jacobian j(2, std::vector<double>(f.m(), 0.0));
    j[0][0] = d.real();
    j[0][1] = -d.imag();
    j[1][0] = d.imag();
    j[1][1] = d.real();
    out.push_back(std::move(j));
  }
  return out;
}

bool is_q_point(const AnalyticField& f, std::span<const double> x, double tol) {
  return evaluate(f, x).norm() <= tol;
}

} // namespace qsing
