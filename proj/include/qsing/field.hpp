#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "qsing/linalg.hpp"
#include "qsing/multipoint.hpp"

namespace qsing {

using Complex = std::complex<double>;

/// c * z^(p/Q), summed over terms.
struct Term {
  int p = 1;
  Complex c{1.0, 0.0};
};

/// The Q branches of sum_t c_t z^(p_t/Q) on the plane. Branch k uses
/// w_k = |z|^(1/Q) exp(i (arg z + 2 pi k) / Q) with arg z in (-pi, pi].
class PlanarBranch {
public:
  PlanarBranch() = default;
  /// Rejects Q < 1, p < 1, and (for Q >= 2) powers divisible by Q, whose branches do not average to zero.
  PlanarBranch(int q, std::vector<Term> terms);

  int q() const { return q_; }
  const std::vector<Term>& terms() const { return terms_; }
  double alpha_min() const;
  double alpha_max() const;
  /// sum_t |c_t|^2
  double coefficient_mass() const;

  /// Writes u_k(z) and the complex derivative f'_k(z) for k = 0..Q-1.
  /// Returns false (outputs untouched for du) when z lies on the branch point and Q >= 2.
  bool sample(Complex z, Complex* u, Complex* du) const;
  void values(Complex z, Complex* u) const;

private:
  int q_ = 1;
  std::vector<Term> terms_;
  std::vector<Complex> roots_; // exp(2 pi i k p / Q) laid out [term][k]
};

enum class FieldKind { PlanarBranch, CylindricalExtension, Shifted };

/// Closed-form Q-valued field on R^m with values in R^2. Every field reduces to
/// y -> base((y - offset)_1 + i (y - offset)_2), constant in coordinates 3..m.
class AnalyticField {
public:
  static AnalyticField planar(int q, std::vector<Term> terms);
  static AnalyticField planar(const PlanarBranch& base);
  /// base must be planar (optionally shifted); m >= 3.
  static AnalyticField cylinder(const AnalyticField& base, std::size_t m);
  static AnalyticField shifted(const AnalyticField& inner, Point offset);

  FieldKind kind() const { return kind_; }
  int q() const { return base_.q(); }
  std::size_t m() const { return m_; }
  std::size_t n() const { return 2; }
  const PlanarBranch& base() const { return base_; }
  const Point& offset() const { return offset_; }
  /// Set for CylindricalExtension (its base) and Shifted (the inner field).
  const AnalyticField* child() const { return child_.get(); }
  /// Translation applied by this Shifted node alone.
  const Point& own_offset() const { return own_offset_; }

  /// Planar coordinate of y relative to the branch point.
  Complex planar_coordinate(std::span<const double> y) const;

private:
  FieldKind kind_ = FieldKind::PlanarBranch;
  PlanarBranch base_;
  std::size_t m_ = 2;
  Point offset_;
  Point own_offset_;
  std::shared_ptr<const AnalyticField> child_;
};

using Jacobian = std::vector<std::vector<double>>; // n rows, m columns

MultiPoint evaluate(const AnalyticField& f, std::span<const double> x);
/// Per-branch Jacobians in the same order as evaluate. Throws SingularPointError on the branch set.
std::vector<Jacobian> gradient(const AnalyticField& f, std::span<const double> x);
bool is_q_point(const AnalyticField& f, std::span<const double> x, double tol);

} // namespace qsing
