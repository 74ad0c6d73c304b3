#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsing {

/// Malformed input text (field description, measure file, oracle table, range syntax).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// A documented precondition of an operation does not hold
/// (dimension mismatch, radius out of range, rho > 1/100, ...).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Gradient requested on the branch set, where fields are only Hölder.
class SingularPointError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// H_phi vanishes (within tolerance) on the annulus, so the frequency is undefined.
class DegenerateHeightError : public std::domain_error {
public:
  DegenerateHeightError(const std::string& what, double dirichlet, double height)
      : std::domain_error(what), dirichlet_(dirichlet), height_(height) {}

  double dirichlet() const noexcept { return dirichlet_; }
  double height() const noexcept { return height_; }

private:
  double dirichlet_;
  double height_;
};

/// An algorithm violated one of its own loop invariants (round bound, tube containment).
class InternalLogicError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace qsing
