#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "qsing/field.hpp"
#include "qsing/linalg.hpp"
#include "qsing/quadrature.hpp"
#include "qsing/weight.hpp"

namespace qsing {

/// I(y, r) as seen by the covering algorithms.
class FrequencyOracle {
public:
  virtual ~FrequencyOracle() = default;
  virtual double frequency(const Point& y, double r) const = 0;
  /// Bypasses any cache; used to re-audit frequency drops.
  virtual double fresh(const Point& y, double r) const { return frequency(y, r); }
  /// frequency(y, r) for every y, evaluated in parallel, returned in input order.
  std::vector<double> frequencies(const std::vector<Point>& ys, double r) const;
};

class FieldOracle : public FrequencyOracle {
public:
  FieldOracle(AnalyticField f, WeightProfile phi, QuadratureScheme q);
  double frequency(const Point& y, double r) const override;
  double fresh(const Point& y, double r) const override;
  std::size_t cache_size() const;

private:
  AnalyticField f_;
  WeightProfile phi_;
  QuadratureScheme q_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<long long>, double> cache_;
};

class FunctionOracle : public FrequencyOracle {
public:
  explicit FunctionOracle(std::function<double(const Point&, double)> fn) : fn_(std::move(fn)) {}
  double frequency(const Point& y, double r) const override { return fn_(y, r); }

private:
  std::function<double(const Point&, double)> fn_;
};

/// Rows (y_1..y_m, r, I) on a full tensor grid; multilinear in (y, r), clamped to the box.
class TableOracle : public FrequencyOracle {
public:
  /// Throws ParseError for malformed rows, InputError for an incomplete grid, a value
  /// decreasing in r, or a negative value.
  static TableOracle parse(std::string_view text);
  static TableOracle load(const std::string& path);

  double frequency(const Point& y, double r) const override;
  std::size_t dim() const { return axes_.size() - 1; }
  std::size_t rows() const { return values_.size(); }

private:
  std::vector<std::vector<double>> axes_; // y axes then the r axis
  std::vector<double> values_;            // row-major over axes_, r fastest
};

} // namespace qsing
