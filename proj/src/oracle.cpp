#include "qsing/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "qsing/errors.hpp"
#include "qsing/frequency.hpp"
#include "qsing/text_io.hpp"

namespace qsing {

std::vector<double> FrequencyOracle::frequencies(const std::vector<Point>& ys, double r) const {
  std::vector<double> out(ys.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(ys.size()); ++i)
    out[static_cast<std::size_t>(i)] = frequency(ys[static_cast<std::size_t>(i)], r);
  return out;
}

FieldOracle::FieldOracle(AnalyticField f, WeightProfile phi, QuadratureScheme q)
    : f_(std::move(f)), phi_(std::move(phi)), q_(q) {
  // Parallelism comes from batched queries.
  q_.policy = ExecutionPolicy::Serial;
}

double FieldOracle::fresh(const Point& y, double r) const {
  return frequency_I(f_, phi_, y, r, q_).I;
}

double FieldOracle::frequency(const Point& y, double r) const {
  std::vector<long long> key;
  key.reserve(y.size() + 1);
  for (double c : y) key.push_back(std::llround(c * 1e9));
  key.push_back(std::llround(r * 1e9));
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double v = fresh(y, r);
  std::lock_guard lock(mutex_);
  cache_.emplace(std::move(key), v);
  return v;
}

std::size_t FieldOracle::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

TableOracle TableOracle::parse(std::string_view text) {
  const auto rows = parse_numeric_rows(text);
  if (rows.empty()) throw ParseError("oracle table has no rows", 1, 1);
  const std::size_t cols = rows.front().values.size();
  if (cols < 3) throw ParseError("oracle rows need y, r and I columns", rows.front().line, 1);
  for (const auto& row : rows)
    if (row.values.size() != cols)
      throw ParseError("expected " + std::to_string(cols) + " columns, found " +
                           std::to_string(row.values.size()),
                       row.line, 1);

  std::map<std::vector<double>, std::size_t> nodes;
  for (const auto& row : rows) {
    std::vector<double> key(row.values.begin(), row.values.end() - 1);
    if (!nodes.emplace(std::move(key), row.line).second)
      throw ParseError("duplicate grid node in oracle table", row.line, 1);
  }

  TableOracle t;
  const std::size_t naxes = cols - 1;
  t.axes_.resize(naxes);
  for (std::size_t a = 0; a < naxes; ++a) {
    auto& ax = t.axes_[a];
    for (const auto& row : rows) ax.push_back(row.values[a]);
    std::sort(ax.begin(), ax.end());
    ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
  }
  std::size_t total = 1;
  for (const auto& ax : t.axes_) total *= ax.size();
  if (total != rows.size())
    throw InputError("oracle table is not a full tensor grid (" + std::to_string(rows.size()) +
                     " rows, " + std::to_string(total) + " grid nodes)");

  t.values_.assign(total, std::nan(""));
  for (const auto& row : rows) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < naxes; ++a) {
      const auto& ax = t.axes_[a];
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(ax.begin(), ax.end(), row.values[a]) - ax.begin());
      flat = flat * ax.size() + idx;
    }
    if (!std::isnan(t.values_[flat]))
      throw ParseError("duplicate grid node in oracle table", row.line, 1);
    const double I = row.values.back();
    if (!(I >= 0.0)) throw InputError("oracle table has a negative frequency at line " +
                                      std::to_string(row.line));
    t.values_[flat] = I;
  }
  const std::size_t nr = t.axes_.back().size();
  for (std::size_t base = 0; base < total; base += nr)
    for (std::size_t j = 1; j < nr; ++j)
      if (t.values_[base + j] < t.values_[base + j - 1])
        throw InputError("oracle table decreases in r");
  return t;
}

TableOracle TableOracle::load(const std::string& path) { return parse(read_text_file(path)); }

double TableOracle::frequency(const Point& y, double r) const {
  if (y.size() != dim()) throw InputError("oracle query has the wrong dimension");
  const std::size_t naxes = axes_.size();
  std::vector<std::size_t> lo(naxes);
  std::vector<double> frac(naxes);
  for (std::size_t a = 0; a < naxes; ++a) {
    const auto& ax = axes_[a];
    const double v = std::clamp(a < dim() ? y[a] : r, ax.front(), ax.back());
    if (ax.size() == 1) {
      lo[a] = 0;
      frac[a] = 0.0;
      continue;
    }
    auto i = static_cast<std::size_t>(std::upper_bound(ax.begin(), ax.end(), v) - ax.begin());
    i = std::clamp<std::size_t>(i, 1, ax.size() - 1) - 1;
    lo[a] = i;
    frac[a] = (v - ax[i]) / (ax[i + 1] - ax[i]);
  }
  double sum = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << naxes); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < naxes; ++a) {
      const bool up = (corner >> a) & 1U;
      if (up && axes_[a].size() == 1) {
        w = 0.0;
        break;
      }
      w *= up ? frac[a] : 1.0 - frac[a];
      flat = flat * axes_[a].size() + lo[a] + (up ? 1 : 0);
    }
    if (w != 0.0) sum += w * values_[flat];
  }
  return sum;
}

} // namespace qsing
