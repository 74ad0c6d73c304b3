#include "qsing/text_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsing/errors.hpp"

namespace qsing {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

double to_double(std::string_view tok, std::size_t line, std::size_t col) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  if (!tok.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v))
    throw ParseError("expected a finite number, got '" + std::string(tok) + "'", line, col);
  return v;
}

} // namespace

std::vector<NumericRow> parse_numeric_rows(std::string_view text, std::size_t columns) {
  std::vector<NumericRow> rows;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view ln = text.substr(pos, end - pos);
    if (auto h = ln.find('#'); h != std::string_view::npos) ln = ln.substr(0, h);

    NumericRow row;
    row.line = line;
    std::size_t i = 0;
    while (i < ln.size()) {
      while (i < ln.size() && is_space(ln[i])) ++i;
      if (i >= ln.size()) break;
      std::size_t j = i;
      while (j < ln.size() && !is_space(ln[j])) ++j;
      row.values.push_back(to_double(ln.substr(i, j - i), line, i + 1));
      i = j;
    }
    if (!row.values.empty()) {
      if (columns > 0 && row.values.size() != columns)
        throw ParseError("expected " + std::to_string(columns) + " columns, found " +
                             std::to_string(row.values.size()),
                         line, 1);
      rows.push_back(std::move(row));
    }
    if (end == text.size()) break;
    pos = end + 1;
    ++line;
  }
  return rows;
}

std::vector<double> parse_point(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && is_space(tok.front())) tok.remove_prefix(1);
    while (!tok.empty() && is_space(tok.back())) tok.remove_suffix(1);
    out.push_back(to_double(tok, 1, pos + 1));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::vector<double> parse_range(std::string_view text) {
  if (text.find(':') == std::string_view::npos) return parse_point(text);
  std::vector<double> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = text.find(':', pos);
    if (end == std::string_view::npos) end = text.size();
    parts.push_back(to_double(text.substr(pos, end - pos), 1, pos + 1));
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (parts.size() != 3) throw ParseError("range must be start:stop:step", 1, 1);
  const double a = parts[0], b = parts[1], h = parts[2];
  if (!(h > 0.0)) throw ParseError("range step must be positive", 1, text.rfind(':') + 2);
  if (b < a) throw ParseError("range stop is below start", 1, 1);
  const auto n = static_cast<long long>(std::floor((b - a) / h + 0.5));
  std::vector<double> out;
  for (long long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
  if (std::abs(out.back() - b) <= 1e-9 * h) out.back() = b;
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace qsing
