#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qsing {

std::string read_text_file(const std::string& path);

/// 1-based (line, column) of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset);

/// Whitespace-separated numeric rows; '#' starts a comment; blank lines skipped.
/// Every row must have `columns` entries when columns > 0.
struct NumericRow {
  std::size_t line = 0;
  std::vector<double> values;
};
std::vector<NumericRow> parse_numeric_rows(std::string_view text, std::size_t columns = 0);

/// "start:stop:step", inclusive of stop within half a step, or a comma list "a,b,c".
std::vector<double> parse_range(std::string_view text);
/// "x1,x2,...".
std::vector<double> parse_point(std::string_view text);

/// Shortest round-trip representation ("%.17g").
std::string format_double(double v);

} // namespace qsing
