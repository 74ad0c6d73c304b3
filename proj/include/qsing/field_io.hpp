#pragma once

#include <string>
#include <string_view>

#include "qsing/field.hpp"

namespace qsing {

/// Parses {"kind":"planar_branch","Q":2,"terms":[{"p":1,"re":1.0,"im":0.0}]},
/// {"kind":"cylinder","base":{...},"m":3} or {"kind":"shifted","base":{...},"offset":[...]}.
/// Malformed text throws ParseError; well-formed but invalid fields throw InputError.
AnalyticField parse_field(std::string_view text);
AnalyticField load_field(const std::string& path);
std::string field_to_json(const AnalyticField& f);

} // namespace qsing
