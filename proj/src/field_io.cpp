#include "qsing/field_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qsing/errors.hpp"
#include "qsing/text_io.hpp"

namespace qsing {

using nlohmann::json;

namespace {

AnalyticField field_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": field description must be an object");
  const std::string kind = j.value("kind", "");
  if (kind == "planar_branch") {
    if (!j.contains("Q") || !j["Q"].is_number_integer())
      throw InputError(where + ": planar_branch needs integer Q");
    std::vector<Term> terms;
    for (const auto& t : j.value("terms", json::array())) {
      if (!t.contains("p") || !t["p"].is_number_integer())
        throw InputError(where + ": every term needs integer p");
      terms.push_back({t["p"].get<int>(), {t.value("re", 0.0), t.value("im", 0.0)}});
    }
    return AnalyticField::planar(j["Q"].get<int>(), std::move(terms));
  }
  if (kind == "cylinder") {
    if (!j.contains("base")) throw InputError(where + ": cylinder needs base");
    if (!j.contains("m") || !j["m"].is_number_integer())
      throw InputError(where + ": cylinder needs integer m");
    const int m = j["m"].get<int>();
    if (m < 3) throw InputError(where + ": cylinder needs m >= 3");
    return AnalyticField::cylinder(field_from_json(j["base"], where + ".base"),
                                   static_cast<std::size_t>(m));
  }
  if (kind == "shifted") {
    if (!j.contains("base")) throw InputError(where + ": shifted needs base");
    if (!j.contains("offset") || !j["offset"].is_array())
      throw InputError(where + ": shifted needs offset array");
    return AnalyticField::shifted(field_from_json(j["base"], where + ".base"),
                                  j["offset"].get<std::vector<double>>());
  }
  throw InputError(where + ": unknown field kind '" + kind + "'");
}

json field_json(const AnalyticField& f) {
  switch (f.kind()) {
  case FieldKind::PlanarBranch: {
    json terms = json::array();
    for (const auto& t : f.base().terms())
      terms.push_back({{"p", t.p}, {"re", t.c.real()}, {"im", t.c.imag()}});
    return {{"kind", "planar_branch"}, {"Q", f.q()}, {"terms", terms}};
  }
  case FieldKind::CylindricalExtension:
    return {{"kind", "cylinder"}, {"base", field_json(*f.child())}, {"m", f.m()}};
  case FieldKind::Shifted:
    return {{"kind", "shifted"}, {"base", field_json(*f.child())}, {"offset", f.own_offset()}};
  }
  return {};
}

} // namespace

AnalyticField parse_field(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed field description: " + std::string(e.what()), line, col);
  }
  try {
    return field_from_json(j, "field");
  } catch (const json::type_error& e) {
    throw InputError(std::string("field description has a wrongly typed entry: ") + e.what());
  }
}

AnalyticField load_field(const std::string& path) { return parse_field(read_text_file(path)); }

std::string field_to_json(const AnalyticField& f) { return field_json(f).dump(); }

} // namespace qsing
