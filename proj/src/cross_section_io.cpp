#include "pulimp/cross_section_io.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "pulimp/errors.hpp"

namespace pulimp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::parse, "field '" + field + "': " + what);
}

double number(const json& obj, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    fail(path + key, "missing");
  }
  if (!it->is_number()) fail(path + key, "expected a number");
  return it->get<double>();
}

Role parse_role(const json& obj, const std::string& path) {
  const auto it = obj.find("role");
  if (it == obj.end()) return Role::other;
  if (!it->is_string()) fail(path + "role", "expected a string");
  const auto s = it->get<std::string>();
  if (s == "phase") return Role::phase;
  if (s == "screen") return Role::screen;
  if (s == "armor") return Role::armor;
  if (s == "other") return Role::other;
  fail(path + "role", "unknown role '" + s + "'");
}

Connection parse_connection(const json& obj, const std::string& path) {
  const auto it = obj.find("connection");
  if (it == obj.end()) return Connection::kept;
  if (!it->is_string()) fail(path + "connection", "expected a string");
  const auto s = it->get<std::string>();
  if (s == "kept") return Connection::kept;
  if (s == "grounded") return Connection::grounded;
  fail(path + "connection", "unknown connection '" + s + "'");
}

const char* role_name(Role r) {
  switch (r) {
    case Role::phase: return "phase";
    case Role::screen: return "screen";
    case Role::armor: return "armor";
    case Role::other: return "other";
  }
  return "other";
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

CrossSection parse_cross_section(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " +
                                      e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::parse, "line 1: top-level value must be an object");

  double scale = 1e-3;
  if (const auto it = doc.find("units"); it != doc.end()) {
    if (!it->is_string()) fail("units", "expected \"mm\" or \"m\"");
    const auto u = it->get<std::string>();
    if (u == "mm") {
      scale = 1e-3;
    } else if (u == "m") {
      scale = 1.0;
    } else {
      fail("units", "expected \"mm\" or \"m\", got '" + u + "'");
    }
  } else {
    fail("units", "missing");
  }

  CrossSection cs;
  cs.outer_permittivity = number(doc, "outer_rel_permittivity", "", 1.0) * kEps0;

  const auto list = doc.find("conductors");
  if (list == doc.end()) fail("conductors", "missing");
  if (!list->is_array()) fail("conductors", "expected an array");

  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto& item = (*list)[i];
    const std::string path = "conductors[" + std::to_string(i) + "].";
    if (!item.is_object()) fail(path.substr(0, path.size() - 1), "expected an object");
    Conductor c;
    const auto id = item.find("id");
    if (id == item.end()) fail(path + "id", "missing");
    if (!id->is_number_integer()) fail(path + "id", "expected an integer");
    c.id = id->get<int>();
    c.center_x = number(item, "x", path) * scale;
    c.center_y = number(item, "y", path) * scale;
    c.radius = number(item, "radius", path) * scale;
    c.conductivity = number(item, "sigma", path);
    c.rel_permeability = number(item, "mu_r", path, 1.0);
    c.rel_permittivity = number(item, "eps_r", path, 1.0);
    c.role = parse_role(item, path);
    c.connection = parse_connection(item, path);
    cs.conductors.push_back(c);
  }
  return cs;
}

CrossSection read_cross_section(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cross_section(buf.str());
}

std::string to_json(const CrossSection& cs, LengthUnit unit) {
  const double scale = unit == LengthUnit::millimeter ? 1e3 : 1.0;
  nlohmann::ordered_json doc;
  doc["units"] = unit == LengthUnit::millimeter ? "mm" : "m";
  doc["outer_rel_permittivity"] = cs.outer_permittivity / kEps0;
  doc["conductors"] = nlohmann::ordered_json::array();
  for (const auto& c : cs.conductors) {
    doc["conductors"].push_back({{"id", c.id},
                                 {"x", c.center_x * scale},
                                 {"y", c.center_y * scale},
                                 {"radius", c.radius * scale},
                                 {"sigma", c.conductivity},
                                 {"mu_r", c.rel_permeability},
                                 {"eps_r", c.rel_permittivity},
                                 {"role", role_name(c.role)},
                                 {"connection", c.connection == Connection::grounded ? "grounded" : "kept"}});
  }
  return doc.dump(2) + "\n";
}

void write_cross_section(const std::filesystem::path& path, const CrossSection& cs, LengthUnit unit) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << to_json(cs, unit);
}

}  // namespace pulimp
