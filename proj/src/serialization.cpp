#include "lgrowth/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lgrowth/errors.hpp"

namespace lgrowth {

using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

[[noreturn]] void field_error(const std::string& what, const std::string& field, const std::string& why) {
  fail(ErrorCode::invalid_input, what + ": field '" + field + "' " + why);
}

double read_real(const json& j, const std::string& what, const std::string& field) {
  if (!j.is_number()) field_error(what, field, "must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) field_error(what, field, "must be finite");
  return x;
}

Complex read_complex(const json& j, const std::string& what, const std::string& field) {
  if (!j.is_array() || j.size() != 2) field_error(what, field, "must be a [re, im] pair");
  return {read_real(j[0], what, field + "[0]"), read_real(j[1], what, field + "[1]")};
}

const json& require_field(const json& obj, const std::string& what, const std::string& field) {
  if (!obj.is_object()) fail(ErrorCode::invalid_input, what + ": expected a JSON object");
  const auto it = obj.find(field);
  if (it == obj.end()) field_error(what, field, "is missing");
  return *it;
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::invalid_input, what + ": " + e.what());
  }
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string map_to_json(const LaurentMap& m) {
  json j;
  j["r"] = m.r();
  j["a0"] = complex_json(m.a0());
  j["u"] = json::array();
  for (Complex u : m.u()) j["u"].push_back(complex_json(u));
  if (!m.poles().empty()) {
    j["poles"] = json::array();
    for (const PoleTerm& t : m.poles())
      j["poles"].push_back({{"coefficient", complex_json(t.coefficient)}, {"location", complex_json(t.location)}});
  }
  return j.dump(2);
}

LaurentMap map_from_json(const std::string& text) {
  const std::string what = "map JSON";
  const json j = parse(text, what);
  const double r = read_real(require_field(j, what, "r"), what, "r");
  if (!(r > 0.0)) field_error(what, "r", "must be positive");
  const Complex a0 = read_complex(require_field(j, what, "a0"), what, "a0");
  std::vector<Complex> u;
  if (j.contains("u")) {
    const json& arr = j["u"];
    if (!arr.is_array()) field_error(what, "u", "must be an array");
    for (std::size_t k = 0; k < arr.size(); ++k) u.push_back(read_complex(arr[k], what, "u[" + std::to_string(k) + "]"));
  }
  std::vector<PoleTerm> poles;
  if (j.contains("poles")) {
    const json& arr = j["poles"];
    if (!arr.is_array()) field_error(what, "poles", "must be an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string f = "poles[" + std::to_string(k) + "]";
      poles.push_back({read_complex(require_field(arr[k], what, "coefficient"), what, f + ".coefficient"),
                       read_complex(require_field(arr[k], what, "location"), what, f + ".location")});
    }
  }
  try {
    return LaurentMap(r, a0, std::move(u), std::move(poles));
  } catch (const Error& e) {
    fail(ErrorCode::invalid_input, what + ": " + e.what());
  }
}

LaurentMap read_map_json(const std::string& path) { return map_from_json(read_text_file(path)); }

void write_map_json(const LaurentMap& m, const std::string& path) { write_text_file(path, map_to_json(m) + "\n"); }

std::string poles_to_json(const PoleData& poles) {
  json j;
  j["poles"] = json::array();
  for (const Pole& p : poles.poles)
    j["poles"].push_back({{"z", complex_json(p.location)}, {"order", p.order}, {"residue", complex_json(p.residue)}});
  return j.dump(2);
}

PoleData poles_from_json(const std::string& text) {
  const std::string what = "pole JSON";
  const json j = parse(text, what);
  const json& arr = require_field(j, what, "poles");
  if (!arr.is_array()) field_error(what, "poles", "must be an array");
  PoleData out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string f = "poles[" + std::to_string(k) + "]";
    const json& ord = require_field(arr[k], what, "order");
    if (!ord.is_number_integer() || ord.get<int>() < 1) field_error(what, f + ".order", "must be a positive integer");
    out.poles.push_back({read_complex(require_field(arr[k], what, "z"), what, f + ".z"), ord.get<int>(),
                         read_complex(require_field(arr[k], what, "residue"), what, f + ".residue")});
  }
  return out;
}

std::string curve_to_json(const CurveN1& c) {
  json j;
  j["p"] = complex_json(c.p);
  j["q"] = complex_json(c.q);
  j["mu"] = complex_json(c.mu);
  j["nu"] = complex_json(c.nu);
  if (c.solved()) {
    j["h"] = *c.h;
    j["E"] = json::array({complex_json(c.E1), complex_json(c.E2), complex_json(c.E3)});
    j["q_pole_sheet"] = c.q_pole_sheet;
  } else {
    j["h"] = nullptr;
    j["E"] = nullptr;
    j["q_pole_sheet"] = nullptr;
  }
  return j.dump(2);
}

std::string family_row_to_json(const FamilyRow& row) {
  json j;
  j["mu"] = row.mu;
  j["T"] = row.T;
  j["status"] = row.status;
  j["E1"] = real_or_null(row.E1);
  j["E2"] = real_or_null(row.E2);
  j["h"] = real_or_null(row.h);
  j["area_over_pi"] = real_or_null(row.area_over_pi);
  j["residual"] = real_or_null(row.residual);
  if (!row.message.empty()) j["message"] = row.message;
  return j.dump();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io, "read from '" + path + "' failed");
  return ss.str();
}

}  // namespace lgrowth
