#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lgcli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "' " + why);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(where.empty() ? "<root>" : where, "must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) bad(where.empty() ? key : where + "." + key, "is not a recognized key");
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double real_at(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(field, "must be finite");
  return x;
}

double real_field(const json& obj, const std::string& where, const std::string& key, double fallback) {
  return obj.contains(key) ? real_at(obj.at(key), join(where, key)) : fallback;
}

double positive_field(const json& obj, const std::string& where, const std::string& key, double fallback) {
  const double x = real_field(obj, where, key, fallback);
  if (!(x > 0.0)) bad(join(where, key), "must be positive");
  return x;
}

std::size_t count_field(const json& obj, const std::string& where, const std::string& key, std::size_t fallback,
                        std::size_t minimum) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum))
    bad(join(where, key), "must be an integer >= " + std::to_string(minimum));
  return v.get<std::size_t>();
}

std::string string_field(const json& obj, const std::string& where, const std::string& key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) bad(join(where, key), "must be a string");
  return obj.at(key).get<std::string>();
}

std::string output_dir(const json& obj) {
  const std::string dir = string_field(obj, "", "output_dir", "out");
  if (dir.empty()) bad("output_dir", "must not be empty");
  return dir;
}

Pt point_at(const json& j, const std::string& field) {
  if (j.is_number()) return {real_at(j, field), 0.0};
  if (!j.is_array() || j.size() != 2) bad(field, "must be a number or a [re, im] pair");
  return {real_at(j[0], field + "[0]"), real_at(j[1], field + "[1]")};
}

Pt point_field(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) bad(join(where, key), "is missing");
  return point_at(obj.at(key), join(where, key));
}

json point_json(const Pt& p) { return json::array({p.re, p.im}); }

MapConfig parse_map(const json& j, const std::string& where) {
  check_keys(j, where, {"r", "a0", "u"});
  MapConfig m;
  m.r = positive_field(j, where, "r", 1.0);
  if (j.contains("a0")) m.a0 = point_at(j.at("a0"), join(where, "a0"));
  if (j.contains("u")) {
    const json& u = j.at("u");
    if (!u.is_array()) bad(join(where, "u"), "must be an array");
    for (std::size_t k = 0; k < u.size(); ++k) m.u.push_back(point_at(u[k], join(where, "u") + "[" + std::to_string(k) + "]"));
  }
  return m;
}

json map_json(const MapConfig& m) {
  json u = json::array();
  for (const Pt& p : m.u) u.push_back(point_json(p));
  return {{"r", m.r}, {"a0", point_json(m.a0)}, {"u", u}};
}

std::vector<double> grid_field(const json& obj, const std::string& key) {
  if (!obj.contains(key)) bad(key, "is missing");
  const json& g = obj.at(key);
  std::vector<double> out;
  if (g.is_number()) {
    out.push_back(real_at(g, key));
  } else if (g.is_array()) {
    for (std::size_t k = 0; k < g.size(); ++k) out.push_back(real_at(g[k], key + "[" + std::to_string(k) + "]"));
  } else if (g.is_object()) {
    check_keys(g, key, {"from", "to", "count"});
    const double lo = real_field(g, key, "from", 0.0);
    const double hi = real_field(g, key, "to", lo);
    const std::size_t n = count_field(g, key, "count", 1, 1);
    for (std::size_t k = 0; k < n; ++k) out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (n - 1));
  } else {
    bad(key, "must be a number, an array or {from, to, count}");
  }
  if (out.empty()) bad(key, "must contain at least one value");
  return out;
}

}  // namespace

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  if (j.is_object() && j.contains("config") && j.at("config").is_object()) return j.at("config");
  return j;
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' must have the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  if (!value.is_primitive()) throw ConfigError("override '" + path + "' must set a scalar value");

  json* node = &config;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override path '" + path + "' has an empty component");
    const bool last = dot == std::string::npos;
    if (node->is_array()) {
      std::size_t index = 0;
      try {
        std::size_t used = 0;
        index = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("override path '" + path + "': '" + key + "' is not an array index");
      }
      if (index >= node->size()) throw ConfigError("override path '" + path + "': index " + key + " out of range");
      node = &(*node)[index];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError("override path '" + path + "' descends into a scalar");
      node = &(*node)[key];
    }
    if (last) break;
    start = dot + 1;
  }
  if (node->is_structured()) throw ConfigError("override '" + path + "' would replace a section; only scalars can be set");
  *node = value;
}

SimulateConfig parse_simulate(const json& j) {
  check_keys(j, "", {"command", "output_dir", "initial_map", "evolution", "schedule", "snapshot_every",
                     "contour_samples", "moments"});
  SimulateConfig c;
  c.output_dir = output_dir(j);
  if (j.contains("initial_map")) c.initial_map = parse_map(j.at("initial_map"), "initial_map");
  if (j.contains("evolution")) {
    const json& e = j.at("evolution");
    check_keys(e, "evolution", {"order", "samples", "max_step", "cusp_threshold", "max_halvings", "filter_level"});
    c.evolution.order = count_field(e, "evolution", "order", c.evolution.order, 1);
    c.evolution.samples = count_field(e, "evolution", "samples", c.evolution.samples, 8);
    c.evolution.max_step = positive_field(e, "evolution", "max_step", c.evolution.max_step);
    c.evolution.cusp_threshold = positive_field(e, "evolution", "cusp_threshold", c.evolution.cusp_threshold);
    c.evolution.max_halvings = static_cast<int>(count_field(e, "evolution", "max_halvings", 8, 0));
    c.evolution.filter_level = real_field(e, "evolution", "filter_level", c.evolution.filter_level);
    if (c.evolution.filter_level < 0.0) bad("evolution.filter_level", "must be >= 0");
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (!s.is_array()) bad("schedule", "must be an array");
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::string where = "schedule[" + std::to_string(k) + "]";
      check_keys(s[k], where, {"label", "location", "dT"});
      PumpEntry e;
      if (s[k].contains("location") && !s[k].at("location").is_null())
        e.location = point_at(s[k].at("location"), where + ".location");
      e.label = string_field(s[k], where, "label", e.location ? "a" + std::to_string(k) : "inf");
      if (!s[k].contains("dT")) bad(where + ".dT", "is missing");
      e.dT = real_at(s[k].at("dT"), where + ".dT");
      if (e.dT < 0.0) bad(where + ".dT", "must be >= 0");
      c.schedule.push_back(e);
    }
  }
  c.snapshot_every = real_field(j, "", "snapshot_every", 0.0);
  if (c.snapshot_every < 0.0) bad("snapshot_every", "must be >= 0");
  c.contour_samples = count_field(j, "", "contour_samples", c.contour_samples, 8);
  c.moments = count_field(j, "", "moments", c.moments, 0);
  return c;
}

FamilyConfig parse_family(const json& j) {
  check_keys(j, "", {"command", "output_dir", "p", "q", "mu", "T", "threads", "contours"});
  FamilyConfig c;
  c.output_dir = output_dir(j);
  c.p = real_field(j, "", "p", c.p);
  c.q = real_field(j, "", "q", c.q);
  c.mu = grid_field(j, "mu");
  c.T = grid_field(j, "T");
  c.threads = static_cast<unsigned>(count_field(j, "", "threads", 0, 0));
  if (j.contains("contours")) {
    if (!j.at("contours").is_boolean()) bad("contours", "must be true or false");
    c.contours = j.at("contours").get<bool>();
  }
  return c;
}

TraceConfig parse_trace(const json& j) {
  check_keys(j, "", {"command", "output_dir", "curve", "hodograph", "map", "contour_samples"});
  TraceConfig c;
  c.output_dir = output_dir(j);
  c.contour_samples = count_field(j, "", "contour_samples", c.contour_samples, 8);
  int sources = 0;
  if (j.contains("curve")) {
    const json& k = j.at("curve");
    check_keys(k, "curve", {"p", "q", "mu", "nu"});
    c.curve = CurveParams{point_field(k, "curve", "p"), point_field(k, "curve", "q"), point_field(k, "curve", "mu"),
                          point_field(k, "curve", "nu")};
    ++sources;
  }
  if (j.contains("hodograph")) {
    const json& k = j.at("hodograph");
    check_keys(k, "hodograph", {"p", "q", "mu", "T"});
    HodographPoint h;
    h.p = real_field(k, "hodograph", "p", h.p);
    h.q = real_field(k, "hodograph", "q", h.q);
    h.mu = real_field(k, "hodograph", "mu", h.mu);
    h.T = real_field(k, "hodograph", "T", h.T);
    c.hodograph = h;
    ++sources;
  }
  if (j.contains("map")) {
    c.map = parse_map(j.at("map"), "map");
    ++sources;
  }
  if (sources != 1) bad("curve|hodograph|map", "exactly one source section is required");
  return c;
}

json to_json(const SimulateConfig& c) {
  json schedule = json::array();
  for (const PumpEntry& e : c.schedule)
    schedule.push_back({{"label", e.label}, {"location", e.location ? point_json(*e.location) : json(nullptr)}, {"dT", e.dT}});
  return {{"command", "simulate"},
          {"output_dir", c.output_dir},
          {"initial_map", map_json(c.initial_map)},
          {"evolution",
           {{"order", c.evolution.order},
            {"samples", c.evolution.samples},
            {"max_step", c.evolution.max_step},
            {"cusp_threshold", c.evolution.cusp_threshold},
            {"max_halvings", c.evolution.max_halvings},
            {"filter_level", c.evolution.filter_level}}},
          {"schedule", schedule},
          {"snapshot_every", c.snapshot_every},
          {"contour_samples", c.contour_samples},
          {"moments", c.moments}};
}

json to_json(const FamilyConfig& c) {
  return {{"command", "family"}, {"output_dir", c.output_dir}, {"p", c.p},           {"q", c.q},
          {"mu", c.mu},          {"T", c.T},                   {"threads", c.threads}, {"contours", c.contours}};
}

json to_json(const TraceConfig& c) {
  json j = {{"command", "trace"}, {"output_dir", c.output_dir}, {"contour_samples", c.contour_samples}};
  if (c.curve)
    j["curve"] = {{"p", point_json(c.curve->p)},
                  {"q", point_json(c.curve->q)},
                  {"mu", point_json(c.curve->mu)},
                  {"nu", point_json(c.curve->nu)}};
  if (c.hodograph)
    j["hodograph"] = {{"p", c.hodograph->p}, {"q", c.hodograph->q}, {"mu", c.hodograph->mu}, {"T", c.hodograph->T}};
  if (c.map) j["map"] = map_json(*c.map);
  return j;
}

}  // namespace lgcli
