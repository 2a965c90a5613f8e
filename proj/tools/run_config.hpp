#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lgcli {

// Raised for malformed or invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Pt {
  double re = 0.0, im = 0.0;
};

struct MapConfig {
  double r = 1.0;
  Pt a0;
  std::vector<Pt> u;
};

struct EvolutionConfig {
  std::size_t order = 32;
  std::size_t samples = 512;
  double max_step = 1e-2;
  double cusp_threshold = 1e-6;
  int max_halvings = 8;
  double filter_level = 1e-14;
};

struct PumpEntry {
  std::string label;
  std::optional<Pt> location;  // empty is infinity
  double dT = 0.0;
};

struct SimulateConfig {
  std::string output_dir = "out";
  MapConfig initial_map;
  EvolutionConfig evolution;
  std::vector<PumpEntry> schedule;
  double snapshot_every = 0.0;  // 0 takes one snapshot per schedule entry
  std::size_t contour_samples = 512;
  std::size_t moments = 5;
};

struct FamilyConfig {
  std::string output_dir = "out";
  double p = 2.0, q = -3.0;
  std::vector<double> mu, T;
  unsigned threads = 0;
  bool contours = false;
};

struct CurveParams {
  Pt p, q, mu, nu;
};

struct HodographPoint {
  double p = 2.0, q = -3.0, mu = 0.1, T = 1.0;
};

// Exactly one source is set.
struct TraceConfig {
  std::string output_dir = "out";
  std::optional<CurveParams> curve;
  std::optional<HodographPoint> hodograph;
  std::optional<MapConfig> map;
  std::size_t contour_samples = 512;
};

// Reads a JSON config. A run manifest is accepted too: its embedded "config"
// object is used. Parse errors report line and column.
nlohmann::json load_config(const std::string& path);

// Applies "a.b.c=value" overrides to scalar fields. Array elements are
// addressed by index ("schedule.0.dT=1"). The value is parsed as JSON when
// possible and taken as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& assignment);

SimulateConfig parse_simulate(const nlohmann::json& j);
FamilyConfig parse_family(const nlohmann::json& j);
TraceConfig parse_trace(const nlohmann::json& j);

// The normalized config written back into manifests.
nlohmann::json to_json(const SimulateConfig& c);
nlohmann::json to_json(const FamilyConfig& c);
nlohmann::json to_json(const TraceConfig& c);

}  // namespace lgcli
