// Command-line driver. Talks to the library only through the C interface.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lgrowth/lgrowth.h"
#include "run_config.hpp"

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

enum Exit { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

struct ApiError : std::runtime_error {
  lg_status status;
  ApiError(lg_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_for(lg_status s) {
  switch (s) {
    case LG_OK:
      return kOk;
    case LG_ERR_INVALID_INPUT:
    case LG_ERR_DOMAIN:
    case LG_ERR_INFEASIBLE:
      return kValidation;
    case LG_ERR_IO:
      return kIo;
    default:
      return kNumerical;
  }
}

void check(lg_status s) {
  if (s != LG_OK) throw ApiError(s, std::string(lg_status_name(s)) + ": " + lg_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using MapPtr = std::unique_ptr<lg_map, Deleter<lg_map, lg_map_free>>;
using ContourPtr = std::unique_ptr<lg_contour, Deleter<lg_contour, lg_contour_free>>;
using StatePtr = std::unique_ptr<lg_state, Deleter<lg_state, lg_state_free>>;
using CurvePtr = std::unique_ptr<lg_curve, Deleter<lg_curve, lg_curve_free>>;
using FamilyPtr = std::unique_ptr<lg_family, Deleter<lg_family, lg_family_free>>;
using ReportPtr = std::unique_ptr<lg_report, Deleter<lg_report, lg_report_free>>;

// Two-call buffer protocol for string outputs.
std::string fetch(const std::function<lg_status(char*, size_t, size_t*)>& call) {
  size_t needed = 0;
  const lg_status first = call(nullptr, 0, &needed);
  if (first != LG_OK && first != LG_ERR_BUFFER_TOO_SMALL) check(first);
  std::string buf(needed, '\0');
  check(call(buf.data(), buf.size(), &needed));
  buf.resize(needed > 0 ? needed - 1 : 0);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::filesystem::path prepare_output(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  return dir;
}

void write_contour(const lg_contour* c, const std::filesystem::path& path) {
  check(lg_contour_write_csv(c, path.string().c_str()));
}

std::string indexed(const std::string& stem, std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.csv", stem.c_str(), k);
  return buf;
}

json load(const std::string& path, const std::vector<std::string>& overrides, const std::string& out_dir) {
  json j = lgcli::load_config(path);
  for (const auto& o : overrides) lgcli::apply_override(j, o);
  if (!out_dir.empty()) j["output_dir"] = out_dir;
  return j;
}

// ---- simulate ----------------------------------------------------------------

int cmd_simulate(const json& raw) {
  const lgcli::SimulateConfig cfg = lgcli::parse_simulate(raw);

  lg_map* m0 = nullptr;
  std::vector<double> u;
  for (const auto& c : cfg.initial_map.u) {
    u.push_back(c.re);
    u.push_back(c.im);
  }
  const double a0[2] = {cfg.initial_map.a0.re, cfg.initial_map.a0.im};
  check(lg_map_create(cfg.initial_map.r, a0, u.data(), cfg.initial_map.u.size(), &m0));
  MapPtr initial(m0);

  lg_evolution_options opts = lg_evolution_options_default();
  opts.order = cfg.evolution.order;
  opts.samples = cfg.evolution.samples;
  opts.max_step = cfg.evolution.max_step;
  opts.cusp_threshold = cfg.evolution.cusp_threshold;
  opts.max_halvings = cfg.evolution.max_halvings;
  opts.filter_level = cfg.evolution.filter_level;
  lg_state* s0 = nullptr;
  check(lg_state_create(initial.get(), &opts, &s0));
  StatePtr state(s0);

  // Every pump must start in the oil domain before anything is written.
  for (const auto& e : cfg.schedule) {
    const double loc[2] = {e.location ? e.location->re : 0.0, e.location ? e.location->im : 0.0};
    check(lg_validate_pump(state.get(), e.location ? loc : nullptr));
  }

  const auto dir = prepare_output(cfg.output_dir);
  ordered manifest;
  manifest["config"] = lgcli::to_json(cfg);
  manifest["snapshots"] = ordered::array();
  manifest["moments"] = ordered::array();

  auto snapshot = [&](const lg_state* s) {
    lg_map* mp = nullptr;
    check(lg_state_map(s, &mp));
    MapPtr map(mp);
    lg_contour* cp = nullptr;
    check(lg_map_boundary(map.get(), cfg.contour_samples, &cp));
    ContourPtr contour(cp);
    const std::string file = indexed("snapshot", manifest["snapshots"].size());
    write_contour(contour.get(), dir / file);

    double T = 0.0, r = 0.0, area = 0.0;
    check(lg_state_total_time(s, &T));
    check(lg_map_radius(map.get(), &r));
    check(lg_map_area_over_pi(map.get(), &area));
    const std::string times = fetch([&](char* b, size_t c, size_t* n) { return lg_state_times_json(s, b, c, n); });
    manifest["snapshots"].push_back(
        {{"T_total", T}, {"times", ordered::parse(times)}, {"file", file}, {"r", r}, {"area_over_pi", area}});

    double t0 = 0.0;
    std::vector<double> tk(2 * cfg.moments);
    check(lg_map_moments(map.get(), cfg.moments, &t0, tk.data()));
    ordered t = ordered::array();
    for (std::size_t k = 0; k < cfg.moments; ++k) t.push_back({tk[2 * k], tk[2 * k + 1]});
    manifest["moments"].push_back({{"T_total", T}, {"t0", t0}, {"t", t}});
    manifest["final_map"] = ordered::parse(fetch([&](char* b, size_t c, size_t* n) { return lg_map_to_json(map.get(), b, c, n); }));
  };

  snapshot(state.get());
  int code = kOk;
  manifest["status"] = "ok";
  try {
    for (const auto& e : cfg.schedule) {
      if (e.dT == 0.0) continue;
      const std::size_t chunks =
          cfg.snapshot_every > 0.0 ? static_cast<std::size_t>(std::ceil(e.dT / cfg.snapshot_every - 1e-12)) : 1;
      const double loc[2] = {e.location ? e.location->re : 0.0, e.location ? e.location->im : 0.0};
      for (std::size_t k = 0; k < chunks; ++k) {
        lg_state* next = nullptr;
        check(lg_state_step(state.get(), e.label.c_str(), e.location ? loc : nullptr, e.dT / chunks, &next));
        state.reset(next);
        snapshot(state.get());
      }
    }
  } catch (const ApiError& err) {
    if (err.status == LG_ERR_IO) throw;
    code = exit_for(err.status);
    manifest["status"] = err.status == LG_ERR_CUSP ? "cusp" : "failed";
    manifest["error"] = err.what();
    double margin = 0.0, at = 0.0;
    if (err.status == LG_ERR_CUSP && lg_last_cusp(&margin, &at) == LG_OK)
      manifest["cusp"] = {{"margin", margin}, {"at_time", at}, {"message", err.what()}};
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  const auto& last = manifest["snapshots"].back();
  std::cout << "simulate: " << manifest["snapshots"].size() << " snapshots, T_total "
            << last["T_total"].dump() << ", r " << last["r"].dump() << ", status "
            << manifest["status"].get<std::string>() << "\n";
  if (code != kOk) std::cerr << "lgrowth: error: " << manifest["error"].get<std::string>() << "\n";
  return code;
}

// ---- family ----------------------------------------------------------------

int cmd_family(const json& raw) {
  const lgcli::FamilyConfig cfg = lgcli::parse_family(raw);
  const auto dir = prepare_output(cfg.output_dir);
  lg_family* fp = nullptr;
  check(lg_family_evaluate(cfg.p, cfg.q, cfg.mu.data(), cfg.mu.size(), cfg.T.data(), cfg.T.size(), cfg.threads,
                           cfg.contours ? 1 : 0, &fp));
  FamilyPtr family(fp);

  std::string rows;
  std::map<std::string, std::size_t> summary;
  ordered contours = ordered::array();
  const size_t n = lg_family_size(family.get());
  for (size_t i = 0; i < n; ++i) {
    rows += fetch([&](char* b, size_t c, size_t* k) { return lg_family_row_json(family.get(), i, b, c, k); }) + "\n";
    const std::string status =
        fetch([&](char* b, size_t c, size_t* k) { return lg_family_row_status(family.get(), i, b, c, k); });
    ++summary[status];
    if (cfg.contours && status == "solved") {
      lg_contour* cp = nullptr;
      check(lg_family_row_contour(family.get(), i, &cp));
      ContourPtr contour(cp);
      const std::string file = indexed("contour", i);
      write_contour(contour.get(), dir / file);
      contours.push_back({{"row", i}, {"file", file}});
    }
  }
  write_file(dir / "family.jsonl", rows);

  ordered manifest;
  manifest["config"] = lgcli::to_json(cfg);
  manifest["rows_file"] = "family.jsonl";
  manifest["rows"] = n;
  manifest["summary"] = ordered::object();
  for (const auto& [status, count] : summary) manifest["summary"][status] = count;
  manifest["contours"] = contours;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "family: " << n << " rows " << manifest["summary"].dump() << "\n";
  return kOk;
}

// ---- trace -------------------------------------------------------------------

int cmd_trace(const json& raw) {
  const lgcli::TraceConfig cfg = lgcli::parse_trace(raw);
  ordered manifest;
  manifest["config"] = lgcli::to_json(cfg);

  if (cfg.map) {
    std::vector<double> u;
    for (const auto& c : cfg.map->u) {
      u.push_back(c.re);
      u.push_back(c.im);
    }
    const double a0[2] = {cfg.map->a0.re, cfg.map->a0.im};
    lg_map* mp = nullptr;
    check(lg_map_create(cfg.map->r, a0, u.data(), cfg.map->u.size(), &mp));
    MapPtr map(mp);
    lg_contour* cp = nullptr;
    check(lg_map_boundary(map.get(), cfg.contour_samples, &cp));
    ContourPtr contour(cp);
    const std::string poles = fetch([&](char* b, size_t c, size_t* n) { return lg_map_poles_json(map.get(), b, c, n); });
    const auto dir = prepare_output(cfg.output_dir);
    write_contour(contour.get(), dir / "boundary.csv");
    write_file(dir / "poles.json", poles + "\n");
    manifest["boundary"] = "boundary.csv";
    manifest["poles"] = "poles.json";
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "trace: map boundary and Schwarz poles written\n";
    return kOk;
  }

  lg_curve* cp = nullptr;
  if (cfg.curve) {
    const auto& k = *cfg.curve;
    const double p[2] = {k.p.re, k.p.im}, q[2] = {k.q.re, k.q.im}, mu[2] = {k.mu.re, k.mu.im}, nu[2] = {k.nu.re, k.nu.im};
    check(lg_curve_solve(p, q, mu, nu, &cp));
  } else {
    const auto& h = *cfg.hodograph;
    check(lg_curve_from_hodograph(h.p, h.q, h.mu, h.T, &cp));
  }
  CurvePtr curve(cp);
  const auto dir = prepare_output(cfg.output_dir);
  const std::string cj = fetch([&](char* b, size_t c, size_t* n) { return lg_curve_to_json(curve.get(), b, c, n); });
  write_file(dir / "curve.json", cj + "\n");
  manifest["curve"] = "curve.json";
  manifest["components"] = ordered::array();
  size_t count = 0;
  check(lg_curve_component_count(curve.get(), &count));
  std::size_t physical_count = 0;
  for (size_t k = 0; k < count; ++k) {
    int physical = 0;
    lg_contour* tp = nullptr;
    check(lg_curve_component(curve.get(), k, &physical, &tp));
    ContourPtr contour(tp);
    double area = 0.0;
    check(lg_contour_area(contour.get(), &area));
    const std::string file = indexed("component", k);
    write_contour(contour.get(), dir / file);
    manifest["components"].push_back({{"file", file}, {"physical", physical != 0}, {"area_over_pi", area / std::numbers::pi}});
    physical_count += physical != 0;
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "trace: " << count << " components, " << physical_count << " physical\n";
  return kOk;
}

// ---- verify ------------------------------------------------------------------

int cmd_verify(const std::string& selector, unsigned long long seed, const std::string& output) {
  lg_report* rp = nullptr;
  const lg_status s = lg_verify_run(selector.c_str(), seed, &rp);
  if (s == LG_ERR_INVALID_INPUT) {
    std::cerr << "lgrowth verify: " << lg_last_error() << "\n";
    return kValidation;
  }
  check(s);
  ReportPtr report(rp);
  const std::string text = fetch([&](char* b, size_t c, size_t* n) { return lg_report_to_json(report.get(), b, c, n); });
  if (!output.empty()) write_file(output, text + "\n");
  const json j = json::parse(text);
  for (const auto& c : j["criteria"]) {
    std::cout << (c["passed"].get<bool>() ? "PASS" : "FAIL") << " [" << c["id"].get<int>() << "] "
              << c["key"].get<std::string>() << ": " << c["title"].get<std::string>();
    if (c.contains("error")) std::cout << " (error: " << c["error"].get<std::string>() << ")";
    std::cout << "\n";
    for (const auto& k : c["checks"])
      std::cout << "        " << k["label"].get<std::string>() << " = " << k["measured"].dump() << " "
                << k["relation"].get<std::string>() << " " << k["tolerance"].dump() << "\n";
  }
  const bool ok = lg_report_passed(report.get()) != 0;
  std::cout << (ok ? "all criteria passed" : "some criteria failed") << "\n";
  return ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplacian growth: conformal-map evolution, one-pole curve family and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lg_version()));

  std::string config_path, output_dir;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON config file (a run manifest is accepted too)")->required();
    sub->add_option("--set", overrides, "Override a scalar config field, e.g. --set schedule.0.dT=1.5");
    sub->add_option("--output-dir", output_dir, "Override output_dir");
  };
  auto* simulate = app.add_subcommand("simulate", "Evolve a conformal map under a pump schedule");
  add_config(simulate);
  auto* family = app.add_subcommand("family", "Solve the one-pole family on a (mu, T) grid");
  add_config(family);
  auto* trace = app.add_subcommand("trace", "Trace the boundary of a curve, family point or map");
  add_config(trace);

  std::string selector = "all", report_path;
  unsigned long long seed = 20240611ULL;
  auto* verify = app.add_subcommand("verify", "Run verification criteria and report pass/fail");
  verify->add_option("selector", selector, "Criterion key, 'area-law' or 'all'");
  verify->add_option("--seed", seed, "Seed of the random initial map in the moment check");
  verify->add_option("--output", report_path, "Write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }

  try {
    if (verify->parsed()) return cmd_verify(selector, seed, report_path);
    const json cfg = load(config_path, overrides, output_dir);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (family->parsed()) return cmd_family(cfg);
    return cmd_trace(cfg);
  } catch (const lgcli::ConfigError& e) {
    std::cerr << "lgrowth: invalid config: " << e.what() << "\n";
    return kValidation;
  } catch (const ApiError& e) {
    std::cerr << "lgrowth: error: " << e.what() << "\n";
    return exit_for(e.status);
  } catch (const IoError& e) {
    std::cerr << "lgrowth: I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "lgrowth: I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "lgrowth: error: " << e.what() << "\n";
    return kNumerical;
  }
}
