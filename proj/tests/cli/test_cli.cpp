// Runs the lgrowth executable on the configs in this directory and checks
// its outputs and exit codes. Usage: test_cli <lgrowth> <config dir> <work dir>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"
#include "json.hpp"
#include "lgrowth/family.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_cli, g_data;
fs::path g_work;

struct Run {
  int exit_code;
  std::string output;  // stdout and stderr
};

Run run(const std::string& args, const std::string& tag) {
  const fs::path log = g_work / (tag + ".log");
  const std::string cmd = "cd '" + g_work.string() + "' && '" + g_cli + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string config(const std::string& name) { return "'" + g_data + "/" + name + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("circle under the sink at infinity reaches r = 2 at T = 3") {
  const Run r = run("simulate " + config("circle.json") + " --output-dir circle", "circle");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  const json m = load(g_work / "circle/manifest.json");
  CHECK(std::abs(m["final_map"]["r"].get<double>() - 2.0) < 1e-8);
  CHECK(m["snapshots"].size() == 4);
  CHECK(m["snapshots"].back()["times"]["inf"] == 3.0);
  CHECK(m["config"]["schedule"][0]["dT"] == 3.0);
  const std::string csv = slurp(g_work / "circle/snapshot_0003.csv");
  CHECK(csv.rfind("x,y\n", 0) == 0);
}

TEST_CASE("overrides change scalar fields") {
  const Run r = run("simulate " + config("circle.json") + " --output-dir circle_set --set schedule.0.dT=0.75", "set");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  const json m = load(g_work / "circle_set/manifest.json");
  CHECK(std::abs(m["final_map"]["r"].get<double>() - std::sqrt(1.75)) < 1e-9);
  CHECK(run("simulate " + config("circle.json") + " --set schedule=3", "set_bad").exit_code == 2);
}

TEST_CASE("an empty schedule writes only the initial snapshot") {
  const Run r = run("simulate " + config("empty_schedule.json") + " --output-dir empty", "empty");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  CHECK(load(g_work / "empty/manifest.json")["snapshots"].size() == 1);
  CHECK(fs::exists(g_work / "empty/snapshot_0000.csv"));
  CHECK_FALSE(fs::exists(g_work / "empty/snapshot_0001.csv"));
}

TEST_CASE("a pump inside the droplet fails validation before stepping") {
  const Run r = run("simulate " + config("pump_inside.json") + " --output-dir inside", "inside");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("inside the droplet") != std::string::npos);
  CHECK_FALSE(fs::exists(g_work / "inside/snapshot_0000.csv"));
}

TEST_CASE("a cusp exits nonzero and records the diagnostic") {
  const Run r = run("simulate " + config("cusp.json") + " --output-dir cusp", "cusp");
  CHECK(r.exit_code == 3);
  const json m = load(g_work / "cusp/manifest.json");
  CHECK(m["status"] == "cusp");
  CHECK(m["cusp"]["margin"].get<double>() < 0.95);
  CHECK(m["cusp"]["at_time"].get<double>() >= 0.0);
}

TEST_CASE("a 1x1 family grid matches the library") {
  const Run r = run("family " + config("family_single.json") + " --output-dir family_single", "family_single");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  const json row = json::parse(slurp(g_work / "family_single/family.jsonl"));
  const auto lib = lgrowth::evaluate_family_point(2.0, -3.0, 0.1, 1.0);
  REQUIRE(row["status"] == "solved");
  CHECK(row["E1"].get<double>() == lib.E1);
  CHECK(row["E2"].get<double>() == lib.E2);
  CHECK(row["h"].get<double>() == lib.h);
  CHECK(row["area_over_pi"].get<double>() == lib.area_over_pi);
  CHECK(fs::exists(g_work / "family_single/contour_0000.csv"));
}

TEST_CASE("family rows with mu = 0 are infeasible and output is reproducible") {
  REQUIRE(run("family " + config("family_grid.json") + " --output-dir grid_a", "grid_a").exit_code == 0);
  REQUIRE(run("family " + config("family_grid.json") + " --output-dir grid_b --set threads=1", "grid_b").exit_code == 0);
  std::istringstream lines(slurp(g_work / "grid_a/family.jsonl"));
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    const json row = json::parse(line);
    if (row["mu"] == 0.0) {
      CHECK(row["status"] == "infeasible");
      CHECK(row["E1"].is_null());
    } else {
      CHECK(row["status"] == "solved");
    }
    ++rows;
  }
  CHECK(rows == 9);
  CHECK(slurp(g_work / "grid_a/family.jsonl") == slurp(g_work / "grid_b/family.jsonl"));
}

TEST_CASE("re-running a simulation is byte-identical") {
  REQUIRE(run("simulate " + config("circle.json") + " --output-dir again", "again").exit_code == 0);
  for (const char* f : {"manifest.json", "snapshot_0001.csv", "snapshot_0003.csv"}) {
    std::string a = slurp(g_work / "circle" / f), b = slurp(g_work / "again" / f);
    if (std::string(f) == "manifest.json") {
      json ja = json::parse(a), jb = json::parse(b);
      ja["config"].erase("output_dir");
      jb["config"].erase("output_dir");
      CHECK(ja == jb);
    } else {
      CHECK(a == b);
    }
  }
}

TEST_CASE("a manifest re-runs through its embedded config") {
  const std::string manifest = "'" + (g_work / "circle/manifest.json").string() + "'";
  const Run r = run("simulate " + manifest + " --output-dir from_manifest", "from_manifest");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  CHECK(slurp(g_work / "circle/snapshot_0003.csv") == slurp(g_work / "from_manifest/snapshot_0003.csv"));
}

TEST_CASE("trace writes the curve and its physical component") {
  const Run r = run("trace " + config("trace_hodograph.json") + " --output-dir trace", "trace");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  const json curve = load(g_work / "trace/curve.json");
  CHECK(curve["h"].is_number());
  const json m = load(g_work / "trace/manifest.json");
  REQUIRE(m["components"].size() == 1);
  CHECK(m["components"][0]["physical"] == true);
  CHECK(std::abs(m["components"][0]["area_over_pi"].get<double>() - 1.0) < 1e-6);
}

TEST_CASE("verify runs the selected criteria") {
  const Run r = run("verify area-law --output verify.json", "verify");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  CHECK(r.output.find("PASS [1]") != std::string::npos);
  CHECK(r.output.find("PASS [2]") != std::string::npos);
  CHECK(r.output.find("[3]") == std::string::npos);
  CHECK(load(g_work / "verify.json")["criteria"].size() == 2);

  const Run bad = run("verify no-such-thing", "verify_bad");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("circle-law") != std::string::npos);
  CHECK(bad.output.find("area-law") != std::string::npos);
}

TEST_CASE("config errors are usage errors with a location") {
  const Run syntax = run("simulate " + config("bad_syntax.json"), "bad_syntax");
  CHECK(syntax.exit_code == 2);
  CHECK(syntax.output.find("line 4") != std::string::npos);
  const Run field = run("simulate " + config("bad_field.json"), "bad_field");
  CHECK(field.exit_code == 2);
  CHECK(field.output.find("initial_map.r") != std::string::npos);
  const Run key = run("family " + config("unknown_key.json"), "unknown_key");
  CHECK(key.exit_code == 2);
  CHECK(key.output.find("temperature") != std::string::npos);
  CHECK(run("simulate " + config("missing.json"), "missing").exit_code == 4);
  CHECK(run("frobnicate", "usage").exit_code == 2);
}

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: %s <lgrowth> <config dir> <work dir> [doctest options]\n", argv[0]);
    return 2;
  }
  g_cli = fs::absolute(argv[1]).string();
  g_data = fs::absolute(argv[2]).string();
  g_work = fs::absolute(argv[3]);
  fs::remove_all(g_work);
  fs::create_directories(g_work);
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 3, argv + 3);
  return ctx.run();
}
