#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lgrowth/lgrowth.h"

namespace {

std::string map_json(const lg_map* m) {
  size_t needed = 0;
  REQUIRE(lg_map_to_json(m, nullptr, 0, &needed) == LG_ERR_BUFFER_TOO_SMALL);
  std::string s(needed, '\0');
  REQUIRE(lg_map_to_json(m, s.data(), s.size(), &needed) == LG_OK);
  s.resize(needed - 1);
  return s;
}

lg_map* circle(double r) {
  const double a0[2] = {0.0, 0.0};
  lg_map* m = nullptr;
  REQUIRE(lg_map_create(r, a0, nullptr, 0, &m) == LG_OK);
  return m;
}

}  // namespace

TEST_CASE("buffer protocol and JSON round trip") {
  const double a0[2] = {0.5, 0.0};
  const double u[4] = {0.2, 0.0, 0.0, 0.05};
  lg_map* m = nullptr;
  REQUIRE(lg_map_create(1.5, a0, u, 2, &m) == LG_OK);
  const std::string text = map_json(m);
  char small[4];
  size_t needed = 0;
  CHECK(lg_map_to_json(m, small, sizeof small, &needed) == LG_ERR_BUFFER_TOO_SMALL);
  CHECK(needed == text.size() + 1);

  lg_map* back = nullptr;
  REQUIRE(lg_map_from_json(text.c_str(), &back) == LG_OK);
  double coeffs[4];
  REQUIRE(lg_map_coefficients(back, coeffs, 4, &needed) == LG_OK);
  CHECK(needed == 4);
  for (int k = 0; k < 4; ++k) CHECK(coeffs[k] == u[k]);
  const double w[2] = {1.0, 0.0};
  double z[2];
  REQUIRE(lg_map_evaluate(back, w, z) == LG_OK);
  CHECK(z[0] == doctest::Approx(2.2));
  lg_map_free(back);
  lg_map_free(m);
}

TEST_CASE("errors carry a status and a message") {
  lg_map* m = nullptr;
  const double a0[2] = {0.0, 0.0};
  CHECK(lg_map_create(-1.0, a0, nullptr, 0, &m) == LG_ERR_INVALID_INPUT);
  CHECK(m == nullptr);
  CHECK(std::strlen(lg_last_error()) > 0);
  CHECK(lg_map_from_json("{\"r\": 1", &m) == LG_ERR_INVALID_INPUT);
  CHECK(lg_map_radius(nullptr, nullptr) == LG_ERR_INVALID_INPUT);
  CHECK(std::string(lg_status_name(LG_ERR_CUSP)) == "cusp");
  lg_contour* c = nullptr;
  CHECK(lg_contour_read_csv("/nonexistent/dir/file.csv", &c) == LG_ERR_IO);
  lg_map_free(nullptr);
  lg_contour_free(nullptr);
}

TEST_CASE("evolution through handles") {
  lg_map* m = circle(1.0);
  lg_state* s = nullptr;
  REQUIRE(lg_state_create(m, nullptr, &s) == LG_OK);
  const double inside[2] = {0.2, 0.0};
  CHECK(lg_validate_pump(s, inside) == LG_ERR_DOMAIN);
  lg_state* t = nullptr;
  REQUIRE(lg_state_step(s, "inf", nullptr, 3.0, &t) == LG_OK);
  lg_map* fm = nullptr;
  REQUIRE(lg_state_map(t, &fm) == LG_OK);
  double r = 0.0, T = 0.0;
  REQUIRE(lg_map_radius(fm, &r) == LG_OK);
  REQUIRE(lg_state_total_time(t, &T) == LG_OK);
  CHECK(std::abs(r - 2.0) < 1e-8);
  CHECK(T == 3.0);
  size_t needed = 0;
  char buf[128];
  REQUIRE(lg_state_times_json(t, buf, sizeof buf, &needed) == LG_OK);
  CHECK(nlohmann::json::parse(buf)["inf"] == 3.0);
  lg_map_free(fm);
  lg_state_free(t);
  lg_state_free(s);
  lg_map_free(m);
}

TEST_CASE("cusp diagnostics are retrievable") {
  lg_map* m = circle(1.0);
  lg_evolution_options opts = lg_evolution_options_default();
  opts.cusp_threshold = 0.95;
  lg_state* s = nullptr;
  REQUIRE(lg_state_create(m, &opts, &s) == LG_OK);
  const double pump[2] = {2.0, 0.0};
  lg_state* t = nullptr;
  CHECK(lg_state_step(s, "a", pump, 0.2, &t) == LG_ERR_CUSP);
  CHECK(t == nullptr);
  double margin = 1.0, at = -1.0;
  REQUIRE(lg_last_cusp(&margin, &at) == LG_OK);
  CHECK(margin < 0.95);
  CHECK(at >= 0.0);
  lg_state_free(s);
  lg_map_free(m);
}

TEST_CASE("contours and CSV") {
  // Areas are spectral, so the samples describe a smooth closed curve.
  std::vector<double> xy;
  for (int j = 0; j < 64; ++j) {
    xy.push_back(2.0 * std::cos(2.0 * std::numbers::pi * j / 64));
    xy.push_back(2.0 * std::sin(2.0 * std::numbers::pi * j / 64));
  }
  lg_contour* c = nullptr;
  REQUIRE(lg_contour_create(xy.data(), 64, &c) == LG_OK);
  CHECK(lg_contour_size(c) == 64);
  double a = 0.0;
  REQUIRE(lg_contour_area(c, &a) == LG_OK);
  CHECK(a == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  const auto path = (std::filesystem::temp_directory_path() / "lg_c_api_circle.csv").string();
  REQUIRE(lg_contour_write_csv(c, path.c_str()) == LG_OK);
  lg_contour* back = nullptr;
  REQUIRE(lg_contour_read_csv(path.c_str(), &back) == LG_OK);
  double d = 1.0;
  REQUIRE(lg_contour_hausdorff(c, back, &d) == LG_OK);
  CHECK(d == 0.0);
  std::filesystem::remove(path);
  lg_contour_free(back);
  lg_contour_free(c);
  CHECK(lg_contour_create(xy.data(), 2, &c) != LG_OK);
}

TEST_CASE("curve, hodograph and family") {
  double E[2], residual = 1.0;
  REQUIRE(lg_hodograph_solve(2.0, -3.0, 0.1, 1.0, E, &residual) == LG_OK);
  CHECK(E[0] < E[1]);
  CHECK(residual < 1e-12);
  CHECK(lg_hodograph_solve(2.0, -3.0, 0.0, 1.0, E, &residual) == LG_ERR_INFEASIBLE);

  lg_curve* c = nullptr;
  REQUIRE(lg_curve_from_hodograph(2.0, -3.0, 0.1, 1.0, &c) == LG_OK);
  size_t count = 0;
  REQUIRE(lg_curve_component_count(c, &count) == LG_OK);
  int physical_count = 0;
  for (size_t i = 0; i < count; ++i) {
    int physical = 0;
    lg_contour* k = nullptr;
    REQUIRE(lg_curve_component(c, i, &physical, &k) == LG_OK);
    physical_count += physical;
    if (physical) {
      double a = 0.0;
      lg_contour_area(k, &a);
      CHECK(a / std::numbers::pi == doctest::Approx(1.0).epsilon(1e-8));
    }
    lg_contour_free(k);
  }
  CHECK(physical_count == 1);
  lg_curve_free(c);

  const double mus[2] = {0.0, 0.1};
  const double Ts[1] = {1.0};
  lg_family* f = nullptr;
  REQUIRE(lg_family_evaluate(2.0, -3.0, mus, 2, Ts, 1, 2, 1, &f) == LG_OK);
  REQUIRE(lg_family_size(f) == 2);
  char status[32];
  size_t needed = 0;
  REQUIRE(lg_family_row_status(f, 0, status, sizeof status, &needed) == LG_OK);
  CHECK(std::string(status) == "infeasible");
  lg_contour* k = nullptr;
  CHECK(lg_family_row_contour(f, 0, &k) == LG_ERR_INVALID_INPUT);
  REQUIRE(lg_family_row_contour(f, 1, &k) == LG_OK);
  lg_contour_free(k);
  lg_family_free(f);
}

TEST_CASE("verification through the C interface") {
  size_t needed = 0;
  lg_verify_selectors(nullptr, 0, &needed);
  std::string names(needed, '\0');
  REQUIRE(lg_verify_selectors(names.data(), names.size(), &needed) == LG_OK);
  CHECK(names.find("area-law") != std::string::npos);

  lg_report* r = nullptr;
  CHECK(lg_verify_run("no-such-criterion", 1, &r) == LG_ERR_INVALID_INPUT);
  CHECK(std::string(lg_last_error()).find("area-law") != std::string::npos);
  REQUIRE(lg_verify_run("area-law", 1, &r) == LG_OK);
  CHECK(lg_report_passed(r) == 1);
  lg_report_to_json(r, nullptr, 0, &needed);
  std::string text(needed, '\0');
  REQUIRE(lg_report_to_json(r, text.data(), text.size(), &needed) == LG_OK);
  text.resize(needed - 1);
  CHECK(nlohmann::json::parse(text)["criteria"].size() == 2);
  lg_report_free(r);
}

TEST_CASE("real formatting") {
  char buf[32];
  size_t needed = 0;
  REQUIRE(lg_format_real(0.1, buf, sizeof buf, &needed) == LG_OK);
  CHECK(std::string(buf) == "0.10000000000000001");
}
