#include "lgrowth/lgrowth.h"

#include <cstring>
#include <new>
#include <numbers>
#include <string>

#include "json.hpp"
#include "lgrowth/curve_n1.hpp"
#include "lgrowth/dynamics.hpp"
#include "lgrowth/errors.hpp"
#include "lgrowth/family.hpp"
#include "lgrowth/hodograph.hpp"
#include "lgrowth/schwarz.hpp"
#include "lgrowth/serialization.hpp"
#include "lgrowth/verify.hpp"

struct lg_map {
  lgrowth::LaurentMap value;
};
struct lg_contour {
  lgrowth::Contour value;
};
struct lg_state {
  lgrowth::EvolutionState value;
};
struct lg_curve {
  lgrowth::CurveN1 value;
  std::vector<lgrowth::TracedComponent> components;
};
struct lg_family {
  std::vector<lgrowth::FamilyRow> rows;
};
struct lg_report {
  lgrowth::VerifyReport value;
};

namespace {

using lgrowth::Complex;

thread_local std::string g_last_error;
thread_local double g_cusp_margin = 0.0;
thread_local double g_cusp_time = 0.0;
thread_local bool g_has_cusp = false;

lg_status set_error(lg_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

template <class F>
lg_status guarded(F&& body) {
  try {
    return body();
  } catch (const lgrowth::CuspError& e) {
    g_cusp_margin = e.margin();
    g_cusp_time = e.at_time();
    g_has_cusp = true;
    return set_error(LG_ERR_CUSP, e.what());
  } catch (const lgrowth::Error& e) {
    return set_error(static_cast<lg_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LG_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(LG_ERR_INTERNAL, "unknown exception");
  }
}

lg_status null_argument(const char* name) {
  return set_error(LG_ERR_INVALID_INPUT, std::string("argument '") + name + "' is NULL");
}

#define LG_REQUIRE(ptr)                            \
  do {                                             \
    if ((ptr) == nullptr) return null_argument(#ptr); \
  } while (0)

lg_status copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  const size_t n = s.size() + 1;
  if (needed) *needed = n;
  if (buf == nullptr || cap < n) return set_error(LG_ERR_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, s.c_str(), n);
  return LG_OK;
}

lg_status copy_complex(const std::vector<Complex>& v, double* buf, size_t cap, size_t* needed) {
  const size_t n = 2 * v.size();
  if (needed) *needed = n;
  if (n == 0) return LG_OK;
  if (buf == nullptr || cap < n) return set_error(LG_ERR_BUFFER_TOO_SMALL, "buffer too small");
  for (size_t k = 0; k < v.size(); ++k) {
    buf[2 * k] = v[k].real();
    buf[2 * k + 1] = v[k].imag();
  }
  return LG_OK;
}

Complex complex_at(const double* xy) { return {xy[0], xy[1]}; }

lgrowth::PumpSpec pump_from(const char* label, const double* location) {
  const std::string name = label ? label : (location ? "a" : "inf");
  return location ? lgrowth::PumpSpec::at(name, complex_at(location)) : lgrowth::PumpSpec::at_infinity(name);
}

}  // namespace

extern "C" {

const char* lg_version(void) { return "0.1.0"; }

const char* lg_status_name(lg_status status) {
  if (status == LG_OK) return "ok";
  if (status == LG_ERR_BUFFER_TOO_SMALL) return "buffer_too_small";
  if (status >= LG_ERR_INVALID_INPUT && status <= LG_ERR_INTERNAL)
    return lgrowth::error_code_name(static_cast<lgrowth::ErrorCode>(status));
  return "unknown";
}

const char* lg_last_error(void) { return g_last_error.c_str(); }

lg_status lg_last_cusp(double* margin, double* at_time) {
  if (!g_has_cusp) return set_error(LG_ERR_INVALID_INPUT, "no cusp has been reported on this thread");
  if (margin) *margin = g_cusp_margin;
  if (at_time) *at_time = g_cusp_time;
  return LG_OK;
}

// ---- maps ------------------------------------------------------------------

lg_status lg_map_create(double r, const double a0[2], const double* u, size_t K, lg_map** out) {
  LG_REQUIRE(a0);
  LG_REQUIRE(out);
  if (K > 0) LG_REQUIRE(u);
  return guarded([&] {
    std::vector<Complex> coeffs(K);
    for (size_t k = 0; k < K; ++k) coeffs[k] = complex_at(u + 2 * k);
    *out = new lg_map{lgrowth::LaurentMap(r, complex_at(a0), std::move(coeffs))};
    return LG_OK;
  });
}

lg_status lg_map_from_json(const char* text, lg_map** out) {
  LG_REQUIRE(text);
  LG_REQUIRE(out);
  return guarded([&] {
    *out = new lg_map{lgrowth::map_from_json(text)};
    return LG_OK;
  });
}

lg_status lg_map_to_json(const lg_map* m, char* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(m);
  return guarded([&] { return copy_string(lgrowth::map_to_json(m->value), buf, cap, needed); });
}

void lg_map_free(lg_map* m) { delete m; }

lg_status lg_map_radius(const lg_map* m, double* r) {
  LG_REQUIRE(m);
  LG_REQUIRE(r);
  *r = m->value.r();
  return LG_OK;
}

lg_status lg_map_coefficients(const lg_map* m, double* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(m);
  return copy_complex(m->value.u(), buf, cap, needed);
}

lg_status lg_map_evaluate(const lg_map* m, const double w[2], double z[2]) {
  LG_REQUIRE(m);
  LG_REQUIRE(w);
  LG_REQUIRE(z);
  return guarded([&] {
    const Complex v = m->value.value(complex_at(w));
    z[0] = v.real();
    z[1] = v.imag();
    return LG_OK;
  });
}

lg_status lg_map_area_over_pi(const lg_map* m, double* value) {
  LG_REQUIRE(m);
  LG_REQUIRE(value);
  return guarded([&] {
    *value = lgrowth::area_from_coefficients(m->value) / std::numbers::pi;
    return LG_OK;
  });
}

lg_status lg_map_univalence_margin(const lg_map* m, size_t samples, double* margin) {
  LG_REQUIRE(m);
  LG_REQUIRE(margin);
  return guarded([&] {
    *margin = lgrowth::univalence_margin(m->value, samples);
    return LG_OK;
  });
}

lg_status lg_map_moments(const lg_map* m, size_t count, double* t0, double* tk) {
  LG_REQUIRE(m);
  LG_REQUIRE(t0);
  if (count > 0) LG_REQUIRE(tk);
  return guarded([&] {
    const auto mv = lgrowth::harmonic_moments(m->value, count);
    *t0 = mv.t0;
    for (size_t k = 0; k < count; ++k) {
      tk[2 * k] = mv.tk[k].real();
      tk[2 * k + 1] = mv.tk[k].imag();
    }
    return LG_OK;
  });
}

lg_status lg_map_boundary(const lg_map* m, size_t samples, lg_contour** out) {
  LG_REQUIRE(m);
  LG_REQUIRE(out);
  return guarded([&] {
    *out = new lg_contour{lgrowth::boundary_contour(m->value, samples)};
    return LG_OK;
  });
}

lg_status lg_map_poles_json(const lg_map* m, char* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(m);
  return guarded([&] {
    const lgrowth::SchwarzEvaluator s(m->value);
    return copy_string(lgrowth::poles_to_json(lgrowth::extract_poles(s)), buf, cap, needed);
  });
}

// ---- contours ----------------------------------------------------------------

lg_status lg_contour_create(const double* xy, size_t n, lg_contour** out) {
  LG_REQUIRE(xy);
  LG_REQUIRE(out);
  return guarded([&] {
    std::vector<Complex> z(n);
    for (size_t j = 0; j < n; ++j) z[j] = complex_at(xy + 2 * j);
    *out = new lg_contour{lgrowth::Contour(std::move(z))};
    return LG_OK;
  });
}

lg_status lg_contour_read_csv(const char* path, lg_contour** out) {
  LG_REQUIRE(path);
  LG_REQUIRE(out);
  return guarded([&] {
    *out = new lg_contour{lgrowth::read_contour_csv(std::string(path))};
    return LG_OK;
  });
}

lg_status lg_contour_write_csv(const lg_contour* c, const char* path) {
  LG_REQUIRE(c);
  LG_REQUIRE(path);
  return guarded([&] {
    lgrowth::write_contour_csv(c->value, std::string(path));
    return LG_OK;
  });
}

void lg_contour_free(lg_contour* c) { delete c; }

size_t lg_contour_size(const lg_contour* c) { return c ? c->value.size() : 0; }

lg_status lg_contour_samples(const lg_contour* c, double* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(c);
  return copy_complex(c->value.samples(), buf, cap, needed);
}

lg_status lg_contour_area(const lg_contour* c, double* value) {
  LG_REQUIRE(c);
  LG_REQUIRE(value);
  return guarded([&] {
    *value = lgrowth::area(c->value);
    return LG_OK;
  });
}

lg_status lg_contour_hausdorff(const lg_contour* a, const lg_contour* b, double* value) {
  LG_REQUIRE(a);
  LG_REQUIRE(b);
  LG_REQUIRE(value);
  return guarded([&] {
    *value = lgrowth::hausdorff_distance(a->value, b->value);
    return LG_OK;
  });
}

// ---- evolution ---------------------------------------------------------------

lg_evolution_options lg_evolution_options_default(void) {
  const lgrowth::EvolutionOptions o;
  return {o.order, o.samples, o.max_step, o.cusp_threshold, o.max_halvings, o.filter_level};
}

lg_status lg_state_create(const lg_map* initial, const lg_evolution_options* options, lg_state** out) {
  LG_REQUIRE(initial);
  LG_REQUIRE(out);
  return guarded([&] {
    lgrowth::EvolutionOptions o;
    if (options) {
      o.order = options->order;
      o.samples = options->samples;
      o.max_step = options->max_step;
      o.cusp_threshold = options->cusp_threshold;
      o.max_halvings = options->max_halvings;
      o.filter_level = options->filter_level;
    }
    *out = new lg_state{lgrowth::EvolutionState(initial->value, o)};
    return LG_OK;
  });
}

void lg_state_free(lg_state* s) { delete s; }

lg_status lg_validate_pump(const lg_state* s, const double* location) {
  LG_REQUIRE(s);
  return guarded([&] {
    lgrowth::validate_pump(s->value.map(), pump_from(nullptr, location), s->value.options().samples);
    return LG_OK;
  });
}

lg_status lg_state_step(const lg_state* s, const char* label, const double* location, double dT, lg_state** out) {
  LG_REQUIRE(s);
  LG_REQUIRE(out);
  return guarded([&] {
    *out = new lg_state{lgrowth::step(s->value, pump_from(label, location), dT)};
    return LG_OK;
  });
}

lg_status lg_state_map(const lg_state* s, lg_map** out) {
  LG_REQUIRE(s);
  LG_REQUIRE(out);
  return guarded([&] {
    *out = new lg_map{s->value.map()};
    return LG_OK;
  });
}

lg_status lg_state_total_time(const lg_state* s, double* T) {
  LG_REQUIRE(s);
  LG_REQUIRE(T);
  *T = s->value.total_time();
  return LG_OK;
}

lg_status lg_state_times_json(const lg_state* s, char* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(s);
  return guarded([&] {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [label, T] : s->value.times()) j[label] = T;
    return copy_string(j.dump(), buf, cap, needed);
  });
}

lg_status lg_commutativity(const lg_state* s, const double* location_a, const double* location_b, double dTA,
                           double dTB, size_t contour_samples, double* hausdorff) {
  LG_REQUIRE(s);
  LG_REQUIRE(hausdorff);
  return guarded([&] {
    const auto rep = lgrowth::commutativity_test(s->value, pump_from("a", location_a), pump_from("b", location_b),
                                                 dTA, dTB, contour_samples);
    *hausdorff = rep.hausdorff;
    return LG_OK;
  });
}

// ---- curve -----------------------------------------------------------------

lg_status lg_curve_solve(const double p[2], const double q[2], const double mu[2], const double nu[2],
                         lg_curve** out) {
  LG_REQUIRE(p);
  LG_REQUIRE(q);
  LG_REQUIRE(mu);
  LG_REQUIRE(nu);
  LG_REQUIRE(out);
  return guarded([&] {
    const auto c = lgrowth::build_curve(complex_at(p), complex_at(q), complex_at(mu), complex_at(nu));
    auto sol = lgrowth::solve_double_point(c);
    *out = new lg_curve{lgrowth::with_double_point(c, sol), std::move(sol.components)};
    return LG_OK;
  });
}

lg_status lg_curve_from_hodograph(double p, double q, double mu, double T, lg_curve** out) {
  LG_REQUIRE(out);
  return guarded([&] {
    const lgrowth::HodographParams hp{p, q, mu, T};
    const auto sol = lgrowth::solve_hodograph(hp);
    auto curve = lgrowth::curve_from_hodograph(hp, sol.branch);
    auto comps = lgrowth::classify_real_section(curve);
    *out = new lg_curve{std::move(curve), std::move(comps)};
    return LG_OK;
  });
}

void lg_curve_free(lg_curve* c) { delete c; }

lg_status lg_curve_to_json(const lg_curve* c, char* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(c);
  return guarded([&] { return copy_string(lgrowth::curve_to_json(c->value), buf, cap, needed); });
}

lg_status lg_curve_schwarz(const lg_curve* c, const double z[2], int sheet, double out[2]) {
  LG_REQUIRE(c);
  LG_REQUIRE(z);
  LG_REQUIRE(out);
  return guarded([&] {
    if (sheet != 1 && sheet != 2) lgrowth::fail(lgrowth::ErrorCode::invalid_input, "sheet must be 1 or 2");
    const Complex v = lgrowth::schwarz_two_sheeted(c->value, complex_at(z), sheet);
    out[0] = v.real();
    out[1] = v.imag();
    return LG_OK;
  });
}

lg_status lg_curve_component_count(const lg_curve* c, size_t* count) {
  LG_REQUIRE(c);
  LG_REQUIRE(count);
  *count = c->components.size();
  return LG_OK;
}

lg_status lg_curve_component(const lg_curve* c, size_t index, int* physical, lg_contour** out) {
  LG_REQUIRE(c);
  LG_REQUIRE(out);
  if (index >= c->components.size()) return set_error(LG_ERR_INVALID_INPUT, "component index out of range");
  return guarded([&] {
    if (physical) *physical = c->components[index].physical ? 1 : 0;
    *out = new lg_contour{c->components[index].contour};
    return LG_OK;
  });
}

// ---- hodograph family --------------------------------------------------------

lg_status lg_hodograph_solve(double p, double q, double mu, double T, double E[2], double* residual) {
  LG_REQUIRE(E);
  return guarded([&] {
    const auto sol = lgrowth::solve_hodograph({p, q, mu, T});
    E[0] = sol.branch.E1;
    E[1] = sol.branch.E2;
    if (residual) *residual = sol.residual;
    return LG_OK;
  });
}

lg_status lg_family_evaluate(double p, double q, const double* mus, size_t n_mu, const double* Ts, size_t n_T,
                             unsigned threads, int keep_contours, lg_family** out) {
  LG_REQUIRE(out);
  if (n_mu > 0) LG_REQUIRE(mus);
  if (n_T > 0) LG_REQUIRE(Ts);
  return guarded([&] {
    lgrowth::FamilyOptions o;
    o.threads = threads;
    o.keep_contours = keep_contours != 0;
    *out = new lg_family{lgrowth::evaluate_family(p, q, std::vector<double>(mus, mus + n_mu),
                                                  std::vector<double>(Ts, Ts + n_T), o)};
    return LG_OK;
  });
}

void lg_family_free(lg_family* f) { delete f; }

size_t lg_family_size(const lg_family* f) { return f ? f->rows.size() : 0; }

lg_status lg_family_row_json(const lg_family* f, size_t index, char* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(f);
  if (index >= f->rows.size()) return set_error(LG_ERR_INVALID_INPUT, "row index out of range");
  return guarded([&] { return copy_string(lgrowth::family_row_to_json(f->rows[index]), buf, cap, needed); });
}

lg_status lg_family_row_status(const lg_family* f, size_t index, char* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(f);
  if (index >= f->rows.size()) return set_error(LG_ERR_INVALID_INPUT, "row index out of range");
  return copy_string(f->rows[index].status, buf, cap, needed);
}

lg_status lg_family_row_contour(const lg_family* f, size_t index, lg_contour** out) {
  LG_REQUIRE(f);
  LG_REQUIRE(out);
  if (index >= f->rows.size()) return set_error(LG_ERR_INVALID_INPUT, "row index out of range");
  if (!f->rows[index].contour) return set_error(LG_ERR_INVALID_INPUT, "row has no stored contour");
  return guarded([&] {
    *out = new lg_contour{*f->rows[index].contour};
    return LG_OK;
  });
}

// ---- verification ------------------------------------------------------------

lg_status lg_verify_selectors(char* buf, size_t cap, size_t* needed) {
  std::string s;
  for (const auto& name : lgrowth::verify_selectors()) s += (s.empty() ? "" : "\n") + name;
  return copy_string(s, buf, cap, needed);
}

lg_status lg_verify_run(const char* selector, unsigned long long seed, lg_report** out) {
  LG_REQUIRE(selector);
  LG_REQUIRE(out);
  return guarded([&] {
    lgrowth::VerifyOptions o;
    o.seed = seed;
    *out = new lg_report{lgrowth::run_verification(selector, o)};
    return LG_OK;
  });
}

void lg_report_free(lg_report* r) { delete r; }

int lg_report_passed(const lg_report* r) { return r && r->value.passed() ? 1 : 0; }

lg_status lg_report_to_json(const lg_report* r, char* buf, size_t cap, size_t* needed) {
  LG_REQUIRE(r);
  return guarded([&] { return copy_string(r->value.to_json(), buf, cap, needed); });
}

lg_status lg_format_real(double x, char* buf, size_t cap, size_t* needed) {
  return copy_string(lgrowth::format_real(x), buf, cap, needed);
}

}  // extern "C"
