#include "lgrowth/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "json.hpp"
#include "lgrowth/dynamics.hpp"
#include "lgrowth/errors.hpp"
#include "lgrowth/family.hpp"
#include "lgrowth/hodograph.hpp"
#include "lgrowth/schwarz.hpp"

namespace lgrowth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kP = 2.0;
constexpr double kQ = -3.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

VerifyCheck below(std::string label, double measured, double tolerance) {
  return {std::move(label), measured, tolerance, "<", measured < tolerance};
}

VerifyCheck at_least(std::string label, double measured, double bound) {
  return {std::move(label), measured, bound, ">=", measured >= bound};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }
double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// The 10 x 5 grid used by the family criteria.
std::vector<std::pair<double, double>> family_grid() {
  std::vector<std::pair<double, double>> g;
  for (int i = 1; i <= 10; ++i)
    for (int j = 0; j < 5; ++j) g.emplace_back(0.05 * i, 1.0 + 0.25 * j);
  return g;
}

// Instances for the finite-difference criteria.
std::vector<std::pair<double, double>> flow_instances() {
  std::vector<std::pair<double, double>> g;
  for (int i = 0; i < 10; ++i) g.emplace_back(0.05 * (i + 1), 1.0 + 0.1 * i);
  return g;
}

struct Solved {
  HodographParams hp;
  BranchPoints bp;
  CurveN1 curve;
};

Solved solve_at(double mu, double T, const std::optional<BranchPoints>& seed = std::nullopt) {
  const HodographParams hp{kP, kQ, mu, T};
  const auto sol = solve_hodograph(hp, seed);
  return {hp, sol.branch, curve_from_hodograph(hp, sol.branch)};
}

// Points of the oil domain on a circle around the droplet, off the real axis.
std::vector<Complex> oil_points(double T, int count) {
  std::vector<Complex> z;
  for (int j = 0; j < count; ++j)
    z.push_back(kQ + 2.2 * std::sqrt(T) * std::polar(1.0, 2.0 * kPi * (j + 0.5) / count));
  return z;
}

// ---------------------------------------------------------------------------

void circle_law(CriterionResult& r, const VerifyOptions&) {
  const auto t0 = Clock::now();
  EvolutionOptions o;
  o.order = 32;
  o.samples = 512;
  o.max_step = 1e-2;
  const auto s = step(EvolutionState(LaurentMap(1.0, 0.0), o), PumpSpec::at_infinity(), 3.0);
  r.checks.push_back(below("|r(3) - 2|", std::abs(s.map().r() - 2.0), 1e-8));
  r.checks.push_back(below("runtime [s]", seconds_since(t0), 10.0));
}

void ellipse(CriterionResult& r, const VerifyOptions&) {
  EvolutionOptions o;
  o.order = 32;
  o.samples = 512;
  o.max_step = 1e-2;
  EvolutionState s(LaurentMap(1.0, 0.0, {0.3}), o);
  const double area0 = area_from_coefficients(s.map()) / kPi;
  double ratio_drift = 0.0, area_drift = 0.0;
  for (int k = 1; k <= 10; ++k) {
    s = step(s, PumpSpec::at_infinity(), 0.1);
    const double T = 0.1 * k;
    ratio_drift = std::max(ratio_drift, std::abs(s.map().u()[0].real() / s.map().r() - 0.3));
    ratio_drift = std::max(ratio_drift, std::abs(s.map().u()[0].imag()));
    area_drift = std::max(area_drift, std::abs(area_from_coefficients(s.map()) / kPi - area0 - T));
  }
  r.checks.push_back(below("max |u/r - 0.3|", ratio_drift, 1e-7));
  r.checks.push_back(below("max |area/pi - T - area0/pi|", area_drift, 1e-8));
}

LaurentMap random_map(std::uint64_t seed, std::size_t K) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (;;) {
    std::vector<Complex> u(K);
    for (std::size_t k = 1; k <= K; ++k) u[k - 1] = 0.1 * Complex(U(rng), U(rng)) / static_cast<double>(k * k);
    LaurentMap m(1.0, 0.0, u);
    if (univalence_margin(m, 4096) > 0.2) return m;
  }
}

void moments(CriterionResult& r, const VerifyOptions& opt) {
  const auto t0 = Clock::now();
  EvolutionOptions o;
  o.order = 32;
  o.samples = 512;
  o.max_step = 1e-2;
  EvolutionState s(random_map(opt.seed, 8), o);
  const auto ref = harmonic_moments(s.map(), 5);
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    s = step(s, PumpSpec::at_infinity(), 0.25);
    const auto now = harmonic_moments(s.map(), 5);
    for (std::size_t j = 0; j < 5; ++j) worst = std::max(worst, std::abs(now.tk[j] - ref.tk[j]));
  }
  r.checks.push_back(below("max_k |t_k(T) - t_k(0)|, k=1..5, T<=1", worst, 1e-6));
  r.checks.push_back(below("runtime [s]", seconds_since(t0), 30.0));
}

double commutativity_defect(double max_step) {
  EvolutionOptions o;
  o.order = 128;
  o.samples = 1024;
  o.max_step = max_step;
  const EvolutionState s(LaurentMap(1.0, 0.0), o);
  return commutativity_test(s, PumpSpec::at("a", 2.5), PumpSpec::at_infinity(), 0.2, 0.2, 1024).hausdorff;
}

void commutativity(CriterionResult& r, const VerifyOptions&) {
  r.checks.push_back(below("Hausdorff distance, step 1e-3", commutativity_defect(1e-3), 1e-4));
  // The halving ratio is taken where the integrator error dominates roundoff.
  const double coarse = commutativity_defect(0.05);
  const double fine = commutativity_defect(0.025);
  r.checks.push_back(at_least("defect(0.05) / defect(0.025)", coarse / fine, 8.0));
}

void hodograph_oracle(CriterionResult& r, const VerifyOptions&) {
  const auto t0 = Clock::now();
  double worst_res = 0.0, worst_dE = 0.0;
  for (auto [mu, T] : family_grid()) {
    const auto sol = solve_hodograph({kP, kQ, mu, T});
    const auto oracle = solve_double_point(build_curve(kP, kQ, mu, mu - T));
    worst_res = std::max(worst_res, sol.residual);
    worst_dE = std::max({worst_dE, std::abs(sol.branch.E1 - oracle.E1), std::abs(sol.branch.E2 - oracle.E2)});
  }
  r.checks.push_back(below("max hodograph residual (50 points)", worst_res, 1e-12));
  r.checks.push_back(below("max |E_k - E_k(double root)|", worst_dE, 1e-8));
  r.checks.push_back(below("runtime [s]", seconds_since(t0), 5.0));
}

void boundary(CriterionResult& r, const VerifyOptions&) {
  double worst_s = 0.0, worst_area = 0.0, worst_count = 0.0;
  for (auto [mu, T] : family_grid()) {
    const Solved s = solve_at(mu, T);
    const auto comps = classify_real_section(s.curve);
    const auto physical = std::count_if(comps.begin(), comps.end(), [](const TracedComponent& t) { return t.physical; });
    worst_count = std::max(worst_count, std::abs(static_cast<double>(physical) - 1.0));
    for (const auto& c : comps) {
      if (!c.physical) continue;
      for (Complex z : c.contour.samples())
        worst_s = std::max(worst_s, std::abs(schwarz_two_sheeted(s.curve, z, 1) - std::conj(z)));
      worst_area = std::max(worst_area, std::abs(area(c.contour) / kPi - T));
    }
  }
  r.checks.push_back(below("max sup|S(z) - conj z| on the boundary", worst_s, 1e-8));
  r.checks.push_back(below("max |area/pi - T|", worst_area, 1e-6));
  r.checks.push_back(below("max |#physical components - 1|", worst_count, 0.5));
}

// Central differences of E_k along the T-flow (dmu = 0) or p-flow (dmu = dT).
std::array<double, 2> fd_rates(const Solved& s, Pump pump, double delta) {
  const double dmu = pump == Pump::p ? delta : 0.0;
  const auto up = solve_hodograph({kP, kQ, s.hp.mu + dmu, s.hp.T + delta}, s.bp).branch;
  const auto dn = solve_hodograph({kP, kQ, s.hp.mu - dmu, s.hp.T - delta}, s.bp).branch;
  return {(up.E1 - dn.E1) / (2 * delta), (up.E2 - dn.E2) / (2 * delta)};
}

void string_equation(CriterionResult& r, const VerifyOptions&) {
  double worst_inf = 0.0, worst_p = 0.0;
  for (auto [mu, T] : flow_instances()) {
    const Solved s = solve_at(mu, T);
    for (Pump pump : {Pump::infinity, Pump::p}) {
      const auto fd = fd_rates(s, pump, 1e-4);
      const auto rhs = string_rhs(s.hp, s.bp, pump);
      double& worst = pump == Pump::infinity ? worst_inf : worst_p;
      for (int k = 0; k < 2; ++k) worst = std::max(worst, rel_err(fd[k], rhs[k]));
    }
  }
  r.checks.push_back(below("max rel err dE_k/dT vs string rhs (pump inf)", worst_inf, 1e-5));
  r.checks.push_back(below("max rel err dE_k/dT(p) vs string rhs (pump p)", worst_p, 1e-5));
}

void whitham(CriterionResult& r, const VerifyOptions&) {
  double worst_v = 0.0, worst_inf = 0.0, worst_p = 0.0, worst_w1 = 0.0;
  const std::vector<std::pair<double, double>> instances = {{0.1, 1.0}, {0.3, 1.5}};
  for (auto [mu, T] : flow_instances()) {
    const Solved s = solve_at(mu, T);
    const auto fd_inf = fd_rates(s, Pump::infinity, 1e-4);
    const auto fd_p = fd_rates(s, Pump::p, 1e-4);
    const auto V = whitham_velocity(s.hp, s.bp, Pump::p, Pump::infinity);
    for (int k = 0; k < 2; ++k) worst_v = std::max(worst_v, rel_err(fd_p[k] / fd_inf[k], V[k]));
  }
  for (auto [mu, T] : instances) {
    const Solved s = solve_at(mu, T);
    const double d = 1e-4;
    const Solved tp = solve_at(mu, T + d, s.bp), tm = solve_at(mu, T - d, s.bp);
    const Solved pp = solve_at(mu + d, T + d, s.bp), pm = solve_at(mu - d, T - d, s.bp);
    const auto w_inf = pump_differential(s.hp, s.bp, Pump::infinity);
    const auto w_p = pump_differential(s.hp, s.bp, Pump::p);

    // Mixed flow of the pump differentials over the family, step 1e-3.
    const double D = 1e-3;
    const Solved a_p = solve_at(mu, T + D, s.bp), a_m = solve_at(mu, T - D, s.bp);
    const Solved b_p = solve_at(mu + D, T + D, s.bp), b_m = solve_at(mu - D, T - D, s.bp);

    for (Complex z : oil_points(T, 20)) {
      const Complex dS_inf = (schwarz_two_sheeted(tp.curve, z, 1) - schwarz_two_sheeted(tm.curve, z, 1)) / (2 * d);
      const Complex dS_p = (schwarz_two_sheeted(pp.curve, z, 1) - schwarz_two_sheeted(pm.curve, z, 1)) / (2 * d);
      worst_inf = std::max(worst_inf, rel_err(dS_inf, -w_inf.density(z, 1)));
      worst_p = std::max(worst_p, rel_err(dS_p, -w_p.density(z, 1)));

      const Complex d_inf_of_p = (pump_differential(a_p.hp, a_p.bp, Pump::p).density(z, 1) -
                                  pump_differential(a_m.hp, a_m.bp, Pump::p).density(z, 1)) /
                                 (2 * D);
      const Complex d_p_of_inf = (pump_differential(b_p.hp, b_p.bp, Pump::infinity).density(z, 1) -
                                  pump_differential(b_m.hp, b_m.bp, Pump::infinity).density(z, 1)) /
                                 (2 * D);
      worst_w1 = std::max(worst_w1, rel_err(d_inf_of_p, d_p_of_inf));
    }
  }
  r.checks.push_back(below("max rel err V_k(p,inf) vs finite-difference ratio", worst_v, 1e-4));
  r.checks.push_back(below("max rel err dS/dT vs -dW(inf)/dz (20 points)", worst_inf, 1e-4));
  r.checks.push_back(below("max rel err dS/dT(p) vs -dW(p)/dz (20 points)", worst_p, 1e-4));
  r.checks.push_back(below("max rel err d_inf dW(p) vs d_p dW(inf)", worst_w1, 1e-3));
}

SchwarzSource family_source(double mu, double T) {
  const Solved s = solve_at(mu, T);
  const auto comps = classify_real_section(s.curve);
  const auto it = std::find_if(comps.begin(), comps.end(), [](const TracedComponent& t) { return t.physical; });
  if (it == comps.end()) fail(ErrorCode::geometry, "no physical boundary component");
  const CurveN1 c = s.curve;
  // The pole search treats a non-finite value as landing on the pole.
  SchwarzFunction f{[c](Complex z) {
                      if (z == c.p || z == c.q) return Complex(std::numeric_limits<double>::infinity(), 0.0);
                      return schwarz_two_sheeted(c, z, 1);
                    },
                    nullptr};
  return {f, it->contour};
}

void residues(CriterionResult& r, const VerifyOptions&) {
  double worst_value = 0.0, worst_T = 0.0, worst_mu = 0.0, worst_loc = 0.0;
  const double delta = 1e-4;
  for (double T : {1.0, 1.25, 1.5}) {
    const double mu = 0.1;
    const auto rep = residue_flow_check([&](double t) { return family_source(mu, t); }, T, delta, {kP}, std::nullopt);
    worst_value = std::max(worst_value, std::abs(rep.poles.at(0).residue + mu));
    worst_T = std::max(worst_T, rep.max_residue_deviation);
    worst_loc = std::max(worst_loc, rep.max_location_drift);
  }
  // The p-pump time moves mu and T together.
  for (double mu : {0.1, 0.2, 0.3}) {
    const double T = 1.0;
    const auto rep = residue_flow_check([&](double t) { return family_source(mu + t, T + t); }, 0.0, delta, {kP}, 0);
    worst_value = std::max(worst_value, std::abs(rep.poles.at(0).residue + mu));
    worst_mu = std::max(worst_mu, rep.max_residue_deviation);
    worst_loc = std::max(worst_loc, rep.max_location_drift);
  }
  r.checks.push_back(below("max |res_p + mu|", worst_value, 1e-8));
  r.checks.push_back(below("max |d res_p / dT|", worst_T, 1e-6));
  r.checks.push_back(below("max |d res_p / dT(p) + 1|", worst_mu, 1e-5));
  r.checks.push_back(below("max |d p / dt| (pole location drift)", worst_loc, 1e-6));
}

void differentials(CriterionResult& r, const VerifyOptions&) {
  const Solved s = solve_at(0.1, 1.0);
  std::vector<Complex> samples;
  for (int j = 0; j < 200; ++j) {
    const double rho = 1.6 + 3.0 * (j % 10) / 10.0;
    samples.push_back(kQ + rho * std::polar(1.0, 2.0 * kPi * (j + 0.5) / 200.0 * 7.0));
  }
  const auto rep = sdz_decomposition_check(s.curve, samples);
  r.checks.push_back(below("sup |S dz - decomposition| (200 samples, both sheets)", rep.sup_residual, 1e-9));
  double res_err = 0.0;
  for (int k = 0; k < 4; ++k) res_err = std::max(res_err, std::abs(rep.residues[k] - rep.expected_residues[k]));
  r.checks.push_back(below("max |residue of S dz - decomposition residue|", res_err, 1e-10));
  r.checks.push_back(below("|sum of residues of S dz|", std::abs(rep.residue_sum), 1e-10));

  double dip = 0.0;
  for (Pump pump : {Pump::infinity, Pump::p}) {
    const auto w = pump_differential(s.hp, s.bp, pump);
    dip = std::max(dip, std::abs(w.residue(w.first()) - 1.0));
    dip = std::max(dip, std::abs(w.residue(w.second()) + 1.0));
  }
  r.checks.push_back(below("max |dipole residue -+ 1|", dip, 1e-10));

  const auto plus = GenusZeroDifferential::plus(s.bp.E1, s.bp.E2);
  const auto minus = GenusZeroDifferential::minus(s.bp.E1, s.bp.E2);
  double sum_err = 0.0;
  for (Complex z : samples)
    for (int sheet = 1; sheet <= 2; ++sheet)
      sum_err = std::max(sum_err, std::abs(plus.density(z, sheet) + minus.density(z, sheet) - 1.0));
  r.checks.push_back(below("max |dW+ + dW- - dz| (density)", sum_err, 8 * std::numeric_limits<double>::epsilon()));
}

struct Criterion {
  int id;
  const char* key;
  const char* title;
  void (*run)(CriterionResult&, const VerifyOptions&);
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "circle-law", "Circle law r(T) = sqrt(1 + T)", circle_law},
      {2, "ellipse", "Ellipse reduction: u/r and area law", ellipse},
      {3, "moments", "Harmonic moment conservation (sink at infinity)", moments},
      {4, "commutativity", "Commutativity of pump flows", commutativity},
      {5, "hodograph-oracle", "Hodograph solution vs double-root oracle", hodograph_oracle},
      {6, "boundary", "Boundary consistency of traced contours", boundary},
      {7, "string-equation", "String equation rates vs finite differences", string_equation},
      {8, "whitham", "Whitham velocities and flow of S", whitham},
      {9, "residues", "Residue dynamics at the pump pole", residues},
      {10, "differentials", "Genus-zero differential identities", differentials},
  };
  return list;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["selector"] = selector;
  j["passed"] = passed();
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : criteria) {
    nlohmann::json cj;
    cj["id"] = c.id;
    cj["key"] = c.key;
    cj["title"] = c.title;
    cj["passed"] = c.passed;
    cj["seconds"] = c.seconds;
    if (!c.error.empty()) cj["error"] = c.error;
    cj["checks"] = nlohmann::json::array();
    for (const auto& k : c.checks) {
      nlohmann::json kj;
      kj["label"] = k.label;
      kj["measured"] = std::isfinite(k.measured) ? nlohmann::json(k.measured) : nlohmann::json(nullptr);
      kj["tolerance"] = k.tolerance;
      kj["relation"] = k.relation;
      kj["passed"] = k.passed;
      cj["checks"].push_back(kj);
    }
    j["criteria"].push_back(cj);
  }
  return j.dump(2);
}

const std::vector<std::string>& verify_selectors() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : criteria()) v.emplace_back(c.key);
    v.emplace_back("area-law");
    v.emplace_back("all");
    return v;
  }();
  return names;
}

VerifyReport run_verification(const std::string& selector, const VerifyOptions& options) {
  std::vector<const Criterion*> chosen;
  for (const auto& c : criteria()) {
    const bool area_group = selector == "area-law" && (c.id == 1 || c.id == 2);
    if (selector == "all" || selector == c.key || area_group) chosen.push_back(&c);
  }
  if (chosen.empty()) {
    std::string list;
    for (const auto& s : verify_selectors()) list += (list.empty() ? "" : ", ") + s;
    fail(ErrorCode::invalid_input, "unknown verify selector '" + selector + "'; valid selectors: " + list);
  }
  VerifyReport report;
  report.selector = selector;
  for (const Criterion* c : chosen) {
    CriterionResult r;
    r.id = c->id;
    r.key = c->key;
    r.title = c->title;
    const auto t0 = Clock::now();
    try {
      c->run(r, options);
      r.passed = !r.checks.empty() &&
                 std::all_of(r.checks.begin(), r.checks.end(), [](const VerifyCheck& k) { return k.passed; });
    } catch (const std::exception& e) {
      r.error = e.what();
      r.passed = false;
    }
    r.seconds = seconds_since(t0);
    report.criteria.push_back(std::move(r));
  }
  return report;
}

}  // namespace lgrowth
