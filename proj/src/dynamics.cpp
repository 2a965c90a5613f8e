#include "lgrowth/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lgrowth/errors.hpp"
#include "lgrowth/spectral.hpp"

namespace lgrowth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::size_t velocity_samples(const LaurentMap& m, std::size_t requested) {
  return std::max(next_power_of_two(requested), next_power_of_two(4 * (m.order() + 2)));
}

LaurentMap displaced(const LaurentMap& m, const MapRate& rate, double h) {
  std::vector<Complex> u(m.u());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] += h * rate.du[k];
  return LaurentMap(m.r() + h * rate.dr, m.a0() + h * rate.da0, std::move(u));
}

LaurentMap padded(const LaurentMap& m, std::size_t order) {
  if (!m.poles().empty()) fail(ErrorCode::invalid_input, "evolution needs a map without pole terms");
  if (m.order() > order) fail(ErrorCode::invalid_input, "initial map order exceeds the truncation order K");
  std::vector<Complex> u(m.u());
  u.resize(order, 0.0);
  return LaurentMap(m.r(), m.a0(), std::move(u));
}

// Poisson kernel of the exterior disk, normalised to mean 1 over the circle.
double poisson_weight(Complex w_circle, Complex pump_w) {
  return (std::norm(pump_w) - 1.0) / std::norm(w_circle - pump_w);
}

Complex locate_pump(const LaurentMap& m, Complex a, Complex seed) {
  auto w = newton_invert(m, a, seed);
  if (!w) {
    MapInverter inv(m);
    w = inv.exterior(a);
  }
  if (!(std::abs(*w) > 1.0 + 1e-9)) fail(ErrorCode::domain, "pump has been reached by the moving boundary");
  return *w;
}

}  // namespace

PumpSpec PumpSpec::at_infinity(std::string label) { return PumpSpec{std::move(label), std::nullopt}; }

PumpSpec PumpSpec::at(std::string label, PlanePoint z) {
  require_finite(z, "pump location");
  return PumpSpec{std::move(label), z};
}

EvolutionState::EvolutionState(const LaurentMap& initial, EvolutionOptions options)
    : map_(padded(initial, options.order)), options_(options) {
  if (!(options_.max_step > 0.0) || !(options_.cusp_threshold > 0.0) || options_.samples < 8 ||
      !(options_.filter_level >= 0.0))
    fail(ErrorCode::invalid_input, "evolution options must be positive");
}

double EvolutionState::time(const std::string& label) const {
  for (const auto& [name, t] : times_)
    if (name == label) return t;
  return 0.0;
}

double EvolutionState::total_time() const {
  double s = 0.0;
  for (const auto& entry : times_) s += entry.second;
  return s;
}

EvolutionState EvolutionState::advanced(LaurentMap map, const std::string& label, double dT,
                                        StepDiagnostics diag) const {
  EvolutionState next = *this;
  next.map_ = std::move(map);
  auto it = std::find_if(next.times_.begin(), next.times_.end(), [&](const auto& e) { return e.first == label; });
  if (it == next.times_.end()) {
    next.times_.emplace_back(label, dT);
  } else {
    it->second += dT;
  }
  next.log_.push_back(diag);
  return next;
}

MapRate pump_rate(const LaurentMap& m, std::optional<Complex> pump_w, std::size_t samples) {
  if (!m.poles().empty()) fail(ErrorCode::invalid_input, "velocity needs a map without pole terms");
  const std::size_t n = velocity_samples(m, samples);
  const std::size_t K = m.order();
  const auto fp = boundary_derivatives(m, n);

  std::vector<Complex> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double speed2 = std::norm(fp[j]);  // |w f'| = |f'| on the circle
    if (!(speed2 > 0.0) || !std::isfinite(speed2))
      throw CuspError(std::sqrt(speed2), std::numeric_limits<double>::quiet_NaN(), "velocity evaluation");
    double weight = 1.0;
    if (pump_w) weight = poisson_weight(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n)), *pump_w);
    g[j] = 0.5 * weight / speed2;
  }
  const auto gh = fourier_coefficients(g);

  // Herglotz reconstruction: V = g_0 + 2 sum_{k>=1} g_{-k} w^{-k}.
  std::vector<Complex> v(K + 2);
  v[0] = gh[0].real();
  for (std::size_t k = 1; k <= K + 1; ++k) v[k] = 2.0 * gh[n - k];

  // Product with w f' = r w - sum k u_k w^{-k}, truncated at w^{-K}.
  MapRate rate;
  rate.dr = m.r() * v[0].real();
  rate.da0 = m.r() * v[1];
  rate.du.assign(K, 0.0);
  for (std::size_t mm = 1; mm <= K; ++mm) {
    Complex acc = m.r() * v[mm + 1];
    for (std::size_t k = 1; k <= mm; ++k) acc -= static_cast<double>(k) * m.u()[k - 1] * v[mm - k];
    rate.du[mm - 1] = acc;
  }
  return rate;
}

MapRate pg_velocity(const LaurentMap& m, std::size_t samples) { return pump_rate(m, std::nullopt, samples); }

double green_function(const LaurentMap& m, PlanePoint a, PlanePoint z) {
  require_finite(a, "source point");
  require_finite(z, "evaluation point");
  const MapInverter inv(m);
  const Complex wa = inv.exterior(a);
  const Complex wz = inv.exterior(z);
  return std::log(std::abs((wz - wa) / (wz * std::conj(wa) - 1.0)));
}

std::vector<double> pump_velocity_field(const LaurentMap& m, const PumpSpec& pump, std::size_t samples) {
  std::optional<Complex> wa;
  if (!pump.is_infinity()) {
    validate_pump(m, pump, samples);
    wa = MapInverter(m).exterior(*pump.location);
  }
  const auto fp = boundary_derivatives(m, samples);
  std::vector<double> vn(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double speed = std::abs(fp[j]);
    if (!(speed > 0.0)) throw CuspError(speed, std::numeric_limits<double>::quiet_NaN(), "normal velocity");
    double weight = 1.0;
    if (wa) weight = poisson_weight(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(samples)), *wa);
    vn[j] = 0.5 * weight / speed;
  }
  return vn;
}

void validate_pump(const LaurentMap& m, const PumpSpec& pump, std::size_t samples) {
  if (pump.is_infinity()) return;
  const Complex a = *pump.location;
  const auto z = boundary_values(m, samples);
  if (winding_number(z, a) != 0)
    fail(ErrorCode::domain, "pump '" + pump.label + "' lies inside the droplet");
  double dmin = std::numeric_limits<double>::infinity();
  double spacing = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double d = std::abs(z[j] - a);
    if (d < dmin) {
      dmin = d;
      spacing = std::abs(z[(j + 1) % z.size()] - z[j]);
    }
  }
  if (!(dmin > 3.0 * spacing))
    fail(ErrorCode::domain, "pump '" + pump.label + "' is within three sample spacings of the boundary");
}

EvolutionState step(const EvolutionState& s, const PumpSpec& pump, double dT) {
  require_finite(dT, "dT");
  if (dT < 0.0) fail(ErrorCode::invalid_input, "pump times only increase (dT >= 0)");
  if (dT == 0.0) return s;
  const EvolutionOptions& opt = s.options();
  validate_pump(s.map(), pump, opt.samples);

  const std::size_t nsub = static_cast<std::size_t>(std::ceil(dT / opt.max_step - 1e-12));
  const double h0 = dT / static_cast<double>(nsub);
  const std::size_t check_n = std::max(velocity_samples(s.map(), opt.samples),
                                       next_power_of_two(64 * std::max<std::size_t>(opt.order, 4)));

  Complex pump_w = 0.0;
  if (!pump.is_infinity()) pump_w = MapInverter(s.map()).exterior(*pump.location);

  auto rate_at = [&](const LaurentMap& m) {
    if (pump.is_infinity()) return pg_velocity(m, opt.samples);
    pump_w = locate_pump(m, *pump.location, pump_w);
    return pump_rate(m, pump_w, opt.samples);
  };
  auto rk4 = [&](const LaurentMap& m, double h) {
    const MapRate k1 = rate_at(m);
    const MapRate k2 = rate_at(displaced(m, k1, 0.5 * h));
    const MapRate k3 = rate_at(displaced(m, k2, 0.5 * h));
    const MapRate k4 = rate_at(displaced(m, k3, h));
    MapRate sum;
    sum.dr = (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr) / 6.0;
    sum.da0 = (k1.da0 + 2.0 * k2.da0 + 2.0 * k3.da0 + k4.da0) / 6.0;
    sum.du.resize(k1.du.size());
    for (std::size_t k = 0; k < sum.du.size(); ++k)
      sum.du[k] = (k1.du[k] + 2.0 * k2.du[k] + 2.0 * k3.du[k] + k4.du[k]) / 6.0;
    LaurentMap next = displaced(m, sum, h);
    if (opt.filter_level > 0.0) {
      std::vector<Complex> u(next.u());
      for (Complex& c : u)
        if (std::abs(c) < opt.filter_level * next.r()) c = 0.0;
      next = LaurentMap(next.r(), next.a0(), std::move(u));
    }
    return next;
  };

  LaurentMap m = s.map();
  const double t_start = s.total_time();
  double elapsed = 0.0;
  double margin = univalence_margin(m, check_n);
  std::size_t substeps = 0;
  for (std::size_t i = 0; i < nsub; ++i) {
    // Try the nominal step, then 2, 4, ... equal pieces if univalence fails.
    bool done = false;
    for (int halving = 0; halving <= opt.max_halvings && !done; ++halving) {
      const std::size_t pieces = std::size_t{1} << halving;
      const double h = h0 / static_cast<double>(pieces);
      try {
        LaurentMap trial = m;
        double trial_margin = margin;
        for (std::size_t p = 0; p < pieces; ++p) {
          trial = rk4(trial, h);
          trial_margin = univalence_margin(trial, check_n);
          if (!(trial_margin > opt.cusp_threshold)) throw CuspError(trial_margin, t_start + elapsed, "");
        }
        m = std::move(trial);
        margin = trial_margin;
        substeps += pieces;
        done = true;
      } catch (const CuspError& e) {
        if (halving == opt.max_halvings)
          throw CuspError(e.margin(), t_start + elapsed, "pump '" + pump.label + "', step halving exhausted");
      }
    }
    elapsed += h0;
  }
  const double tail = m.order() ? std::abs(m.u().back()) / m.r() : 0.0;
  StepDiagnostics diag{t_start + dT, margin, tail, tail < 1e-10, substeps};
  return s.advanced(std::move(m), pump.label, dT, diag);
}

namespace {
EvolutionState run_ordered(const EvolutionState& s, const PumpSpec& first, double dT1, const PumpSpec& second,
                           double dT2, const char* tag) {
  try {
    return step(step(s, first, dT1), second, dT2);
  } catch (const CuspError& e) {
    throw CuspError(e.margin(), e.at_time(), std::string("ordering ") + tag);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("ordering ") + tag + ": " + e.what());
  }
}
}  // namespace

CommutativityReport commutativity_test(const EvolutionState& s, const PumpSpec& a, const PumpSpec& b,
                                       double dTA, double dTB, std::size_t contour_samples) {
  const EvolutionState ab = run_ordered(s, a, dTA, b, dTB, "A-then-B");
  const EvolutionState ba = run_ordered(s, b, dTB, a, dTA, "B-then-A");
  const Contour ca = boundary_contour(ab.map(), contour_samples);
  const Contour cb = boundary_contour(ba.map(), contour_samples);
  double moment_diff = std::numeric_limits<double>::quiet_NaN();
  try {
    const auto ma = harmonic_moments(ab.map(), 5, contour_samples);
    const auto mb = harmonic_moments(ba.map(), 5, contour_samples);
    double acc = std::norm(ma.t0 - mb.t0);
    for (std::size_t k = 0; k < ma.tk.size(); ++k) acc += std::norm(ma.tk[k] - mb.tk[k]);
    moment_diff = std::sqrt(acc);
  } catch (const Error&) {
    // Moments need the origin inside both droplets; leave the field NaN.
  }
  return CommutativityReport{hausdorff_distance(ca, cb), moment_diff, ab.map(), ba.map()};
}

}  // namespace lgrowth
