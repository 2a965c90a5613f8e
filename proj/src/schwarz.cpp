#include "lgrowth/schwarz.hpp"

#include <cmath>
#include <memory>
#include <limits>
#include <numbers>

#include "lgrowth/errors.hpp"

namespace lgrowth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double mean_modulus_on_circle(const SchwarzFunction& s, Complex c, double radius) {
  double acc = 0.0;
  constexpr int kPoints = 16;
  for (int k = 0; k < kPoints; ++k) acc += std::abs(s(c + std::polar(radius, kTwoPi * (k + 0.5) / kPoints)));
  return acc / kPoints;
}

Pole locate_pole(const SchwarzFunction& s, const Contour& boundary, Complex hint) {
  const double reach = 10.0 * (nearest_sample_distance(boundary, hint) + boundary.diameter());
  Complex z = hint;
  Complex best = hint;
  int order = 1;
  double last_step = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 2; ++pass) {
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const Complex value = s(z);
      if (!finite(value)) {
        converged = true;
        break;
      }
      // The difference step must stay well inside the distance to the pole,
      // which the previous Newton step estimates.
      const double h = std::max(std::min(1e-6 * std::max(nearest_sample_distance(boundary, z), 1e-3), 1e-2 * last_step),
                                64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z)));
      const Complex slope = s.slope(z, h);
      const Complex step = static_cast<double>(order) * value / slope;
      // Once within difference-quotient resolution of the pole the slope is
      // noise; accept the last iterate when the steps were already tiny.
      const bool resolved = last_step < 1e-10 * (1.0 + std::abs(z));
      if (!finite(step) || std::abs(step) > 10.0 * last_step) {
        if (resolved) {
          converged = true;
          break;
        }
        if (!finite(step)) fail(ErrorCode::no_convergence, "pole search produced a non-finite step");
      }
      z += step;
      last_step = std::abs(step);
      if (!finite(z) || std::abs(z - hint) > reach) throw ConvergenceError("pole not found", best);
      best = z;
      if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("pole search did not converge", best);
    if (pass == 1) break;
    const double dist = nearest_sample_distance(boundary, z);
    const double rho = 1e-2 * dist;
    const double m1 = mean_modulus_on_circle(s, z, rho);
    const double m2 = mean_modulus_on_circle(s, z, 0.1 * rho);
    order = static_cast<int>(std::lround(std::log10(m2 / m1)));
    if (order < 1) throw ConvergenceError("hint converged to a regular point", z);
    if (order == 1) break;
  }

  const double dist = nearest_sample_distance(boundary, z);
  if (!(dist > 1e-12 * (1.0 + boundary.diameter())))
    fail(ErrorCode::geometry, "residue circle would intersect the boundary");
  const double rho = 1e-2 * dist;
  const Complex r1 = residue_on_circle(s, z, rho);
  const Complex r2 = residue_on_circle(s, z, 0.1 * rho);
  if (std::abs(r1 - r2) > 1e-8 * (1.0 + std::abs(r1)))
    fail(ErrorCode::geometry, "residue integrals at two radii disagree; another singularity is nearby");
  return Pole{z, order, r2};
}

}  // namespace

Complex SchwarzFunction::slope(Complex z, double h) const {
  if (derivative) return derivative(z);
  return (value(z + h) - value(z - h)) / (2.0 * h);
}

SchwarzEvaluator::SchwarzEvaluator(const LaurentMap& m, std::size_t samples)
    : inverter_(m, samples), conjugate_(m.conjugate()), boundary_(boundary_contour(m, samples)) {}

Complex SchwarzEvaluator::operator()(Complex z) const {
  const Complex w = inverter_.continued(z);
  return conjugate_.value(1.0 / w);
}

Complex SchwarzEvaluator::derivative(Complex z) const {
  const Complex w = inverter_.continued(z);
  return conjugate_.derivative(1.0 / w) * (-1.0 / (w * w)) / map().derivative(w);
}

double SchwarzEvaluator::on_contour_residual() const {
  // On the circle 1/conj(w) = w, so S reduces to conj(f(w)) at the sample.
  double worst = 0.0;
  const std::size_t n = boundary_.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Complex w = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    const Complex z = boundary_[j];
    const auto wz = newton_invert(map(), z, w);
    const Complex s = conjugate_.value(1.0 / wz.value_or(w));
    worst = std::max(worst, std::abs(s - std::conj(z)));
  }
  return worst;
}

SchwarzFunction SchwarzEvaluator::as_function() const {
  // Shared copy so the function stays valid after this evaluator is gone.
  auto self = std::make_shared<const SchwarzEvaluator>(*this);
  return SchwarzFunction{[self](Complex z) { return (*self)(z); }, [self](Complex z) { return self->derivative(z); }};
}

std::vector<Complex> SchwarzEvaluator::pole_hints() const {
  std::vector<Complex> hints;
  for (const PoleTerm& p : map().poles()) {
    if (std::abs(p.location) == 0.0) continue;
    hints.push_back(map().value(1.0 / std::conj(p.location)));
  }
  return hints;
}

Complex residue_on_circle(const SchwarzFunction& s, Complex center, double radius, int points) {
  Complex acc = 0.0;
  for (int k = 0; k < points; ++k) {
    const Complex e = std::polar(1.0, kTwoPi * k / points);
    acc += s(center + radius * e) * radius * e;
  }
  return acc / static_cast<double>(points);
}

PoleData extract_poles(const SchwarzFunction& s, const Contour& boundary, const std::vector<Complex>& hints) {
  PoleData out;
  for (Complex h : hints) out.poles.push_back(locate_pole(s, boundary, h));
  const double scale = 1.0 + boundary.diameter();
  for (std::size_t i = 0; i < out.poles.size(); ++i)
    for (std::size_t j = i + 1; j < out.poles.size(); ++j)
      if (std::abs(out.poles[i].location - out.poles[j].location) < 1e-8 * scale)
        fail(ErrorCode::geometry, "poles collide; general position is required");
  return out;
}

PoleData extract_poles(const SchwarzEvaluator& s, const std::vector<Complex>& hints) {
  return extract_poles(s.as_function(), s.boundary(), hints.empty() ? s.pole_hints() : hints);
}

CauchyPoleFit cauchy_pole_fit(const Contour& c, const std::array<Complex, 3>& z) {
  const Complex c1 = cauchy_transform(c, z[0]);
  const Complex c2 = cauchy_transform(c, z[1]);
  const Complex c3 = cauchy_transform(c, z[2]);
  // (c1-c2)/(c1-c3) = (z2-z1)(z3-p) / ((z3-z1)(z2-p)) for C = alpha + beta/(z-p).
  const Complex ratio = (c1 - c2) * (z[2] - z[0]) / ((c1 - c3) * (z[1] - z[0]));
  if (!finite(ratio) || std::abs(ratio - 1.0) < 1e-14)
    fail(ErrorCode::no_convergence, "Cauchy transform is constant inside; no pole to fit");
  const Complex p = (ratio * z[1] - z[2]) / (ratio - 1.0);
  const Complex beta = (c1 - c2) * (z[0] - p) * (z[1] - p) / (z[1] - z[0]);
  const Complex alpha = c1 - beta / (z[0] - p);
  return CauchyPoleFit{p, Complex(0.0, 1.0) * beta / kTwoPi, alpha};
}

std::array<Complex, 3> interior_probe_points(const Contour& c) {
  const Complex center = c.centroid();
  if (winding_number(c.samples(), center) == 0)
    fail(ErrorCode::geometry, "contour centroid lies outside the droplet");
  const double d = nearest_sample_distance(c, center);
  std::array<Complex, 3> pts{};
  for (int k = 0; k < 3; ++k) pts[k] = center + std::polar(0.4 * d, 0.3 + kTwoPi * k / 3.0);
  return pts;
}

ResidueFlowReport residue_flow_check(const std::function<SchwarzSource(double)>& family, double t, double delta,
                                     const std::vector<Complex>& hints, std::optional<std::size_t> pump_pole) {
  if (!(delta > 0.0)) fail(ErrorCode::invalid_input, "finite-difference step must be positive");
  const SchwarzSource mid = family(t);
  const PoleData centre = extract_poles(mid.function, mid.boundary, hints);
  std::vector<Complex> tracked;
  for (const Pole& p : centre.poles) tracked.push_back(p.location);

  const SchwarzSource plus = family(t + delta);
  const SchwarzSource minus = family(t - delta);
  const PoleData up = extract_poles(plus.function, plus.boundary, tracked);
  const PoleData down = extract_poles(minus.function, minus.boundary, tracked);

  ResidueFlowReport report;
  for (std::size_t i = 0; i < centre.poles.size(); ++i) {
    ResidueFlowEntry e{centre.poles[i].location, centre.poles[i].residue,
                       (up.poles[i].location - down.poles[i].location) / (2.0 * delta),
                       (up.poles[i].residue - down.poles[i].residue) / (2.0 * delta)};
    const double expected = (pump_pole && *pump_pole == i) ? -1.0 : 0.0;
    report.max_location_drift = std::max(report.max_location_drift, std::abs(e.location_rate));
    report.max_residue_deviation = std::max(report.max_residue_deviation, std::abs(e.residue_rate - expected));
    report.poles.push_back(e);
  }
  return report;
}

}  // namespace lgrowth
