#include "lgrowth/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lgrowth/errors.hpp"
#include "lgrowth/spectral.hpp"

namespace lgrowth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCuspThreshold = 1e-6;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// FFT needs room for modes +1 .. -K without wrap-around.
std::size_t transform_size(const LaurentMap& m, std::size_t n) { return std::max(n, m.order() + 2); }

}  // namespace

LaurentMap::LaurentMap(double r, Complex a0, std::vector<Complex> u, std::vector<PoleTerm> poles)
    : r_(r), a0_(a0), u_(std::move(u)), poles_(std::move(poles)) {
  require_finite(r, "conformal radius r");
  if (!(r > 0.0)) fail(ErrorCode::invalid_input, "conformal radius r must be positive");
  require_finite(a0, "a0");
  for (Complex c : u_) require_finite(c, "Laurent coefficient");
  for (const PoleTerm& p : poles_) {
    require_finite(p.coefficient, "pole coefficient");
    require_finite(p.location, "pole location");
    if (!(std::abs(p.location) < 1.0))
      fail(ErrorCode::invalid_input, "pole term location must lie inside the unit disk");
  }
}

Complex LaurentMap::value(Complex w) const {
  Complex tail = 0.0;
  if (!u_.empty()) {
    const Complex iw = 1.0 / w;
    for (auto it = u_.rbegin(); it != u_.rend(); ++it) tail = (tail + *it) * iw;
  }
  Complex z = r_ * w + a0_ + tail;
  for (const PoleTerm& p : poles_) z += p.coefficient / (w - p.location);
  return z;
}

Complex LaurentMap::derivative(Complex w) const {
  Complex d = r_;
  if (!u_.empty()) {
    const Complex iw = 1.0 / w;
    Complex acc = 0.0;
    for (std::size_t k = u_.size(); k >= 1; --k) acc = (acc + static_cast<double>(k) * u_[k - 1]) * iw;
    d -= acc * iw;
  }
  for (const PoleTerm& p : poles_) {
    const Complex s = w - p.location;
    d -= p.coefficient / (s * s);
  }
  return d;
}

Complex LaurentMap::second_derivative(Complex w) const {
  Complex d = 0.0;
  if (!u_.empty()) {
    const Complex iw = 1.0 / w;
    Complex acc = 0.0;
    for (std::size_t k = u_.size(); k >= 1; --k)
      acc = (acc + static_cast<double>(k * (k + 1)) * u_[k - 1]) * iw;
    d += acc * iw * iw;
  }
  for (const PoleTerm& p : poles_) {
    const Complex s = w - p.location;
    d += 2.0 * p.coefficient / (s * s * s);
  }
  return d;
}

LaurentMap LaurentMap::conjugate() const {
  std::vector<Complex> u(u_.size());
  for (std::size_t k = 0; k < u_.size(); ++k) u[k] = std::conj(u_[k]);
  std::vector<PoleTerm> poles;
  for (const PoleTerm& p : poles_) poles.push_back({std::conj(p.coefficient), std::conj(p.location)});
  return LaurentMap(r_, std::conj(a0_), std::move(u), std::move(poles));
}

LaurentMap LaurentMap::translated(Complex shift) const { return LaurentMap(r_, a0_ + shift, u_, poles_); }

Complex evaluate(const LaurentMap& m, Complex w) {
  require_finite(w, "w");
  if (std::abs(w) < 1.0 - 1e-14) fail(ErrorCode::domain, "map evaluated inside the unit disk");
  return m.value(w);
}

Complex evaluate_derivative(const LaurentMap& m, Complex w) {
  require_finite(w, "w");
  if (std::abs(w) < 1.0 - 1e-14) fail(ErrorCode::domain, "map derivative evaluated inside the unit disk");
  return m.derivative(w);
}

std::vector<Complex> boundary_values(const LaurentMap& m, std::size_t n) {
  std::vector<Complex> out(n);
  if (transform_size(m, n) != n) {
    for (std::size_t j = 0; j < n; ++j)
      out[j] = m.value(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n)));
    return out;
  }
  std::vector<Complex> c(n, 0.0);
  c[1] += m.r();
  c[0] += m.a0();
  for (std::size_t k = 1; k <= m.order(); ++k) c[n - k] += m.u()[k - 1];
  out = fourier_synthesis(c);
  if (!m.poles().empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex w = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
      for (const PoleTerm& p : m.poles()) out[j] += p.coefficient / (w - p.location);
    }
  }
  return out;
}

std::vector<Complex> boundary_derivatives(const LaurentMap& m, std::size_t n) {
  const std::size_t N = transform_size(m, n);
  std::vector<Complex> out(n);
  if (N != n) {
    for (std::size_t j = 0; j < n; ++j)
      out[j] = m.derivative(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n)));
    return out;
  }
  // w f'(w) = r w - sum k u_k w^{-k}
  std::vector<Complex> c(N, 0.0);
  c[1] = m.r();
  for (std::size_t k = 1; k <= m.order(); ++k) c[N - k] -= static_cast<double>(k) * m.u()[k - 1];
  auto wfp = fourier_synthesis(c);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex w = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    out[j] = wfp[j] / w;
    for (const PoleTerm& p : m.poles()) {
      const Complex s = w - p.location;
      out[j] -= p.coefficient / (s * s);
    }
  }
  return out;
}

double univalence_margin(const LaurentMap& m, std::size_t n) {
  const auto d = boundary_derivatives(m, n);
  double best = std::numeric_limits<double>::infinity();
  for (Complex x : d) best = std::min(best, std::abs(x));
  return best;
}

bool tail_converged(const LaurentMap& m) {
  return m.order() == 0 || std::abs(m.u().back()) < 1e-10 * m.r();
}

Contour boundary_contour(const LaurentMap& m, std::size_t n) {
  if (!is_power_of_two(n)) fail(ErrorCode::invalid_input, "boundary sample count must be a power of two");
  if (n < 4 * m.order()) fail(ErrorCode::invalid_input, "boundary sample count must be at least 4K");
  const std::size_t check = next_power_of_two(std::max<std::size_t>(256, 64 * m.order()));
  const double margin = univalence_margin(m, check);
  if (!(margin > kCuspThreshold)) throw CuspError(margin, std::numeric_limits<double>::quiet_NaN(), "boundary sampling");
  auto z = boundary_values(m, n);
  if (has_self_intersection(z)) throw CuspError(margin, std::numeric_limits<double>::quiet_NaN(), "boundary image overlaps itself");
  return Contour(std::move(z));
}

MapFit fit_map(const Contour& c, std::size_t order, double tolerance) {
  const std::size_t n = c.size();
  if (n < order + 2) fail(ErrorCode::invalid_input, "fit order too large for the sample count");
  const auto coef = fourier_coefficients(c.samples());
  const Complex c1 = coef[1];
  const double r = std::abs(c1);
  if (!(r > 0.0)) throw FitError(std::numeric_limits<double>::infinity(), tolerance);
  const double alpha = std::arg(c1);

  std::vector<Complex> kept(n, 0.0);
  kept[0] = coef[0];
  kept[1] = coef[1];
  std::vector<Complex> u(order);
  for (std::size_t k = 1; k <= order; ++k) {
    kept[n - k] = coef[n - k];
    u[k - 1] = coef[n - k] * std::polar(1.0, static_cast<double>(k) * alpha);
  }
  const auto rebuilt = fourier_synthesis(kept);
  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) residual = std::max(residual, std::abs(rebuilt[j] - c[j]));
  residual /= r;
  if (!(residual <= tolerance)) throw FitError(residual, tolerance);
  return MapFit{LaurentMap(r, coef[0], std::move(u)), residual};
}

MomentVector harmonic_moments(const LaurentMap& m, std::size_t count, std::size_t samples) {
  const auto z = boundary_values(m, samples);
  const auto fp = boundary_derivatives(m, samples);
  double zmin = std::numeric_limits<double>::infinity();
  for (Complex x : z) zmin = std::min(zmin, std::abs(x));
  if (!(zmin > 1e-12 * m.r()) || winding_number(z, 0.0) != 1)
    fail(ErrorCode::domain, "harmonic moments need the origin inside the droplet; translate the map first");

  MomentVector out{map_area(m, samples) / std::numbers::pi, std::vector<Complex>(count, 0.0)};
  const double n = static_cast<double>(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const Complex w = std::polar(1.0, kTwoPi * static_cast<double>(j) / n);
    // dz = i w f'(w) dphi; the 1/(2 pi i k) prefactor absorbs i and 2 pi.
    const Complex base = std::conj(z[j]) * w * fp[j];
    const Complex inv = 1.0 / z[j];
    Complex power = 1.0;
    for (std::size_t k = 1; k <= count; ++k) {
      power *= inv;
      out.tk[k - 1] += power * base;
    }
  }
  for (std::size_t k = 1; k <= count; ++k) out.tk[k - 1] /= static_cast<double>(k) * n;
  return out;
}

double area_from_coefficients(const LaurentMap& m) {
  if (!m.poles().empty()) fail(ErrorCode::invalid_input, "coefficient area formula needs a pure Laurent map");
  double s = m.r() * m.r();
  for (std::size_t k = 1; k <= m.order(); ++k) s -= static_cast<double>(k) * std::norm(m.u()[k - 1]);
  return std::numbers::pi * s;
}

double map_area(const LaurentMap& m, std::size_t samples) {
  const auto z = boundary_values(m, samples);
  const auto fp = boundary_derivatives(m, samples);
  double acc = 0.0;
  const double n = static_cast<double>(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const Complex w = std::polar(1.0, kTwoPi * static_cast<double>(j) / n);
    acc += std::imag(std::conj(z[j]) * Complex(0.0, 1.0) * w * fp[j]);
  }
  return 0.5 * acc * kTwoPi / n;
}

std::optional<Complex> newton_invert(const LaurentMap& m, Complex z, Complex seed, int max_iter) {
  const double scale = m.r() + std::abs(m.a0()) + std::abs(z);
  const double tol = 1e-14 * scale;
  Complex w = seed;
  double res = std::abs(m.value(w) - z);
  for (int it = 0; it < max_iter; ++it) {
    if (res <= tol) return w;
    const Complex d = m.derivative(w);
    if (!(std::abs(d) > 0.0)) return std::nullopt;
    Complex step = (m.value(w) - z) / d;
    // Limit jumps so the iterate cannot leap across the singular set at w = 0.
    const double cap = 0.5 * std::abs(w);
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      const Complex trial = w - lambda * step;
      const double tr = std::abs(m.value(trial) - z);
      if (std::isfinite(tr) && tr < res) {
        w = trial;
        res = tr;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) return res <= 1e3 * tol ? std::optional<Complex>(w) : std::nullopt;
  }
  return res <= 1e3 * tol ? std::optional<Complex>(w) : std::nullopt;
}

MapInverter::MapInverter(const LaurentMap& m, std::size_t samples)
    : map_(m), boundary_(boundary_values(m, samples)), boundary_deriv_(boundary_derivatives(m, samples)) {}

bool MapInverter::inside_droplet(Complex z) const { return winding_number(boundary_, z) != 0; }

Complex MapInverter::boundary_seed(Complex z, bool inward) const {
  std::size_t best = 0;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < boundary_.size(); ++j) {
    const double d = std::abs(boundary_[j] - z);
    if (d < dmin) {
      dmin = d;
      best = j;
    }
  }
  const double phi = kTwoPi * static_cast<double>(best) / static_cast<double>(boundary_.size());
  const double rho = dmin / std::max(std::abs(boundary_deriv_[best]), 1e-12);
  const double radius = inward ? std::max(1.0 - rho, 0.05) : 1.0 + rho;
  return std::polar(radius, phi);
}

Complex MapInverter::exterior(Complex z, std::optional<Complex> seed) const {
  require_finite(z, "point to invert");
  if (inside_droplet(z)) fail(ErrorCode::domain, "point lies inside the droplet");
  const Complex seeds[3] = {seed.value_or((z - map_.a0()) / map_.r()), boundary_seed(z, false),
                            (z - map_.a0()) / map_.r()};
  Complex last = seeds[0];
  for (Complex s0 : seeds) {
    if (std::abs(s0) < 1.0) s0 /= std::abs(s0);
    auto w = newton_invert(map_, z, s0);
    if (w && std::abs(*w) >= 1.0 - 1e-12) return *w;
    if (w) last = *w;
  }
  throw ConvergenceError("map inversion failed", last);
}

Complex MapInverter::continued(Complex z) const {
  require_finite(z, "point to invert");
  const bool inside = inside_droplet(z);
  if (!inside) return exterior(z);
  auto w = newton_invert(map_, z, boundary_seed(z, true));
  if (!w || !(std::abs(*w) < 1.0 + 1e-12)) throw ConvergenceError("continued map inversion failed", w.value_or(0.0));
  return *w;
}

}  // namespace lgrowth
