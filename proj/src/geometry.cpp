#include "lgrowth/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lgrowth/errors.hpp"
#include "lgrowth/spectral.hpp"

namespace lgrowth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double point_segment_distance(Complex p, Complex a, Complex b, double* param) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double s = len2 > 0.0 ? std::real((p - a) * std::conj(ab)) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  if (param) *param = s;
  return std::abs(p - (a + s * ab));
}

// Directed Hausdorff distance from the samples of a to the curve b.
double directed_hausdorff(const Contour& a, const Contour& b, const TrigInterpolant& bi) {
  const std::size_t n = b.size();
  const double dt = kTwoPi / static_cast<double>(n);
  double worst = 0.0;
  for (Complex p : a.samples()) {
    std::size_t j = 0;
    const double to_sample = nearest_sample_distance(b, p, &j);
    const std::size_t jm = (j + n - 1) % n;
    const std::size_t jp = (j + 1) % n;

    double s_prev = 0.0;
    double s_next = 0.0;
    const double d_prev = point_segment_distance(p, b[jm], b[j], &s_prev);
    const double d_next = point_segment_distance(p, b[j], b[jp], &s_next);
    double seg = std::min(d_prev, d_next);
    double t = d_prev < d_next ? (static_cast<double>(j) - 1.0 + s_prev) * dt
                               : (static_cast<double>(j) + s_next) * dt;

    // Newton on d/dt |b(t) - p|^2 / 2 = Re(conj(b - p) b'), kept inside the
    // bracket of the two neighbouring samples.
    const double lo = (static_cast<double>(j) - 1.0) * dt;
    const double hi = (static_cast<double>(j) + 1.0) * dt;
    bool ok = true;
    for (int it = 0; it < 30; ++it) {
      const auto jet = bi.jet(t);
      const Complex diff = jet.value - p;
      const double g = std::real(std::conj(diff) * jet.first);
      const double gp = std::norm(jet.first) + std::real(std::conj(diff) * jet.second);
      if (!(gp > 0.0)) {
        ok = false;
        break;
      }
      const double step = g / gp;
      t -= step;
      if (t < lo || t > hi) {
        ok = false;
        break;
      }
      if (std::abs(step) < 1e-15 * kTwoPi) break;
    }
    // Samples lie on the curve, so the nearest one bounds the distance; this
    // keeps coincident contours at exactly zero.
    const double d = std::min(to_sample, ok ? std::abs(bi.value(t) - p) : seg);
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace

Contour::Contour(std::vector<Complex> samples) : z_(std::move(samples)) {
  const std::size_t n = z_.size();
  if (n < 3) fail(ErrorCode::invalid_input, "contour needs at least 3 samples");
  for (Complex z : z_) require_finite(z, "contour sample");

  double total = 0.0;
  double smin = std::numeric_limits<double>::infinity();
  double smax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::abs(z_[(j + 1) % n] - z_[j]);
    total += s;
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  const double mean = total / static_cast<double>(n);
  if (!(smax <= 10.0 * mean) || !(smin >= 0.1 * mean))
    fail(ErrorCode::invalid_input, "contour spacing is not within a factor 10 of uniform");
  if (!(signed_area(z_) > 0.0))
    fail(ErrorCode::invalid_input, "contour must have positive signed area (counterclockwise)");
  if (has_self_intersection(z_)) fail(ErrorCode::invalid_input, "contour is self-intersecting");
  dz_ = spectral_derivative(z_);
}

double Contour::mean_spacing() const {
  double total = 0.0;
  for (std::size_t j = 0; j < z_.size(); ++j) total += std::abs(z_[(j + 1) % z_.size()] - z_[j]);
  return total / static_cast<double>(z_.size());
}

double Contour::local_spacing(std::size_t j) const {
  const std::size_t n = z_.size();
  return 0.5 * (std::abs(z_[(j + 1) % n] - z_[j]) + std::abs(z_[j] - z_[(j + n - 1) % n]));
}

double Contour::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < z_.size(); ++i)
    for (std::size_t j = i + 1; j < z_.size(); ++j) d = std::max(d, std::abs(z_[i] - z_[j]));
  return d;
}

Complex Contour::centroid() const {
  Complex s = 0.0;
  for (Complex z : z_) s += z;
  return s / static_cast<double>(z_.size());
}

double signed_area(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  if (n < 3) fail(ErrorCode::invalid_input, "area needs at least 3 samples");
  for (Complex z : samples) require_finite(z, "contour sample");
  const auto dz = spectral_derivative(samples);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += std::imag(std::conj(samples[j]) * dz[j]);
  return 0.5 * acc * kTwoPi / static_cast<double>(n);
}

double area(const Contour& c) {
  const auto& z = c.samples();
  const auto& dz = c.tangent();
  double acc = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) acc += std::imag(std::conj(z[j]) * dz[j]);
  return 0.5 * acc * kTwoPi / static_cast<double>(z.size());
}

double nearest_sample_distance(const Contour& c, PlanePoint z, std::size_t* index) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double d = std::norm(c[j] - z);
    if (d < best) {
      best = d;
      arg = j;
    }
  }
  if (index) *index = arg;
  return std::sqrt(best);
}

Complex cauchy_transform(const Contour& c, PlanePoint z) {
  require_finite(z, "evaluation point");
  std::size_t j = 0;
  const double d = nearest_sample_distance(c, z, &j);
  const double limit = 3.0 * c.local_spacing(j);
  if (!(d > limit)) throw ProximityError(d, limit);

  const auto& xi = c.samples();
  const auto& dxi = c.tangent();
  Complex acc = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) acc += std::conj(xi[k]) * dxi[k] / (z - xi[k]);
  return acc * (kTwoPi / static_cast<double>(xi.size()));
}

double hausdorff_distance(const Contour& a, const Contour& b) {
  const TrigInterpolant ai(a.samples());
  const TrigInterpolant bi(b.samples());
  return std::max(directed_hausdorff(a, b, bi), directed_hausdorff(b, a, ai));
}

int winding_number(std::span<const Complex> samples, PlanePoint z) {
  double total = 0.0;
  const std::size_t n = samples.size();
  for (std::size_t j = 0; j < n; ++j)
    total += std::arg((samples[(j + 1) % n] - z) / (samples[j] - z));
  return static_cast<int>(std::lround(total / kTwoPi));
}

double max_curvature(const Contour& c) {
  const auto& dz = c.tangent();
  const auto d2z = spectral_derivative(dz);
  double kmax = 0.0;
  for (std::size_t j = 0; j < dz.size(); ++j) {
    const double speed = std::abs(dz[j]);
    kmax = std::max(kmax, std::abs(std::imag(std::conj(dz[j]) * d2z[j])) / (speed * speed * speed));
  }
  return kmax;
}

bool has_self_intersection(std::span<const Complex> samples) {
  // Sweep over segments sorted by their left x-extent; only pairs whose
  // x-ranges overlap are tested exactly.
  const std::size_t n = samples.size();
  struct Seg {
    double xmin, xmax, ymin, ymax;
    std::size_t i;
  };
  std::vector<Seg> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = samples[i];
    const Complex b = samples[(i + 1) % n];
    segs[i] = {std::min(a.real(), b.real()), std::max(a.real(), b.real()),
               std::min(a.imag(), b.imag()), std::max(a.imag(), b.imag()), i};
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& s, const Seg& t) { return s.xmin < t.xmin; });
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n && segs[v].xmin <= segs[u].xmax; ++v) {
      if (segs[v].ymin > segs[u].ymax || segs[v].ymax < segs[u].ymin) continue;
      const std::size_t i = segs[u].i;
      const std::size_t k = segs[v].i;
      const std::size_t gap = (i > k) ? i - k : k - i;
      if (gap <= 1 || gap == n - 1) continue;
      if (segments_cross(samples[i], samples[(i + 1) % n], samples[k], samples[(k + 1) % n])) return true;
    }
  }
  return false;
}

std::vector<Complex> reversed(std::span<const Complex> samples) {
  return std::vector<Complex>(samples.rbegin(), samples.rend());
}

void write_contour_csv(const Contour& c, std::ostream& out) {
  out << "x,y\n";
  char buf[96];
  for (Complex z : c.samples()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
    out << buf;
  }
}

void write_contour_csv(const Contour& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  write_contour_csv(c, f);
  if (!f) fail(ErrorCode::io, "write to '" + path + "' failed");
}

namespace {
double parse_field(std::string_view text, std::size_t line) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(ErrorCode::invalid_input, "contour CSV line " + std::to_string(line) + ": bad number '" +
                                       std::string(text) + "'");
  return v;
}
}  // namespace

Contour read_contour_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::invalid_input, "contour CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y") fail(ErrorCode::invalid_input, "contour CSV line 1: expected header 'x,y'");
  std::vector<Complex> z;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      fail(ErrorCode::invalid_input, "contour CSV line " + std::to_string(lineno) + ": expected two fields");
    const std::string_view view(line);
    z.emplace_back(parse_field(view.substr(0, comma), lineno), parse_field(view.substr(comma + 1), lineno));
  }
  return Contour(std::move(z));
}

Contour read_contour_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  return read_contour_csv(f);
}

}  // namespace lgrowth
