#include "lgrowth/curve_n1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lgrowth/errors.hpp"

namespace lgrowth {

namespace {

std::size_t tri_index(int l, int k) { return static_cast<std::size_t>(l * (l + 1) / 2 + k); }

// Divide by (z - r), discarding the remainder.
Polynomial deflate(const Polynomial& p, Complex r) {
  const auto& c = p.coefficients();
  const int n = p.degree();
  std::vector<Complex> q(std::max(n, 1), 0.0);
  Complex carry = 0.0;
  for (int k = n; k >= 1; --k) {
    carry = c[k] + carry * r;
    q[k - 1] = carry;
  }
  return Polynomial(std::move(q));
}

// Smallest 2^a 3^b 5^c >= n, so the spectral derivative of the traced
// samples gets a fast transform.
std::size_t smooth_size(std::size_t n) {
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2, 3, 5})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

bool nearly_real(Complex z, double scale) { return std::abs(z.imag()) <= 1e-12 * scale; }

}  // namespace

HermitianCurve::HermitianCurve(int degree) : d_(degree) {
  if (degree < 1) fail(ErrorCode::invalid_input, "curve degree must be at least 1");
  lower_.assign(tri_index(degree, degree) + 1, 0.0);
  dense_.assign(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0);
}

Complex HermitianCurve::at(int l, int k) const {
  if (l < 0 || k < 0 || l > d_ || k > d_) fail(ErrorCode::invalid_input, "curve coefficient index out of range");
  return l >= k ? lower_[tri_index(l, k)] : std::conj(lower_[tri_index(k, l)]);
}

void HermitianCurve::set(int l, int k, Complex value) {
  if (l < 0 || k < 0 || l > d_ || k > d_) fail(ErrorCode::invalid_input, "curve coefficient index out of range");
  require_finite(value, "curve coefficient");
  if (l == k) {
    if (std::abs(value.imag()) > 1e-12 * (1.0 + std::abs(value)))
      fail(ErrorCode::invalid_input, "diagonal curve coefficients must be real");
    lower_[tri_index(l, l)] = value.real();
  } else if (l > k) {
    lower_[tri_index(l, k)] = value;
  } else {
    lower_[tri_index(k, l)] = std::conj(value);
  }
  const int lo = std::min(l, k);
  const int hi = std::max(l, k);
  dense_[static_cast<std::size_t>(hi * (d_ + 1) + lo)] = lower_[tri_index(hi, lo)];
  dense_[static_cast<std::size_t>(lo * (d_ + 1) + hi)] = std::conj(lower_[tri_index(hi, lo)]);
}

Complex HermitianCurve::evaluate(Complex s, Complex z) const {
  Complex acc = 0.0;
  for (int l = d_; l >= 0; --l) {
    Complex row = 0.0;
    for (int k = d_; k >= 0; --k) row = row * z + dense(l, k);
    acc = acc * s + row;
  }
  return acc;
}

Complex HermitianCurve::d_ds(Complex s, Complex z) const {
  Complex acc = 0.0;
  for (int l = d_; l >= 1; --l) {
    Complex row = 0.0;
    for (int k = d_; k >= 0; --k) row = row * z + dense(l, k);
    acc = acc * s + static_cast<double>(l) * row;
  }
  return acc;
}

Complex HermitianCurve::d_dz(Complex s, Complex z) const {
  Complex acc = 0.0;
  for (int l = d_; l >= 0; --l) {
    Complex row = 0.0;
    for (int k = d_; k >= 1; --k) row = row * z + static_cast<double>(k) * dense(l, k);
    acc = acc * s + row;
  }
  return acc;
}

double HermitianCurve::real_section(Complex z) const { return evaluate(std::conj(z), z).real(); }

Complex HermitianCurve::real_section_gradient(Complex z) const {
  // F real: F_x + i F_y = 2 dF/dzbar = 2 conj(dF/dz).
  return 2.0 * std::conj(d_dz(std::conj(z), z));
}

Polynomial HermitianCurve::real_axis_polynomial() const {
  std::vector<Complex> c(2 * d_ + 1, 0.0);
  for (int l = 0; l <= d_; ++l)
    for (int k = 0; k <= d_; ++k) c[l + k] += at(l, k);
  for (auto& x : c) x = x.real();
  return Polynomial(std::move(c));
}

HermitianCurve disk_curve(Complex center, double radius) {
  // (s - conj c)(z - c) - R^2 = s z - c s - conj(c) z + |c|^2 - R^2
  HermitianCurve h(1);
  h.set(1, 1, 1.0);
  h.set(1, 0, -center);
  h.set(0, 0, std::norm(center) - radius * radius);
  return h;
}

namespace {

struct Tracer {
  const HermitianCurve& curve;
  double scale;
  double step;
  std::size_t max_steps;
  double grad_floor;  // gradients below this count as a singular point

  Tracer(const HermitianCurve& c, double sc, double st, std::size_t ms)
      : curve(c), scale(sc), step(st), max_steps(ms) {
    // Typical gradient magnitude at the curve's length scale.
    double g = 0.0;
    for (int l = 0; l <= c.degree(); ++l)
      for (int k = 0; k <= c.degree(); ++k)
        g += std::abs(c.at(l, k)) * static_cast<double>(l + k) * std::pow(2.0 * sc, l + k - 1);
    grad_floor = 1e-12 * std::max(g, 1e-300);
  }

  Complex gradient(Complex z) const {
    const Complex g = curve.real_section_gradient(z);
    if (!(std::abs(g) > grad_floor))
      fail(ErrorCode::no_convergence, "real-section tracing stalled: gradient vanishes near (" +
                                          std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
    return g;
  }

  // Newton along the line z0 + s * n, stopped once the update is at
  // roundoff level or stops shrinking.
  Complex correct(Complex z0, Complex n) const {
    double s = 0.0;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
      const Complex z = z0 + s * n;
      const double f = curve.real_section(z);
      const double df = std::real(std::conj(gradient(z)) * n);
      if (df == 0.0) break;
      const double ds = f / df;
      if (!(std::abs(ds) < last)) break;
      s -= ds;
      last = std::abs(ds);
      if (last < 1e-14 * scale) break;
    }
    const Complex z = z0 + s * n;
    if (!(last < 1e-9 * scale)) fail(ErrorCode::no_convergence, "real-section corrector did not converge");
    return z;
  }

  Complex project(Complex seed) const {
    const Complex g = gradient(seed);
    return correct(seed, g / std::abs(g));
  }

  Complex tangent(Complex z) const {
    const Complex g = gradient(z);
    return Complex(0.0, 1.0) * g / std::abs(g);
  }

  // Advance by pseudo-arclength h: the step's component along the current
  // tangent is exactly h.
  Complex advance(Complex z, double h) const {
    const Complex t = tangent(z);
    return correct(z + h * t, Complex(0.0, -1.0) * t);
  }

  // First pass: walk until the seed is passed again; returns the loop length
  // in units of the nominal step.
  double loop_length(Complex z0) const {
    Complex z = z0;
    for (std::size_t i = 0; i < max_steps; ++i) {
      const Complex t = tangent(z);
      if (i > 8) {
        const double along = std::real(std::conj(t) * (z0 - z));
        const double across = std::abs(std::imag(std::conj(t) * (z0 - z)));
        if (along > -1e-12 * step && along <= step && across < 0.5 * step)
          return (static_cast<double>(i) * step + along);
      }
      z = advance(z, step);
    }
    fail(ErrorCode::no_convergence, "real-section component did not close within the step budget");
  }

  std::vector<Complex> walk(Complex z0, double h, std::size_t n, double* mismatch) const {
    std::vector<Complex> pts;
    pts.reserve(n);
    Complex z = z0;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(z);
      z = advance(z, h);
    }
    *mismatch = std::real(std::conj(tangent(z)) * (z0 - z));
    return pts;
  }
};

}  // namespace

Contour trace_component(const HermitianCurve& curve, Complex seed, const TraceOptions& options) {
  require_finite(seed, "trace seed");
  const double scale = options.scale > 0.0 ? options.scale : 1.0 + std::abs(seed);
  const double step = options.step > 0.0 ? options.step : 1e-3 * scale;
  const Tracer tr(curve, scale, step, options.max_steps);
  const Complex z0 = tr.project(seed);

  const double length = tr.loop_length(z0);
  const std::size_t n = smooth_size(std::max<std::size_t>(16, static_cast<std::size_t>(std::lround(length / step))));
  // Retrace with the step adjusted until the n-th point lands on the start,
  // so the samples are uniform in a smooth periodic parameter.
  double h = length / static_cast<double>(n);
  std::vector<Complex> pts;
  for (int it = 0; it < 8; ++it) {
    double mismatch = 0.0;
    pts = tr.walk(z0, h, n, &mismatch);
    if (std::abs(mismatch) < 1e-12 * scale) break;
    h += mismatch / static_cast<double>(n);
  }
  if (signed_area(pts) < 0.0) std::reverse(pts.begin() + 1, pts.end());
  return Contour(std::move(pts));
}

std::vector<Contour> trace_real_section(const HermitianCurve& curve, const std::vector<Complex>& seeds,
                                        const TraceOptions& options) {
  std::vector<Contour> out;
  for (Complex seed : seeds) {
    bool known = false;
    for (const Contour& c : out) {
      std::size_t j = 0;
      const double d = nearest_sample_distance(c, seed, &j);
      if (d < 2.0 * c.local_spacing(j)) known = true;
    }
    if (!known) out.push_back(trace_component(curve, seed, options));
  }
  return out;
}

double CurveN1::scale() const { return 1.0 + std::max(std::abs(p), std::abs(q)); }

HermitianCurve CurveN1::hermitian() const {
  if (!h) fail(ErrorCode::invalid_input, "curve free term h is not determined yet");
  HermitianCurve r(2);
  r.set(2, 2, 1.0);
  r.set(2, 1, b);
  r.set(1, 1, c.real());
  r.set(2, 0, d);
  r.set(1, 0, e);
  r.set(0, 0, *h);
  return r;
}

CurveN1 build_curve(Complex p, Complex q, Complex mu, Complex nu) {
  require_finite(p, "p");
  require_finite(q, "q");
  require_finite(mu, "mu");
  require_finite(nu, "nu");
  if (mu == 0.0 || nu == 0.0) fail(ErrorCode::invalid_input, "residues mu and nu must be nonzero");
  if (std::abs((mu + nu).imag()) > 1e-12 * (1.0 + std::abs(mu) + std::abs(nu)))
    fail(ErrorCode::invalid_input, "mu + nu must be real (residues of S dz sum to zero)");
  CurveN1 c;
  c.p = p;
  c.q = q;
  c.mu = mu;
  c.nu = nu;
  c.b = -p - q;
  c.c = std::norm(p + q) + (mu + nu).real();
  c.d = p * q;
  c.e = -p * q * (std::conj(p) + std::conj(q)) - p * nu - q * mu;
  return c;
}

namespace {

struct QuarticParts {
  Polynomial A, B;  // P4 = A - h B
};

QuarticParts quartic_parts(const CurveN1& c) {
  if (std::abs(c.p - c.q) == 0.0) fail(ErrorCode::invalid_input, "degenerate configuration p = q");
  const Complex norm = std::conj(c.q) - std::conj(c.p);
  const Complex inv = 1.0 / (norm * norm);
  const Polynomial lin({c.e, c.c, std::conj(c.b)});  // bbar z^2 + c z + e
  const Polynomial zp({-c.p, 1.0});
  const Polynomial zq({-c.q, 1.0});
  const Polynomial quad({0.0, std::conj(c.e), std::conj(c.d)});  // dbar z^2 + ebar z
  const Polynomial four({4.0});
  QuarticParts parts;
  parts.A = (lin * lin - four * zp * zq * quad) * inv;
  parts.B = (four * zp * zq) * inv;
  return parts;
}

}  // namespace

Polynomial quartic_from_curve(const CurveN1& c, double h) {
  require_finite(h, "h");
  const auto parts = quartic_parts(c);
  Polynomial P4 = parts.A - parts.B * Complex(h);
  if (P4.degree() != 4 || std::abs(P4.leading() - 1.0) > 1e-12)
    fail(ErrorCode::internal, "discriminant quartic is not monic");
  // Exact monic normalisation after the check.
  auto coef = P4.coefficients();
  coef[4] = 1.0;
  return Polynomial(std::move(coef));
}

Complex sqrt_p2(Complex z, Complex E1, Complex E2, int sheet) {
  if (sheet != 1 && sheet != 2) fail(ErrorCode::invalid_input, "sheet must be 1 or 2");
  const Complex m = 0.5 * (E1 + E2);
  const Complex delta = 0.5 * (E2 - E1);
  const Complex u = z - m;
  if (u == 0.0) fail(ErrorCode::domain, "sqrt(P2) evaluated at the midpoint of the cut");
  // Principal sqrt of 1 - (delta/u)^2 is discontinuous exactly when z is on
  // the segment, and u * sqrt(...) -> u at infinity.
  const Complex ratio = delta / u;
  const Complex root = u * std::sqrt(1.0 - ratio * ratio);
  return sheet == 1 ? root : -root;
}

bool on_cut(Complex z, Complex E1, Complex E2) {
  const Complex span = E2 - E1;
  if (std::abs(span) == 0.0) return std::abs(z - E1) == 0.0;
  const Complex t = (z - E1) / span;
  return t.real() >= 0.0 && t.real() <= 1.0 && std::abs(t.imag()) * std::abs(span) <= 1e-14 * (1.0 + std::abs(z));
}

Complex schwarz_two_sheeted(const CurveN1& c, Complex z, int sheet) {
  if (!c.solved()) fail(ErrorCode::invalid_input, "curve branch data not computed");
  require_finite(z, "z");
  if (z == c.p || z == c.q || z == c.E1 || z == c.E2)
    fail(ErrorCode::domain, "Schwarz function evaluated at a pole or branch point");
  if (on_cut(z, c.E1, c.E2)) fail(ErrorCode::domain, "Schwarz function evaluated on the branch cut");
  const Complex root = (z - c.E3) * sqrt_p2(z, c.E1, c.E2, sheet);
  const Complex num = c.p * c.nu + c.q * c.mu - (c.mu + c.nu) * z + (std::conj(c.q) - std::conj(c.p)) * root;
  return 0.5 * (std::conj(c.p) + std::conj(c.q)) + num / (2.0 * (z - c.p) * (z - c.q));
}

const Contour& DoublePointSolution::physical_contour() const {
  for (const auto& comp : components)
    if (comp.physical) return comp.contour;
  fail(ErrorCode::internal, "double-point solution without a physical component");
}

CurveN1 with_double_point(const CurveN1& c, const DoublePointSolution& s) {
  CurveN1 out = c;
  out.h = s.h;
  out.P4 = quartic_from_curve(c, s.h);
  out.E1 = s.E1;
  out.E2 = s.E2;
  out.E3 = s.E3;
  out.q_pole_sheet = s.q_pole_sheet;
  return out;
}

// The sheet on which S has its pole at q: the numerator of the explicit
// formula vanishes at q on the other sheet.
int pole_sheet_at_q(const CurveN1& c, Complex E1, Complex E2, Complex E3) {
  auto numerator = [&](int sheet) {
    return std::abs(c.nu * (c.p - c.q) + (std::conj(c.q) - std::conj(c.p)) * (c.q - E3) * sqrt_p2(c.q, E1, E2, sheet));
  };
  return numerator(1) > numerator(2) ? 1 : 2;
}

CurveN1 complete_from_branch_points(const CurveN1& c, Complex E1, Complex E2) {
  const auto parts = quartic_parts(c);
  const Complex bE = parts.B(E1);
  if (std::abs(bE) == 0.0) fail(ErrorCode::domain, "branch point coincides with a pole");
  const double h = (parts.A(E1) / bE).real();
  CurveN1 out = c;
  out.h = h;
  out.P4 = quartic_from_curve(c, h);
  // P4 / ((z - E1)(z - E2)) = (z - E3)^2
  const Polynomial rest = deflate(deflate(out.P4, E1), E2);
  out.E1 = E1;
  out.E2 = E2;
  out.E3 = -0.5 * rest.coefficient(1);
  out.q_pole_sheet = pole_sheet_at_q(c, E1, E2, out.E3);
  return out;
}

namespace {

std::vector<Complex> real_axis_seeds(const HermitianCurve& curve, double scale) {
  const Polynomial axis = curve.real_axis_polynomial();
  const Polynomial daxis = axis.derivative();
  std::vector<Complex> seeds;
  for (Complex r : axis.roots()) {
    if (!nearly_real(r, 1e4 * scale)) continue;
    const double x = r.real();
    // Skip tangential (double) crossings such as isolated real points.
    if (std::abs(daxis(x)) < 1e-8 * (1.0 + std::abs(axis.coefficient(0)))) continue;
    seeds.emplace_back(x, 0.0);
  }
  std::sort(seeds.begin(), seeds.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return seeds;
}

double sheet1_mismatch(const CurveN1& solved, Complex z) {
  if (on_cut(z, solved.E1, solved.E2) || z == solved.p || z == solved.q) return std::numeric_limits<double>::infinity();
  return std::abs(schwarz_two_sheeted(solved, z, 1) - std::conj(z));
}

// True when the double point is a crossing of two real branches of the real
// section (indefinite Hessian of F). Such a boundary would pinch at E3, so
// the candidate cannot describe a smooth droplet; the physical double point
// is an isolated real point of the section instead.
bool double_point_is_crossing(const HermitianCurve& curve, double E3, double scale) {
  const double h = 1e-3 * scale;
  auto F = [&](double x, double y) { return curve.real_section(Complex(x, y)); };
  const double f0 = F(E3, 0.0);
  const double fxx = (F(E3 + h, 0.0) - 2.0 * f0 + F(E3 - h, 0.0)) / (h * h);
  const double fyy = (F(E3, h) - 2.0 * f0 + F(E3, -h)) / (h * h);
  const double fxy = (F(E3 + h, h) - F(E3 + h, -h) - F(E3 - h, h) + F(E3 - h, -h)) / (4.0 * h * h);
  const double curvature = std::abs(fxx) + std::abs(fyy) + std::abs(fxy);
  const bool on_section = std::abs(f0) <= 1e-8 * curvature * scale * scale;
  return on_section && fxx * fyy - fxy * fxy < 0.0;
}

// Traces every component crossing the real axis and tests S_1 = conj(z) on it.
// Returns nothing when no crossing is physical, which avoids tracing the
// real sections of spurious candidates.
std::vector<TracedComponent> classify_components(const CurveN1& solved, double scale) {
  const HermitianCurve curve = solved.hermitian();
  std::vector<Complex> seeds = real_axis_seeds(curve, scale);
  // Roundoff can split the isolated double point into two close simple
  // roots; they are not crossings of a traceable component.
  std::erase_if(seeds, [&](Complex z) { return std::abs(z - solved.E3) < 1e-5 * scale; });
  const bool any_physical = std::any_of(seeds.begin(), seeds.end(),
                                        [&](Complex z) { return sheet1_mismatch(solved, z) < 1e-6 * scale; });
  if (!any_physical) return {};

  TraceOptions opt;
  opt.scale = scale;
  std::vector<TracedComponent> out;
  for (const Contour& contour : trace_real_section(curve, seeds, opt)) {
    double worst = 0.0;
    for (Complex z : contour.samples()) worst = std::max(worst, sheet1_mismatch(solved, z));
    const bool physical = worst < 1e-6 * scale;
    out.push_back(TracedComponent{contour, physical, worst});
  }
  return out;
}

}  // namespace

std::vector<TracedComponent> classify_real_section(const CurveN1& solved) {
  if (!solved.solved()) fail(ErrorCode::invalid_input, "curve has no double point yet");
  return classify_components(solved, solved.scale());
}

namespace {

HermitianCurve c_with_h(const CurveN1& c, double h) {
  CurveN1 copy = c;
  copy.h = h;
  return copy.hermitian();
}

}  // namespace

DoublePointSolution solve_double_point(const CurveN1& c) {
  const double scale = c.scale();
  for (Complex v : {c.p, c.q, c.mu, c.nu})
    if (!nearly_real(v, scale)) fail(ErrorCode::domain, "double-point search needs real parameters");
  const double p = c.p.real();
  const double q = c.q.real();

  // P4 = A - h B. A double root E3 satisfies A(E3) = h B(E3) and
  // A'(E3) = h B'(E3), so E3 is a root of W = A'B - AB' and h = A/B there.
  const auto parts = quartic_parts(c);
  const Polynomial W = parts.A.derivative() * parts.B - parts.A * parts.B.derivative();

  struct Candidate {
    double E3, h;
  };
  std::vector<Candidate> cands;
  for (Complex r : W.roots()) {
    if (!nearly_real(r, 1e4 * scale)) continue;
    const double x = r.real();
    const double bx = parts.B(x).real();
    if (std::abs(bx) < 1e-12 * scale * scale) continue;
    cands.push_back({x, parts.A(x).real() / bx});
  }

  std::vector<DoublePointSolution> admissible;
  for (const Candidate& cand : cands) {
    // Two distinct double roots with the same h: P4 is a perfect square and
    // the curve is reducible (no simple branch points).
    bool square = false;
    for (const Candidate& other : cands)
      if (std::abs(other.E3 - cand.E3) > 1e-6 * scale && std::abs(other.h - cand.h) <= 1e-9 * (1.0 + std::abs(cand.h)))
        square = true;
    if (square) continue;

    const Polynomial P4 = quartic_from_curve(c, cand.h);
    const Polynomial P2 = deflate(deflate(P4, cand.E3), cand.E3);
    const Complex b1 = P2.coefficient(1);
    const Complex b0 = P2.coefficient(0);
    const double disc = (b1 * b1 - 4.0 * b0).real();
    if (!(disc > 1e-10 * scale * scale)) continue;
    const double sq = std::sqrt(disc);
    const double E1 = 0.5 * (-b1.real() - sq);
    const double E2 = 0.5 * (-b1.real() + sq);
    if (!(q < E1 && E1 < E2 && E2 < p)) continue;

    DoublePointSolution sol{cand.h, cand.E3, E1, E2, 0, {}};
    if (double_point_is_crossing(c_with_h(c, cand.h), cand.E3, scale)) continue;
    sol.q_pole_sheet = pole_sheet_at_q(c, E1, E2, cand.E3);
    const CurveN1 solved = with_double_point(c, sol);
    try {
      sol.components = classify_components(solved, scale);
    } catch (const Error&) {
      continue;  // real section cannot be traced: not an admissible droplet
    }
    const auto physical = std::count_if(sol.components.begin(), sol.components.end(),
                                        [](const TracedComponent& t) { return t.physical; });
    if (physical == 1) admissible.push_back(std::move(sol));
  }
  if (admissible.empty())
    fail(ErrorCode::infeasible, "no admissible double point: parameters are outside the physical family");
  if (admissible.size() > 1)
    fail(ErrorCode::infeasible, "ambiguous double point: several candidates pass the physical-section test");
  return admissible.front();
}

}  // namespace lgrowth
