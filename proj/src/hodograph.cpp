#include "lgrowth/hodograph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "lgrowth/errors.hpp"
#include "parallel.hpp"

namespace lgrowth {

namespace {

constexpr double kPi = std::numbers::pi;

// Throughout 0 < mu < T the q-pole of S lies on sheet 1 (checked against
// the curve side in the tests).
constexpr int kQPoleSheet = 1;

double max_abs(const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

void require_ordered(const HodographParams& hp, double E1, double E2) {
  if (!(hp.q < E1 && E1 < E2 && E2 < hp.p))
    fail(ErrorCode::domain, "branch points must satisfy q < E1 < E2 < p");
}

// 2 f2 and its z-derivative for general (complex) data.
struct F2Data {
  Complex p, q, mu, nu, E1, E2;
  int q_sheet;

  Complex sp() const { return sqrt_p2(p, E1, E2, 1); }
  Complex sq() const { return sqrt_p2(q, E1, E2, q_sheet); }

  Complex two_f2(Complex z) const {
    const Complex m = 0.5 * (E1 + E2);
    return (std::conj(q) - std::conj(p)) * (z - m) + std::conj(mu) - std::conj(nu) - mu * sp() / (z - p) -
           nu * sq() / (z - q);
  }
  Complex two_f2_prime(Complex z) const {
    return (std::conj(q) - std::conj(p)) + mu * sp() / ((z - p) * (z - p)) + nu * sq() / ((z - q) * (z - q));
  }
};

F2Data f2_data(const HodographParams& hp, double E1, double E2) {
  return {hp.p, hp.q, hp.mu, hp.nu(), E1, E2, kQPoleSheet};
}

// Sign-resolved s_k with sqrt(P2)(z) ~ s_k (z - E_k)^{1/2} on sheet 1 near E_k
// (principal square root on the right).
Complex local_sqrt_factor(Complex Ek, Complex Ej) {
  const Complex s = std::sqrt(Ek - Ej);
  const Complex outward = (Ek - Ej) / std::abs(Ek - Ej);
  const Complex probe = Ek + 1e-6 * std::abs(Ek - Ej) * outward;
  const Complex ratio = sqrt_p2(probe, Ek, Ej, 1) / std::sqrt(probe - Ek);
  return std::abs(ratio - s) <= std::abs(ratio + s) ? s : -s;
}

Complex infinity_numerator(const SheetPoint& pt) { return pt.sheet == 1 ? -0.5 : 0.5; }

}  // namespace

void HodographParams::validate() const {
  for (double v : {p, q, mu, T}) require_finite(v, "hodograph parameter");
  if (!(q < p)) fail(ErrorCode::invalid_input, "hodograph family needs q < p");
  if (mu == 0.0) fail(ErrorCode::infeasible, "mu must be nonzero");
  if (!(mu > 0.0 && mu < T))
    fail(ErrorCode::infeasible, "parameters outside the solvable region 0 < mu < T");
}

// ---------------------------------------------------------------------------
// Differentials

GenusZeroDifferential GenusZeroDifferential::plus(Complex E1, Complex E2) {
  return {Kind::plus, E1, E2, SheetPoint::infinity(1), SheetPoint::infinity(1)};
}

GenusZeroDifferential GenusZeroDifferential::minus(Complex E1, Complex E2) {
  return {Kind::minus, E1, E2, SheetPoint::infinity(2), SheetPoint::infinity(2)};
}

GenusZeroDifferential GenusZeroDifferential::dipole(Complex E1, Complex E2, SheetPoint a, SheetPoint b) {
  for (const SheetPoint* s : {&a, &b}) {
    if (s->sheet != 1 && s->sheet != 2) fail(ErrorCode::invalid_input, "sheet must be 1 or 2");
    if (s->point && (*s->point == E1 || *s->point == E2 || on_cut(*s->point, E1, E2)))
      fail(ErrorCode::invalid_input, "dipole endpoint on the cut");
  }
  if (a.is_infinity() && b.is_infinity() && a.sheet == b.sheet)
    fail(ErrorCode::invalid_input, "dipole endpoints coincide");
  if (a.point && b.point && *a.point == *b.point)
    fail(ErrorCode::invalid_input, "dipole endpoints share a projection");
  return {Kind::dipole, E1, E2, a, b};
}

Complex GenusZeroDifferential::branch_numerator(Complex z) const {
  switch (kind_) {
    case Kind::plus:
      return 0.5 * (z - 0.5 * (E1_ + E2_));
    case Kind::minus:
      return -0.5 * (z - 0.5 * (E1_ + E2_));
    case Kind::dipole:
      break;
  }
  Complex g = 0.0;
  if (a_.is_infinity())
    g += infinity_numerator(a_);
  else
    g += 0.5 * sqrt_p2(*a_.point, E1_, E2_, a_.sheet) / (z - *a_.point);
  if (b_.is_infinity())
    g -= infinity_numerator(b_);
  else
    g -= 0.5 * sqrt_p2(*b_.point, E1_, E2_, b_.sheet) / (z - *b_.point);
  return g;
}

Complex GenusZeroDifferential::density(Complex z, int sheet) const {
  if (sheet != 1 && sheet != 2) fail(ErrorCode::invalid_input, "sheet must be 1 or 2");
  if (z == E1_ || z == E2_ || on_cut(z, E1_, E2_)) fail(ErrorCode::domain, "differential evaluated on the cut");
  Complex rational = kind_ == Kind::dipole ? 0.0 : 0.5;
  if (kind_ == Kind::dipole) {
    for (const auto& [pt, sign] : {std::pair{a_, 1.0}, std::pair{b_, -1.0}}) {
      if (pt.is_infinity()) continue;
      if (z == *pt.point) fail(ErrorCode::domain, "differential evaluated at a pole");
      rational += 0.5 * sign / (z - *pt.point);
    }
  }
  return rational + branch_numerator(z) / sqrt_p2(z, E1_, E2_, sheet);
}

Complex GenusZeroDifferential::residue(const SheetPoint& at, int points) const {
  if (points < 8) fail(ErrorCode::invalid_input, "residue quadrature needs at least 8 points");
  std::vector<Complex> singular = {E1_, E2_};
  for (const SheetPoint* s : {&a_, &b_})
    if (s->point) singular.push_back(*s->point);

  Complex center = 0.0;
  double radius = 0.0;
  if (at.point) {
    center = *at.point;
    double gap = std::numeric_limits<double>::infinity();
    for (Complex s : singular)
      if (s != center) gap = std::min(gap, std::abs(s - center));
    // Distance to the cut segment, not just its ends.
    const Complex d = E2_ - E1_;
    const double t = std::clamp(std::real((center - E1_) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    gap = std::min(gap, std::abs(center - (E1_ + t * d)));
    radius = 0.25 * gap;
  } else {
    double far = 0.0;
    for (Complex s : singular) far = std::max(far, std::abs(s));
    radius = 4.0 * (1.0 + far);
  }

  Complex sum = 0.0;
  for (int j = 0; j < points; ++j) {
    const Complex e = std::polar(1.0, 2.0 * kPi * j / points);
    sum += density(center + radius * e, at.sheet) * radius * e;  // dz = i r e dtheta
  }
  const Complex loop = sum / static_cast<double>(points);  // (1/2 pi i) closed integral
  return at.point ? loop : -loop;
}

// ---------------------------------------------------------------------------
// Split of S

SchwarzSplit f1_f2_split(const CurveN1& c, Complex z) {
  if (c.q_pole_sheet == 0) fail(ErrorCode::invalid_input, "curve has no branch data");
  if (z == c.p || z == c.q) fail(ErrorCode::domain, "f1/f2 split evaluated at a pole");
  const F2Data data{c.p, c.q, c.mu, c.nu, c.E1, c.E2, c.q_pole_sheet};
  const Complex two_f1 = std::conj(c.p) + std::conj(c.q) + c.mu / (c.p - z) + c.nu / (c.q - z);
  return {0.5 * two_f1, 0.5 * data.two_f2(z)};
}

// ---------------------------------------------------------------------------
// Hodograph system

namespace {

// The system in the offsets d1 = E1 - q and d2 = p - E2. Near mu -> T the
// invariant E1 approaches q like nu^2, and E1 - q would lose all its digits
// if formed from E1.
struct Offsets {
  double d1, d2;
};

std::array<double, 2> residual_from_offsets(const HodographParams& hp, Offsets o) {
  const double L = hp.p - hp.q;
  const double a = std::sqrt(o.d2 / (L - o.d1));
  const double b = std::sqrt((L - o.d2) / o.d1);
  const double gap = L - o.d1 - o.d2;  // E2 - E1
  return {hp.mu * (a + b) - hp.T * (b - 1.0) + 0.5 * L * gap,
          hp.mu * (1.0 / a + 1.0 / b) - hp.T * (1.0 / b - 1.0) - 0.5 * L * gap};
}

// Jacobian with respect to (E1, E2).
std::array<std::array<double, 2>, 2> jacobian_from_offsets(const HodographParams& hp, Offsets o) {
  const double mu = hp.mu, T = hp.T;
  const double L = hp.p - hp.q;
  const double pE1 = L - o.d1, E1q = o.d1, pE2 = o.d2, E2q = L - o.d2;
  const double a = std::sqrt(pE2 / pE1);
  const double b = std::sqrt(E2q / E1q);
  const double half = 0.5 * L;
  std::array<std::array<double, 2>, 2> J{};
  J[0][0] = mu * (a / (2 * pE1) - b / (2 * E1q)) + T * b / (2 * E1q) - half;
  J[0][1] = mu * (-a / (2 * pE2) + b / (2 * E2q)) - T * b / (2 * E2q) + half;
  J[1][0] = mu * (-1 / (2 * a * pE1) + 1 / (2 * b * E1q)) - T / (2 * b * E1q) + half;
  J[1][1] = mu * (1 / (2 * a * pE2) - 1 / (2 * b * E2q)) + T / (2 * b * E2q) - half;
  return J;
}

Offsets offsets_of(const HodographParams& hp, double E1, double E2) {
  require_ordered(hp, E1, E2);
  return {E1 - hp.q, hp.p - E2};
}

}  // namespace

std::array<double, 2> hodograph_residual(const HodographParams& hp, double E1, double E2) {
  return residual_from_offsets(hp, offsets_of(hp, E1, E2));
}

std::array<std::array<double, 2>, 2> hodograph_jacobian(const HodographParams& hp, double E1, double E2) {
  return jacobian_from_offsets(hp, offsets_of(hp, E1, E2));
}

BranchPoints with_branch_coefficients(const HodographParams& hp, double E1, double E2) {
  require_ordered(hp, E1, E2);
  const F2Data data = f2_data(hp, E1, E2);
  BranchPoints bp{E1, E2, 0.0, 0.0};
  bp.alpha1 = 0.5 * data.two_f2_prime(E1) / local_sqrt_factor(E1, E2);
  bp.alpha2 = 0.5 * data.two_f2_prime(E2) / local_sqrt_factor(E2, E1);
  return bp;
}

namespace {

struct NewtonResult {
  double E1, E2, residual;
  int iterations;
};

NewtonResult newton(const HodographParams& hp, double E1, double E2, const HodographOptions& opt) {
  Offsets o = offsets_of(hp, E1, E2);
  const double L = hp.p - hp.q;
  auto r = residual_from_offsets(hp, o);
  double norm = max_abs(r);
  auto iterate = [&] { return Complex(hp.q + o.d1, hp.p - o.d2); };
  for (int it = 0; it <= opt.max_iterations; ++it) {
    if (norm < opt.tolerance) return {hp.q + o.d1, hp.p - o.d2, norm, it};
    if (it == opt.max_iterations) break;
    const auto J = jacobian_from_offsets(hp, o);
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double size = std::abs(J[0][0] * J[1][1]) + std::abs(J[0][1] * J[1][0]);
    if (!(std::abs(det) > 1e-13 * size))
      fail(ErrorCode::bifurcation, "hodograph Jacobian is singular (bifurcation point) at E1 = " +
                                       std::to_string(iterate().real()) + ", E2 = " + std::to_string(iterate().imag()));
    // Newton step in (E1, E2), applied to the offsets (dd1 = dE1, dd2 = -dE2).
    const double dE1 = -(J[1][1] * r[0] - J[0][1] * r[1]) / det;
    const double dE2 = -(-J[1][0] * r[0] + J[0][0] * r[1]) / det;

    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
      const Offsets t{o.d1 + lambda * dE1, o.d2 - lambda * dE2};
      if (!(t.d1 > 0.0 && t.d2 > 0.0 && t.d1 + t.d2 < L)) continue;
      const auto rt = residual_from_offsets(hp, t);
      if (max_abs(rt) < norm) {
        o = t;
        r = rt;
        norm = max_abs(rt);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  throw ConvergenceError("hodograph Newton did not reach the tolerance (residual " + std::to_string(norm) +
                             "); last iterate E1 + i E2",
                         iterate());
}

// Collapsed-disk limit: for small mu the cut shrinks to a point, with the
// invariants E* -+ 2 sqrt(mu T) / (p - q).
std::pair<double, double> small_mu_seed(const HodographParams& hp) {
  const double centre = hp.q + hp.T / (hp.p - hp.q);
  const double spread = 2.0 * std::sqrt(hp.mu * hp.T) / (hp.p - hp.q);
  return {centre - spread, centre + spread};
}

}  // namespace

HodographSolution solve_hodograph(const HodographParams& hp, std::optional<BranchPoints> seed,
                                  const HodographOptions& opt) {
  hp.validate();
  if (!(opt.tolerance > 0.0) || opt.max_iterations < 1 || !(opt.continuation_start > 0.0) ||
      !(opt.continuation_ratio > 1.0))
    fail(ErrorCode::invalid_input, "invalid hodograph solver options");

  NewtonResult res{};
  if (seed) {
    res = newton(hp, seed->E1, seed->E2, opt);
  } else {
    // Continuation in mu at fixed T from the collapsed disk.
    HodographParams step = hp;
    step.mu = std::min(hp.mu, opt.continuation_start * hp.T);
    auto [e1, e2] = small_mu_seed(step);
    if (!(hp.q < e1 && e2 < hp.p))
      fail(ErrorCode::infeasible, "collapsed-disk seed lies beyond p: the droplet would reach the pole");
    res = newton(step, e1, e2, opt);
    double ratio = opt.continuation_ratio;
    while (step.mu < hp.mu) {
      HodographParams next = step;
      next.mu = std::min(hp.mu, step.mu * ratio);
      try {
        res = newton(next, res.E1, res.E2, opt);
        step = next;
        continue;
      } catch (const ConvergenceError&) {
        ratio = std::sqrt(ratio);
        if (ratio > 1.0 + 1e-6) continue;
        // Stalled. A vanishing branch coefficient at the last converged point
        // means the real solution branch ends at a fold (cusp) before the
        // target; otherwise the failure is reported as non-convergence.
        const BranchPoints last = with_branch_coefficients(step, res.E1, res.E2);
        const double floor = 1e-2 * std::sqrt(hp.p - hp.q);
        if (std::min(std::abs(last.alpha1), std::abs(last.alpha2)) < floor)
          fail(ErrorCode::bifurcation, "continuation in mu stopped at mu = " + std::to_string(step.mu) +
                                           ": the real solution branch folds (cusp) before the target");
        throw;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::domain) throw;
        fail(ErrorCode::bifurcation, "continuation in mu left q < E1 < E2 < p at mu = " + std::to_string(step.mu));
      }
    }
  }
  HodographSolution sol;
  sol.branch = with_branch_coefficients(hp, res.E1, res.E2);
  sol.residual = res.residual;
  sol.iterations = res.iterations;
  return sol;
}

CurveN1 curve_from_hodograph(const HodographParams& hp, const BranchPoints& bp) {
  const CurveN1 c = build_curve(hp.p, hp.q, hp.mu, hp.nu());
  return complete_from_branch_points(c, bp.E1, bp.E2);
}

// ---------------------------------------------------------------------------
// Flows

GenusZeroDifferential pump_differential(const HodographParams& hp, const BranchPoints& bp, Pump pump) {
  if (pump == Pump::infinity)
    return GenusZeroDifferential::dipole(bp.E1, bp.E2, SheetPoint::infinity(1), SheetPoint::at(hp.q, kQPoleSheet));
  return GenusZeroDifferential::dipole(bp.E1, bp.E2, SheetPoint::at(hp.p, 1), SheetPoint::infinity(2));
}

namespace {

// Coefficient of (z - E_k)^{-1/2} in the density of dW on sheet 1.
Complex singular_coefficient(const GenusZeroDifferential& dw, const BranchPoints& bp, int k) {
  const Complex Ek = bp.E(k);
  const Complex Ej = bp.E(3 - k);
  return dw.branch_numerator(Ek) / local_sqrt_factor(Ek, Ej);
}

void require_regular(const BranchPoints& bp) {
  for (int k = 1; k <= 2; ++k)
    if (!(std::abs(bp.alpha(k)) >= 1e-10))
      fail(ErrorCode::bifurcation, "branch coefficient alpha_" + std::to_string(k) + " vanishes (near bifurcation)");
}

}  // namespace

std::array<double, 2> string_rhs(const HodographParams& hp, const BranchPoints& bp, Pump pump) {
  require_regular(bp);
  const auto dw = pump_differential(hp, bp, pump);
  std::array<double, 2> out{};
  // dS has singular part (alpha_k / 2)(z - E_k)^{-1/2}.
  for (int k = 1; k <= 2; ++k) out[k - 1] = (2.0 * singular_coefficient(dw, bp, k) / bp.alpha(k)).real();
  return out;
}

std::array<double, 2> whitham_velocity(const HodographParams& hp, const BranchPoints& bp, Pump a, Pump b) {
  require_regular(bp);
  const auto wa = pump_differential(hp, bp, a);
  const auto wb = pump_differential(hp, bp, b);
  std::array<double, 2> out{};
  for (int k = 1; k <= 2; ++k) {
    const Complex gb = wb.branch_numerator(bp.E(k));
    if (std::abs(gb) < 1e-14) fail(ErrorCode::bifurcation, "reference flow is stationary at a branch point");
    out[k - 1] = (wa.branch_numerator(bp.E(k)) / gb).real();
  }
  return out;
}

// ---------------------------------------------------------------------------
// S dz decomposition

Complex sdz_density(const CurveN1& c, Complex z, int sheet) {
  if (c.q_pole_sheet == 0) fail(ErrorCode::invalid_input, "curve has no branch data");
  const int qs = c.q_pole_sheet;
  const auto plus = GenusZeroDifferential::plus(c.E1, c.E2);
  const auto minus = GenusZeroDifferential::minus(c.E1, c.E2);
  const auto w_p_inf1 =
      GenusZeroDifferential::dipole(c.E1, c.E2, SheetPoint::at(c.p, 1), SheetPoint::infinity(1));
  const auto w_inf2_q =
      GenusZeroDifferential::dipole(c.E1, c.E2, SheetPoint::infinity(2), SheetPoint::at(c.q, qs));
  const auto w_inf1_q =
      GenusZeroDifferential::dipole(c.E1, c.E2, SheetPoint::infinity(1), SheetPoint::at(c.q, qs));
  return std::conj(c.q) * plus.density(z, sheet) + std::conj(c.p) * minus.density(z, sheet) -
         c.mu * w_p_inf1.density(z, sheet) + std::conj(c.mu) * w_inf2_q.density(z, sheet) -
         (std::conj(c.mu) - c.nu) * w_inf1_q.density(z, sheet);
}

SdzReport sdz_decomposition_check(const CurveN1& c, const std::vector<Complex>& samples) {
  if (!c.solved()) fail(ErrorCode::invalid_input, "curve has no double point yet");
  SdzReport rep;
  for (Complex z : samples) {
    for (int sheet = 1; sheet <= 2; ++sheet) {
      const double err = std::abs(schwarz_two_sheeted(c, z, sheet) - sdz_density(c, z, sheet));
      rep.sup_residual = std::max(rep.sup_residual, err);
      ++rep.evaluated;
    }
  }

  // Residues of S dz by quadrature.
  const double scale = c.scale() + std::max(std::abs(c.E1), std::abs(c.E2));
  auto loop = [&](Complex center, double radius, int sheet) {
    constexpr int n = 512;
    Complex sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const Complex e = std::polar(1.0, 2.0 * kPi * j / n);
      sum += schwarz_two_sheeted(c, center + radius * e, sheet) * radius * e;
    }
    return sum / static_cast<double>(n);
  };
  auto gap = [&](Complex z) {
    const Complex d = c.E2 - c.E1;
    const double t = std::clamp(std::real((z - c.E1) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    return std::min({std::abs(z - (c.E1 + t * d)), std::abs(c.p - c.q)});
  };
  rep.residues[0] = loop(c.p, 0.25 * gap(c.p), 1);
  rep.residues[1] = loop(c.q, 0.25 * gap(c.q), c.q_pole_sheet);
  rep.residues[2] = -loop(0.0, 4.0 * scale, 1);
  rep.residues[3] = -loop(0.0, 4.0 * scale, 2);
  rep.expected_residues = {-c.mu, -c.nu, c.mu - std::conj(c.mu) + c.nu, std::conj(c.mu)};
  rep.residue_sum = rep.residues[0] + rep.residues[1] + rep.residues[2] + rep.residues[3];
  rep.far_field = sdz_density(c, Complex(1e6, 1e6) * scale, 1);
  return rep;
}

// ---------------------------------------------------------------------------
// Bifurcation scan

const char* scan_status_name(ScanStatus s) {
  switch (s) {
    case ScanStatus::regular:
      return "regular";
    case ScanStatus::bifurcation:
      return "bifurcation";
    case ScanStatus::infeasible:
      return "infeasible";
    case ScanStatus::failed:
      return "failed";
  }
  return "failed";
}

namespace {

void contour_diagnostics(const HodographParams& hp, const BranchPoints& bp, double& margin, double& curvature) {
  try {
    const CurveN1 curve = curve_from_hodograph(hp, bp);
    const auto comps = classify_real_section(curve);
    const auto it = std::find_if(comps.begin(), comps.end(), [](const TracedComponent& t) { return t.physical; });
    if (it == comps.end()) throw Error(ErrorCode::geometry, "no physical component");
    margin = std::numeric_limits<double>::infinity();
    for (Complex z : it->contour.samples())
      margin = std::min({margin, std::abs(z - curve.E1), std::abs(z - curve.E2)});
    curvature = max_curvature(it->contour);
  } catch (const Error&) {
    // The contour could not be resolved: treat it as touching a branch point.
    margin = 0.0;
    curvature = std::numeric_limits<double>::infinity();
  }
}

ScanPoint scan_one(double p, double q, double mu, double T) {
  ScanPoint pt;
  pt.mu = mu;
  pt.T = T;
  const HodographParams hp{p, q, mu, T};
  try {
    const auto sol = solve_hodograph(hp);
    pt.branch = sol.branch;
    const auto J = hodograph_jacobian(hp, sol.branch.E1, sol.branch.E2);
    Eigen::Matrix2d M;
    M << J[0][0], J[0][1], J[1][0], J[1][1];
    pt.det = M.determinant();
    pt.min_singular_value = Eigen::JacobiSVD<Eigen::Matrix2d>(M).singularValues()(1);
    pt.status = ScanStatus::regular;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::bifurcation)
      pt.status = ScanStatus::bifurcation;
    else if (e.code() == ErrorCode::infeasible || e.code() == ErrorCode::invalid_input)
      pt.status = ScanStatus::infeasible;
    else
      pt.status = ScanStatus::failed;
    return pt;
  } catch (const std::exception&) {
    pt.status = ScanStatus::failed;
    return pt;
  }
  contour_diagnostics(hp, *pt.branch, pt.cusp_margin, pt.max_curvature);
  return pt;
}

}  // namespace

BifurcationScan bifurcation_scan(double p, double q, const std::vector<double>& mus, const std::vector<double>& Ts,
                                 unsigned threads) {
  BifurcationScan scan;
  scan.points.resize(mus.size() * Ts.size());
  detail::parallel_for(scan.points.size(), threads, [&](std::size_t i) {
    scan.points[i] = scan_one(p, q, mus[i / Ts.size()], Ts[i % Ts.size()]);
  });
  for (std::size_t a = 0; a < mus.size(); ++a) {
    for (std::size_t b = 0; b + 1 < Ts.size(); ++b) {
      const ScanPoint& lo = scan.points[a * Ts.size() + b];
      const ScanPoint& hi = scan.points[a * Ts.size() + b + 1];
      if (lo.status != ScanStatus::regular) continue;
      if (hi.status == ScanStatus::regular && lo.det * hi.det < 0.0)
        scan.brackets.push_back({mus[a], lo.T, hi.T, false});
      else if (hi.status == ScanStatus::bifurcation)
        scan.brackets.push_back({mus[a], lo.T, hi.T, true});
    }
  }
  return scan;
}

std::vector<FoldApproach> refine_fold(double p, double q, const DetBracket& bracket, int bisections) {
  if (!bracket.fold) fail(ErrorCode::invalid_input, "bracket does not end at a fold");
  double lo = bracket.T_low, hi = bracket.T_high;
  std::vector<FoldApproach> out;
  auto record = [&](double T, const HodographSolution& sol) {
    const HodographParams hp{p, q, bracket.mu, T};
    FoldApproach f{T, 0.0, std::min(std::abs(sol.branch.alpha1), std::abs(sol.branch.alpha2)), 0.0, 0.0};
    const auto J = hodograph_jacobian(hp, sol.branch.E1, sol.branch.E2);
    f.det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    contour_diagnostics(hp, sol.branch, f.cusp_margin, f.max_curvature);
    out.push_back(f);
  };
  record(lo, solve_hodograph({p, q, bracket.mu, lo}));
  for (int i = 0; i < bisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    try {
      const auto sol = solve_hodograph({p, q, bracket.mu, mid});
      lo = mid;
      record(mid, sol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::bifurcation) throw;
      hi = mid;
    }
  }
  return out;
}

}  // namespace lgrowth
