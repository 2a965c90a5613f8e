#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lgrowth/curve_n1.hpp"
#include "lgrowth/errors.hpp"

namespace lgrowth {

// Real one-pole family: poles of S at p (residue -mu) and q, with
// T = mu - nu = Area / pi. Solvable region: q < p and 0 < mu < T.
struct HodographParams {
  double p = 2.0;
  double q = -3.0;
  double mu = 0.1;
  double T = 1.0;

  double nu() const { return mu - T; }
  // Throws invalid_input (mu = 0, non-finite) or infeasible (outside 0 < mu < T).
  void validate() const;
};

// Riemann invariants E1 < E2 and the coefficients alpha_k of the local
// expansion S(z) = regular + alpha_k (z - E_k)^{1/2} + ..., where the square
// root is the principal branch.
struct BranchPoints {
  double E1 = 0.0;
  double E2 = 0.0;
  Complex alpha1 = 0.0;
  Complex alpha2 = 0.0;

  Complex E(int k) const { return k == 1 ? E1 : E2; }
  Complex alpha(int k) const { return k == 1 ? alpha1 : alpha2; }
};

// One point of the two-sheeted plane: a finite point or infinity on a sheet.
struct SheetPoint {
  std::optional<Complex> point;  // nullopt is infinity
  int sheet = 1;

  static SheetPoint at(Complex z, int sheet) { return {z, sheet}; }
  static SheetPoint infinity(int sheet) { return {std::nullopt, sheet}; }
  bool is_infinity() const { return !point.has_value(); }
};

// Meromorphic differentials on the genus-zero surface w^2 = (z - E1)(z - E2),
// stored as densities with respect to dz. Sheet 1 has sqrt(P2) ~ +z at
// infinity.
class GenusZeroDifferential {
 public:
  enum class Kind { plus, minus, dipole };

  // dW+- = [sqrt(P2) +- (z - m)] dz / (2 sqrt(P2)), m the midpoint of the cut.
  static GenusZeroDifferential plus(Complex E1, Complex E2);
  static GenusZeroDifferential minus(Complex E1, Complex E2);
  // Simple poles with residue +1 at a and -1 at b, no other poles.
  static GenusZeroDifferential dipole(Complex E1, Complex E2, SheetPoint a, SheetPoint b);

  Kind kind() const { return kind_; }
  Complex E1() const { return E1_; }
  Complex E2() const { return E2_; }
  const SheetPoint& first() const { return a_; }
  const SheetPoint& second() const { return b_; }

  // Density at z on the given sheet. Throws domain at branch points, on the
  // cut and at finite poles.
  Complex density(Complex z, int sheet) const;

  // The numerator G in density = rational part + G(z) / sqrt(P2(z)); its
  // value at a branch point is the coefficient of the (z - E_k)^{-1/2}
  // singularity up to the local sign of sqrt(P2).
  Complex branch_numerator(Complex z) const;

  // Residue at a finite point or at infinity on a sheet, by trapezoid
  // quadrature on a circle that separates it from all other singularities.
  Complex residue(const SheetPoint& at, int points = 256) const;

 private:
  GenusZeroDifferential(Kind kind, Complex E1, Complex E2, SheetPoint a, SheetPoint b)
      : kind_(kind), E1_(E1), E2_(E2), a_(a), b_(b) {}

  Kind kind_;
  Complex E1_, E2_;
  SheetPoint a_, b_;
};

// S = f1 + f2 / sqrt(P2) on sheet 1 of a solved curve (uses its branch points
// and q-pole sheet).
struct SchwarzSplit {
  Complex f1;
  Complex f2;
};
SchwarzSplit f1_f2_split(const CurveN1& c, Complex z);

// 2 f2(E1), 2 f2(E2) for the real family. The q-pole sits on sheet 1
// throughout the solvable region.
std::array<double, 2> hodograph_residual(const HodographParams& params, double E1, double E2);
// Rows: residual component, columns: d/dE1, d/dE2.
std::array<std::array<double, 2>, 2> hodograph_jacobian(const HodographParams& params, double E1, double E2);

struct HodographOptions {
  double tolerance = 1e-12;  // on max |r_k|
  int max_iterations = 50;
  double continuation_start = 1e-4;  // initial mu / T of the auto seed
  double continuation_ratio = 2.0;   // geometric mu step of the auto seed
};

struct HodographSolution {
  BranchPoints branch;
  double residual = 0.0;
  int iterations = 0;  // Newton iterations of the final solve
};

// Damped Newton with the analytic Jacobian. Without a seed, continues in mu
// from the collapsed disk limit at fixed T. Throws bifurcation on a singular
// Jacobian and no_convergence (with the last iterate as E1 + i E2) when 50
// iterations do not reach the tolerance.
HodographSolution solve_hodograph(const HodographParams& params, std::optional<BranchPoints> seed = std::nullopt,
                                  const HodographOptions& options = {});

// Branch expansion coefficients for given invariants.
BranchPoints with_branch_coefficients(const HodographParams& params, double E1, double E2);

// CurveN1 data (b, c, d, e, h, P4, E1..E3, q-pole sheet) reconstructed from a
// hodograph solution without any tracing.
CurveN1 curve_from_hodograph(const HodographParams& params, const BranchPoints& bp);

enum class Pump { infinity, p };

// Flow differentials: dW(inf) = dipole(inf sheet 1, q on its pole sheet),
// dW(p) = dipole(p sheet 1, inf sheet 2).
GenusZeroDifferential pump_differential(const HodographParams& params, const BranchPoints& bp, Pump pump);

// dE_k / dT(pump) = (dW / dS)(E_k). The p-flow moves mu and T together.
std::array<double, 2> string_rhs(const HodographParams& params, const BranchPoints& bp, Pump pump);

// V_k = (dW(a) / dW(b))(E_k), so that dE_k/dT(a) = V_k dE_k/dT(b).
std::array<double, 2> whitham_velocity(const HodographParams& params, const BranchPoints& bp, Pump a, Pump b);

struct SdzReport {
  double sup_residual = 0.0;  // over samples and both sheets
  std::size_t evaluated = 0;
  // Residues of S dz by quadrature at p (sheet 1), q (its sheet), inf1, inf2
  // and the ones implied by the decomposition coefficients.
  std::array<Complex, 4> residues{};
  std::array<Complex, 4> expected_residues{};
  Complex residue_sum = 0.0;
  Complex far_field = 0.0;  // decomposition density far out on sheet 1
};

// Compares S dz with qbar dW+ + pbar dW- - mu dW(p1,inf1) + mubar dW(inf2,q)
// - (mubar - nu) dW(inf1,q) at each sample on both sheets.
SdzReport sdz_decomposition_check(const CurveN1& solved, const std::vector<Complex>& samples);

// The decomposition density itself on a sheet.
Complex sdz_density(const CurveN1& solved, Complex z, int sheet);

enum class ScanStatus { regular, bifurcation, infeasible, failed };
const char* scan_status_name(ScanStatus s);

struct ScanPoint {
  double mu = 0.0, T = 0.0;
  ScanStatus status = ScanStatus::failed;
  double det = 0.0;                 // Jacobian determinant
  double min_singular_value = 0.0;  // of the Jacobian
  double cusp_margin = 0.0;         // distance from the nearest branch point to the traced contour
  double max_curvature = 0.0;       // of the traced contour
  std::optional<BranchPoints> branch;
};

// Along a T-ray at fixed mu, the cusp locus lies between T_low and T_high:
// either the determinant changes sign there (fold == false) or the real
// solution branch ends, regular at T_low and a bifurcation at T_high.
struct DetBracket {
  double mu;
  double T_low, T_high;
  bool fold;
};

// Bisection of a fold bracket. Each entry is a regular point approaching the
// fold from the solvable side.
struct FoldApproach {
  double T;
  double det;
  double min_alpha;  // min |alpha_k|
  double cusp_margin;
  double max_curvature;
};
std::vector<FoldApproach> refine_fold(double p, double q, const DetBracket& bracket, int bisections);

struct BifurcationScan {
  std::vector<ScanPoint> points;  // mu-major, T-minor
  std::vector<DetBracket> brackets;
};

// Grid scan at fixed (p, q). Points are independent and run in parallel;
// the result order does not depend on scheduling.
BifurcationScan bifurcation_scan(double p, double q, const std::vector<double>& mus, const std::vector<double>& Ts,
                                 unsigned threads = 0);

}  // namespace lgrowth
