#pragma once

#include <optional>
#include <vector>

#include "lgrowth/geometry.hpp"
#include "lgrowth/polynomial.hpp"

namespace lgrowth {

// R(s, z) = sum_{l,k <= d} A_{lk} s^l z^k with A_{lk} = conj(A_{kl}). Only the
// lower triangle is stored and the diagonal is real, so Hermiticity holds by
// construction. The real section is F(z) = R(conj z, z), a real polynomial
// in (x, y).
class HermitianCurve {
 public:
  explicit HermitianCurve(int degree);

  int degree() const { return d_; }
  Complex at(int l, int k) const;
  // Sets A_{lk} (and thereby A_{kl}); diagonal entries must be real.
  void set(int l, int k, Complex value);

  Complex evaluate(Complex s, Complex z) const;
  Complex d_ds(Complex s, Complex z) const;
  Complex d_dz(Complex s, Complex z) const;

  double real_section(Complex z) const;
  // F_x + i F_y.
  Complex real_section_gradient(Complex z) const;
  // F(x, 0) as a polynomial in x.
  Polynomial real_axis_polynomial() const;

 private:
  Complex dense(int l, int k) const { return dense_[static_cast<std::size_t>(l * (d_ + 1) + k)]; }

  int d_;
  std::vector<Complex> lower_;  // row-major lower triangle, l >= k
  std::vector<Complex> dense_;  // full matrix view of lower_, kept in sync by set()
};

// |z - center|^2 = R^2 written as a Hermitian curve of degree 1.
HermitianCurve disk_curve(Complex center, double radius);

struct TraceOptions {
  double step = 0.0;           // arc-length step; 0 selects 1e-3 * scale
  double scale = 0.0;          // curve length scale; 0 selects 1 + |seed|
  std::size_t max_steps = 200000;
};

// Closed component of the real section through (a point near) the seed,
// sampled uniformly in pseudo-arclength and oriented counterclockwise.
Contour trace_component(const HermitianCurve& curve, Complex seed, const TraceOptions& options = {});

// Components through each seed, skipping seeds that lie on a component
// already traced.
std::vector<Contour> trace_real_section(const HermitianCurve& curve, const std::vector<Complex>& seeds,
                                        const TraceOptions& options = {});

// The one-pole family: S has simple poles at p (sheet 1) and q, with
// S ~ mu/(p - z), nu/(q - z).
struct CurveN1 {
  Complex p, q, mu, nu;
  Complex b, c, d, e;  // c is real
  std::optional<double> h;
  // Filled once the double point is known.
  Polynomial P4;
  Complex E1 = 0.0, E2 = 0.0, E3 = 0.0;
  int q_pole_sheet = 0;  // sheet on which S has its pole at q

  bool solved() const { return h.has_value() && q_pole_sheet != 0; }
  double scale() const;
  HermitianCurve hermitian() const;  // requires h
};

CurveN1 build_curve(Complex p, Complex q, Complex mu, Complex nu);

// Discriminant of the curve as a quadratic in S, normalised to be monic.
Polynomial quartic_from_curve(const CurveN1& c, double h);

struct TracedComponent {
  Contour contour;
  bool physical;
  double sheet1_residual;  // sup |S_1(z) - conj z| over the samples
};

struct DoublePointSolution {
  double h;
  Complex E3;
  Complex E1, E2;
  int q_pole_sheet;
  std::vector<TracedComponent> components;

  const Contour& physical_contour() const;
};

// Real-family double point search; see the implementation for the candidate
// filters. Throws an infeasible error when no candidate survives.
DoublePointSolution solve_double_point(const CurveN1& c);

// Traces the real-axis components of the real section of a solved curve and
// flags the ones on which S on sheet 1 equals conj(z). Empty when no
// real-axis crossing is physical.
std::vector<TracedComponent> classify_real_section(const CurveN1& solved);

// Copy of the curve with h, P4, branch points and the q-pole sheet filled in.
CurveN1 with_double_point(const CurveN1& c, const DoublePointSolution& s);

// The sheet on which S has its pole at q, for given branch data.
int pole_sheet_at_q(const CurveN1& c, Complex E1, Complex E2, Complex E3);

// Fills h, P4, E3 and the q-pole sheet from the two simple branch points
// (h from P4(E1) = 0, E3 from the remaining square factor).
CurveN1 complete_from_branch_points(const CurveN1& c, Complex E1, Complex E2);

// sqrt((z - E1)(z - E2)) with the cut on the straight segment [E1, E2];
// sheet 1 behaves like +z at infinity, sheet 2 like -z.
Complex sqrt_p2(Complex z, Complex E1, Complex E2, int sheet);

// True when z lies on the segment [E1, E2] within a relative 1e-14.
bool on_cut(Complex z, Complex E1, Complex E2);

// S on the chosen sheet from the explicit quadratic-root formula.
Complex schwarz_two_sheeted(const CurveN1& c, Complex z, int sheet);

}  // namespace lgrowth
