#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "lgrowth/conformal.hpp"

namespace lgrowth {

// An analytic function given by callables. The derivative is optional; when
// missing, a central difference is used.
struct SchwarzFunction {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> derivative;

  Complex operator()(Complex z) const { return value(z); }
  Complex slope(Complex z, double h) const;
};

// Map-based continuation S(z) = fbar(1 / w(z)) of conj(z) off the boundary.
class SchwarzEvaluator {
 public:
  explicit SchwarzEvaluator(const LaurentMap& m, std::size_t samples = 1024);

  const LaurentMap& map() const { return inverter_.map(); }
  const Contour& boundary() const { return boundary_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  // sup |S(z_j) - conj(z_j)| over the boundary samples.
  double on_contour_residual() const;

  SchwarzFunction as_function() const;

  // Images f(1 / conj(w_j)) of the map's pole terms: poles of S in the oil.
  std::vector<Complex> pole_hints() const;

 private:
  MapInverter inverter_;
  LaurentMap conjugate_;
  Contour boundary_;
};

struct Pole {
  Complex location;
  int order;
  Complex residue;
};

struct PoleData {
  std::vector<Pole> poles;
};

// (1 / 2 pi i) closed integral of S around a circle, trapezoid rule.
Complex residue_on_circle(const SchwarzFunction& s, Complex center, double radius, int points = 64);

// Newton on 1/S from each hint, then residue by small-circle integration at
// radius 1e-2 of the distance to the boundary, cross-checked at a tenth of it.
PoleData extract_poles(const SchwarzFunction& s, const Contour& boundary, const std::vector<Complex>& hints);
PoleData extract_poles(const SchwarzEvaluator& s, const std::vector<Complex>& hints = {});

// Fit of the Cauchy transform inside the droplet, C(z) = alpha + beta/(z - p):
// recovers the location and residue R = i beta / (2 pi) of a single pole of S
// in the oil domain from three interior evaluations.
struct CauchyPoleFit {
  Complex location;
  Complex residue;
  Complex constant;
};
CauchyPoleFit cauchy_pole_fit(const Contour& c, const std::array<Complex, 3>& interior_points);

// Three well-separated points inside the droplet, away from the boundary.
std::array<Complex, 3> interior_probe_points(const Contour& c);

// One member of a one-parameter family of Schwarz functions.
struct SchwarzSource {
  SchwarzFunction function;
  Contour boundary;
};

struct ResidueFlowEntry {
  Complex location;
  Complex residue;
  Complex location_rate;
  Complex residue_rate;
};

struct ResidueFlowReport {
  std::vector<ResidueFlowEntry> poles;
  // Largest |location rate| and |residue rate - expected| where expected is
  // -1 for the pump's own pole and 0 otherwise.
  double max_location_drift = 0.0;
  double max_residue_deviation = 0.0;
};

// Central differences in the family parameter t of every pole's location and
// residue. pump_pole is the index (into hints) of the pole sitting at the
// pump whose time is being varied, if any.
ResidueFlowReport residue_flow_check(const std::function<SchwarzSource(double)>& family, double t, double delta,
                                     const std::vector<Complex>& hints, std::optional<std::size_t> pump_pole);

}  // namespace lgrowth
