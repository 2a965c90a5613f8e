#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lgrowth/conformal.hpp"

namespace lgrowth {

// Oil sink at a finite point of the oil domain, or at infinity.
struct PumpSpec {
  std::string label;
  std::optional<PlanePoint> location;  // empty means infinity

  static PumpSpec at_infinity(std::string label = "inf");
  static PumpSpec at(std::string label, PlanePoint z);
  bool is_infinity() const { return !location.has_value(); }
};

// dT-derivatives of the map coefficients.
struct MapRate {
  double dr = 0.0;
  Complex da0 = 0.0;
  std::vector<Complex> du;
};

struct EvolutionOptions {
  std::size_t order = 32;         // Laurent truncation K
  std::size_t samples = 512;      // circle samples for the velocity transform
  double max_step = 1e-2;         // RK4 step cap in T
  double cusp_threshold = 1e-6;   // smallest admissible |f'| on |w| = 1
  int max_halvings = 8;           // retries on a univalence violation
  // Coefficients with |u_k| < filter_level * r are zeroed after every
  // substep. Zero surface tension amplifies mode k at a rate ~k/(2r^2), so
  // roundoff in unused high modes would otherwise grow without bound.
  double filter_level = 1e-14;
};

struct StepDiagnostics {
  double T_total;
  double univalence_margin;
  double tail_norm;  // |u_K| / r
  bool tail_converged;
  std::size_t substeps;
};

// Immutable evolution state: the current map plus accumulated pump times.
class EvolutionState {
 public:
  explicit EvolutionState(const LaurentMap& initial, EvolutionOptions options = {});

  const LaurentMap& map() const { return map_; }
  const EvolutionOptions& options() const { return options_; }
  const std::vector<std::pair<std::string, double>>& times() const { return times_; }
  const std::vector<StepDiagnostics>& log() const { return log_; }
  double time(const std::string& label) const;
  double total_time() const;

  EvolutionState advanced(LaurentMap map, const std::string& label, double dT, StepDiagnostics diag) const;

 private:
  LaurentMap map_;
  EvolutionOptions options_;
  std::vector<std::pair<std::string, double>> times_;
  std::vector<StepDiagnostics> log_;
};

// Sink at infinity: df/dT = w f'(w) V(w) with Re V = 1/(2 |f'|^2) on |w| = 1.
MapRate pg_velocity(const LaurentMap& m, std::size_t samples = 512);

// Same construction with boundary data weighted by the exterior Poisson
// kernel of w(a) for a finite pump. pump_w is the preimage of the pump.
MapRate pump_rate(const LaurentMap& m, std::optional<Complex> pump_w, std::size_t samples);

double green_function(const LaurentMap& m, PlanePoint a, PlanePoint z);

// Normal velocity V_n at the circle samples phi_j = 2 pi j / n.
std::vector<double> pump_velocity_field(const LaurentMap& m, const PumpSpec& pump, std::size_t samples);

// Throws unless a finite pump lies outside the droplet by more than three
// boundary sample spacings.
void validate_pump(const LaurentMap& m, const PumpSpec& pump, std::size_t samples);

// RK4 in T over the pump's flow; dT = 0 returns the state unchanged.
EvolutionState step(const EvolutionState& s, const PumpSpec& pump, double dT);

struct CommutativityReport {
  double hausdorff;
  double moment_difference;  // NaN when the origin leaves the droplet
  LaurentMap a_then_b;
  LaurentMap b_then_a;
};

CommutativityReport commutativity_test(const EvolutionState& s, const PumpSpec& a, const PumpSpec& b,
                                       double dTA, double dTB, std::size_t contour_samples = 1024);

}  // namespace lgrowth
