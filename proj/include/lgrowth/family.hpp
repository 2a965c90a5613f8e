#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgrowth/geometry.hpp"

namespace lgrowth {

// One grid point of the real one-pole family at fixed (p, q). Numeric fields
// are NaN when the status is not "solved".
struct FamilyRow {
  double mu = 0.0;
  double T = 0.0;
  std::string status;  // solved | infeasible | bifurcation | no_convergence | failed
  double E1, E2, h, area_over_pi, residual;
  std::string message;             // error text for unsolved rows
  std::optional<Contour> contour;  // physical boundary, when requested

  FamilyRow();
};

struct FamilyOptions {
  unsigned threads = 0;  // 0 selects the hardware concurrency
  bool keep_contours = false;
};

// Hodograph solve, curve reconstruction and boundary trace for one point.
// Never throws for numerical failures; they are encoded in the status.
FamilyRow evaluate_family_point(double p, double q, double mu, double T, bool keep_contour = false);

// Rows in mu-major, T-minor order regardless of the worker schedule.
std::vector<FamilyRow> evaluate_family(double p, double q, const std::vector<double>& mus,
                                       const std::vector<double>& Ts, const FamilyOptions& options = {});

// Evenly spaced values from lo to hi inclusive (a single value when count = 1).
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace lgrowth
