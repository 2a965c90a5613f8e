#include "lgrowth/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lgrowth/errors.hpp"
#include "lgrowth/hodograph.hpp"
#include "parallel.hpp"

namespace lgrowth {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::infeasible:
    case ErrorCode::invalid_input:
      return "infeasible";
    case ErrorCode::bifurcation:
    case ErrorCode::cusp:
      return "bifurcation";
    case ErrorCode::no_convergence:
      return "no_convergence";
    default:
      return "failed";
  }
}
}  // namespace

FamilyRow::FamilyRow() : E1(kNaN), E2(kNaN), h(kNaN), area_over_pi(kNaN), residual(kNaN) {}

FamilyRow evaluate_family_point(double p, double q, double mu, double T, bool keep_contour) {
  FamilyRow row;
  row.mu = mu;
  row.T = T;
  try {
    const HodographParams hp{p, q, mu, T};
    const HodographSolution sol = solve_hodograph(hp);
    const CurveN1 curve = curve_from_hodograph(hp, sol.branch);
    const auto comps = classify_real_section(curve);
    const auto physical = std::count_if(comps.begin(), comps.end(), [](const TracedComponent& t) { return t.physical; });
    if (physical != 1)
      fail(ErrorCode::geometry, "expected one physical boundary component, found " + std::to_string(physical));
    const auto it = std::find_if(comps.begin(), comps.end(), [](const TracedComponent& t) { return t.physical; });
    row.E1 = sol.branch.E1;
    row.E2 = sol.branch.E2;
    row.h = *curve.h;
    row.residual = sol.residual;
    row.area_over_pi = area(it->contour) / std::numbers::pi;
    if (keep_contour) row.contour = it->contour;
    row.status = "solved";
  } catch (const Error& e) {
    row = FamilyRow();
    row.mu = mu;
    row.T = T;
    row.status = status_for(e.code());
    row.message = e.what();
  } catch (const std::exception& e) {
    row = FamilyRow();
    row.mu = mu;
    row.T = T;
    row.status = "failed";
    row.message = e.what();
  }
  return row;
}

std::vector<FamilyRow> evaluate_family(double p, double q, const std::vector<double>& mus,
                                       const std::vector<double>& Ts, const FamilyOptions& options) {
  std::vector<FamilyRow> rows(mus.size() * Ts.size());
  detail::parallel_for(rows.size(), options.threads, [&](std::size_t i) {
    rows[i] = evaluate_family_point(p, q, mus[i / Ts.size()], Ts[i % Ts.size()], options.keep_contours);
  });
  return rows;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) fail(ErrorCode::invalid_input, "grid needs at least one value");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = hi;
  return out;
}

}  // namespace lgrowth
