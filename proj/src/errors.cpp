#include "lgrowth/errors.hpp"

#include <cmath>
#include <cstdio>

namespace lgrowth {

namespace {
std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}
}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::domain: return "domain";
    case ErrorCode::cusp: return "cusp";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::bifurcation: return "bifurcation";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::io: return "io";
    case ErrorCode::geometry: return "geometry";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ProximityError::ProximityError(double distance, double limit)
    : Error(ErrorCode::geometry, "evaluation point at distance " + fmt_double(distance) +
                                     " from the contour, closer than " + fmt_double(limit)),
      distance_(distance) {}

FitError::FitError(double residual, double tolerance)
    : Error(ErrorCode::no_convergence, "map fit residual " + fmt_double(residual) +
                                           " exceeds tolerance " + fmt_double(tolerance)),
      residual_(residual) {}

CuspError::CuspError(double margin, double at_time, const std::string& detail)
    : Error(ErrorCode::cusp, "min|f'| on the unit circle = " + fmt_double(margin) +
                                 " at T_total = " + fmt_double(at_time) +
                                 (detail.empty() ? "" : " (" + detail + ")")),
      margin_(margin),
      at_time_(at_time) {}

ConvergenceError::ConvergenceError(const std::string& message, std::complex<double> last_iterate)
    : Error(ErrorCode::no_convergence, message + " (last iterate " + fmt_double(last_iterate.real()) +
                                           (last_iterate.imag() < 0 ? "" : "+") +
                                           fmt_double(last_iterate.imag()) + "i)"),
      last_(last_iterate) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) fail(ErrorCode::invalid_input, std::string(what) + " is not finite");
}

void require_finite(std::complex<double> z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    fail(ErrorCode::invalid_input, std::string(what) + " is not finite");
}

}  // namespace lgrowth
