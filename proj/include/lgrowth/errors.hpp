#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lgrowth {

// Error categories shared by every module. The numeric values are mirrored by
// lg_status in the C header.
enum class ErrorCode {
  invalid_input = 1,
  domain = 2,
  cusp = 3,
  no_convergence = 4,
  bifurcation = 5,
  infeasible = 6,
  io = 7,
  geometry = 8,
  internal = 9,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Evaluation point closer to a contour than the quadrature allows.
class ProximityError : public Error {
 public:
  ProximityError(double distance, double limit);
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

// Fourier fit residual above the requested tolerance.
class FitError : public Error {
 public:
  FitError(double residual, double tolerance);
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Univalence margin lost: |f'| on the unit circle fell below the threshold.
class CuspError : public Error {
 public:
  CuspError(double margin, double at_time, const std::string& detail);
  double margin() const noexcept { return margin_; }
  double at_time() const noexcept { return at_time_; }

 private:
  double margin_;
  double at_time_;
};

// Iterative solver failed; carries the best iterate it reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::complex<double> last_iterate);
  std::complex<double> last_iterate() const noexcept { return last_; }

 private:
  std::complex<double> last_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

void require_finite(double x, const char* what);
void require_finite(std::complex<double> z, const char* what);

}  // namespace lgrowth
