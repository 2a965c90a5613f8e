#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "lgrowth/geometry.hpp"

namespace lgrowth {

// Simple-pole term coefficient / (w - location) with |location| < 1.
struct PoleTerm {
  Complex coefficient;
  Complex location;
};

// Exterior map f(w) = r w + a0 + sum_k u_k w^{-k} + sum_j c_j / (w - w_j),
// defined on |w| >= 1. The optional pole terms give exact one-pole (rational)
// domains; evolution and fitting use the pure Laurent part only.
class LaurentMap {
 public:
  LaurentMap(double r, Complex a0, std::vector<Complex> u = {}, std::vector<PoleTerm> poles = {});

  double r() const { return r_; }
  Complex a0() const { return a0_; }
  const std::vector<Complex>& u() const { return u_; }
  std::size_t order() const { return u_.size(); }
  const std::vector<PoleTerm>& poles() const { return poles_; }
  bool is_polynomial_in_inverse() const { return poles_.empty(); }

  // f and its derivatives at any w where the expression is finite (w != 0 when
  // K > 0, w != pole locations). Used by continuation formulas.
  Complex value(Complex w) const;
  Complex derivative(Complex w) const;
  Complex second_derivative(Complex w) const;

  // Map with every coefficient conjugated: fbar(w) = conj(f(conj(w))).
  LaurentMap conjugate() const;
  LaurentMap translated(Complex shift) const;

 private:
  double r_;
  Complex a0_;
  std::vector<Complex> u_;
  std::vector<PoleTerm> poles_;
};

// Checked evaluation on the closed exterior |w| >= 1 (domain error otherwise).
Complex evaluate(const LaurentMap& m, Complex w);
Complex evaluate_derivative(const LaurentMap& m, Complex w);

// f(e^{i phi_j}) and f'(e^{i phi_j}) at phi_j = 2 pi j / n.
std::vector<Complex> boundary_values(const LaurentMap& m, std::size_t n);
std::vector<Complex> boundary_derivatives(const LaurentMap& m, std::size_t n);

// Smallest |f'| on n uniform unit-circle samples.
double univalence_margin(const LaurentMap& m, std::size_t n);

// |u_K| < 1e-10 r (always true without Laurent tail).
bool tail_converged(const LaurentMap& m);

// Samples f(e^{2 pi i j/n}). n must be a power of two with n >= 4K. Throws
// CuspError when |f'| vanishes on 64K circle samples or the image overlaps.
Contour boundary_contour(const LaurentMap& m, std::size_t n);

struct MapFit {
  LaurentMap map;
  double residual;  // max sample deviation of the truncated series, relative to r
};

// Discrete Fourier projection onto modes w^1..w^{-K}; gauge r > 0. Throws
// FitError when the residual exceeds tolerance.
MapFit fit_map(const Contour& c, std::size_t order, double tolerance = 1e-8);

struct MomentVector {
  double t0;               // area / pi
  std::vector<Complex> tk;  // t_1 .. t_count
};

// t_k = (1 / (2 pi i k)) closed integral of z^{-k} conj(z) dz. The origin must
// lie inside the droplet.
MomentVector harmonic_moments(const LaurentMap& m, std::size_t count, std::size_t samples = 1024);

// pi (r^2 - sum k |u_k|^2); requires a map without pole terms.
double area_from_coefficients(const LaurentMap& m);

// Area of the droplet by quadrature of the exact boundary derivative.
double map_area(const LaurentMap& m, std::size_t samples = 1024);

// Newton inversion of z = f(w) with damping. Returns nullopt on failure.
std::optional<Complex> newton_invert(const LaurentMap& m, Complex z, Complex seed, int max_iter = 100);

// Inverse map with seeding from boundary samples. exterior() returns the
// unique preimage in |w| >= 1 and throws a domain error for droplet points;
// continued() also accepts points inside the droplet near the boundary,
// choosing the preimage that continues across the unit circle.
class MapInverter {
 public:
  explicit MapInverter(const LaurentMap& m, std::size_t samples = 512);

  const LaurentMap& map() const { return map_; }
  bool inside_droplet(Complex z) const;
  Complex exterior(Complex z, std::optional<Complex> seed = std::nullopt) const;
  Complex continued(Complex z) const;

 private:
  Complex boundary_seed(Complex z, bool inward) const;

  LaurentMap map_;
  std::vector<Complex> boundary_;
  std::vector<Complex> boundary_deriv_;
};

}  // namespace lgrowth
