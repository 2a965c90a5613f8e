#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lgrowth/conformal.hpp"
#include "lgrowth/errors.hpp"
#include "oracles.hpp"

using namespace lgrowth;
constexpr double kPi = std::numbers::pi;

TEST_CASE("Laurent map evaluation and derivatives") {
  const LaurentMap m(2.0, {0.5, 0.0}, {{0.3, 0.1}, {0.0, -0.05}});
  const Complex w(1.3, -0.4);
  const Complex expect = 2.0 * w + 0.5 + Complex(0.3, 0.1) / w + Complex(0.0, -0.05) / (w * w);
  CHECK(std::abs(m.value(w) - expect) < 1e-15);
  const double h = 1e-5;
  CHECK(std::abs(m.derivative(w) - (m.value(w + h) - m.value(w - h)) / (2 * h)) < 1e-9);
  CHECK_THROWS_AS(LaurentMap(0.0, 0.0), Error);
}

TEST_CASE("area from coefficients matches quadrature") {
  const LaurentMap m(1.0, 0.0, {{0.2, 0.0}, {0.0, 0.05}, {0.01, 0.01}});
  const double expect = kPi * (1.0 - 0.04 - 2 * 0.0025 - 3 * 0.0002);
  CHECK(area_from_coefficients(m) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(map_area(m) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(area(boundary_contour(m, 256)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("harmonic moments of an ellipse") {
  // z = w + u/w and conj(z) = 1/w + u w on |w| = 1; the residue at infinity
  // leaves t_2 = u/2 as the only nonzero moment with k >= 1.
  const LaurentMap m(1.0, 0.0, {{0.3, 0.0}});
  const auto mv = harmonic_moments(m, 4, 2048);
  CHECK(mv.t0 == doctest::Approx(0.91).epsilon(1e-12));
  CHECK(std::abs(mv.tk[0]) < 1e-13);
  CHECK(std::abs(mv.tk[1] - 0.15) < 1e-13);
  CHECK(std::abs(mv.tk[2]) < 1e-13);
  CHECK(std::abs(mv.tk[3]) < 1e-13);
}

TEST_CASE("univalence margin and cusp detection") {
  CHECK(univalence_margin(LaurentMap(1.0, 0.0), 64) == doctest::Approx(1.0));
  // f = w + w^{-2}/3 has f' = 1 - (2/3) w^{-3}.
  const LaurentMap lobed(1.0, 0.0, {0.0, 1.0 / 3.0});
  CHECK(univalence_margin(lobed, 1024) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // f = w + w^{-3}/3 has f' = 1 - w^{-4}, zero at the fourth roots of unity.
  const LaurentMap degenerate(1.0, 0.0, {0.0, 0.0, 1.0 / 3.0});
  CHECK_THROWS_AS(boundary_contour(degenerate, 1024), CuspError);
}

TEST_CASE("fit_map recovers the coefficients of a sampled boundary") {
  const LaurentMap m(1.5, {0.1, -0.2}, {{0.2, 0.1}, {0.0, 0.03}, {-0.01, 0.0}});
  const auto fit = fit_map(boundary_contour(m, 256), 8);
  CHECK(fit.residual < 1e-12);
  CHECK(fit.map.r() == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(std::abs(fit.map.a0() - m.a0()) < 1e-13);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(fit.map.u()[k] - m.u()[k]) < 1e-13);
  CHECK_THROWS_AS(fit_map(boundary_contour(m, 256), 1, 1e-8), FitError);
}

TEST_CASE("inverse map against the closed-form rational inverse") {
  const auto rm = oracle::rational_map_for(2.0, -3.0, 0.1, 1.0);
  const LaurentMap m(rm.r, rm.a, {}, {{rm.b, rm.c}});
  const MapInverter inv(m);
  for (Complex z : {Complex(-3.0, 1.5), Complex(-1.0, 0.2), Complex(1.0, -2.0)}) {
    CHECK(std::abs(inv.exterior(z) - oracle::rational_inverse(rm, z)) < 1e-11);
  }
  CHECK(inv.inside_droplet(rm.q()));
  CHECK_THROWS_AS(inv.exterior(rm.q()), Error);
}
