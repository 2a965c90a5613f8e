#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lgrowth/curve_n1.hpp"
#include "lgrowth/errors.hpp"
#include "oracles.hpp"

using namespace lgrowth;
constexpr double kPi = std::numbers::pi;

TEST_CASE("Hermitian curve of a disk") {
  const HermitianCurve d = disk_curve({1.0, -0.5}, 2.0);
  CHECK(std::abs(d.real_section({3.0, -0.5})) < 1e-14);
  CHECK(d.real_section({1.0, -0.5}) == doctest::Approx(-4.0));
  // A_{lk} = conj(A_{kl}).
  CHECK(std::abs(d.at(0, 1) - std::conj(d.at(1, 0))) == 0.0);
  const Contour c = trace_component(d, {3.1, -0.5});
  CHECK(area(c) / kPi == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(has_self_intersection(c.samples()) == false);
}

TEST_CASE("coefficients of the one-pole curve") {
  const CurveN1 c = build_curve(2.0, -3.0, 0.1, -0.9);
  CHECK(std::abs(c.b - 1.0) < 1e-15);
  CHECK(std::abs(c.c - 0.2) < 1e-15);
  CHECK(std::abs(c.d + 6.0) < 1e-15);
  CHECK(std::abs(c.e + 3.9) < 1e-14);
  CHECK_FALSE(c.h.has_value());

  const CurveN1 sym = build_curve(1.0, -1.0, 0.2, -0.2);
  CHECK(std::abs(sym.b) < 1e-15);
  CHECK(std::abs(sym.c) < 1e-15);
  CHECK(std::abs(sym.d + 1.0) < 1e-15);
  CHECK(std::abs(sym.e - 0.4) < 1e-15);

  const Complex p(1.0, 0.5), q(-2.0, 0.3), mu(0.1, 0.2), nu(-0.5, -0.2);
  const CurveN1 a = build_curve(p, q, mu, nu), b = build_curve(std::conj(p), std::conj(q), std::conj(mu), std::conj(nu));
  CHECK(std::abs(b.b - std::conj(a.b)) < 1e-15);
  CHECK(std::abs(b.d - std::conj(a.d)) < 1e-15);
  CHECK(std::abs(b.e - std::conj(a.e)) < 1e-14);
}

TEST_CASE("quartic is monic") {
  const CurveN1 c = build_curve(2.0, -3.0, 0.1, -0.9);
  const Polynomial P4 = quartic_from_curve(c, 7.0);
  CHECK(P4.degree() == 4);
  CHECK(std::abs(P4.leading() - 1.0) < 1e-14);
}

TEST_CASE("sqrt(P2) branches and the straight cut") {
  const Complex E1 = -2.0, E2 = 1.0;
  const Complex far(1e6, 3e5);
  CHECK(std::abs(sqrt_p2(far, E1, E2, 1) / far - 1.0) < 1e-5);
  CHECK(std::abs(sqrt_p2(far, E1, E2, 2) / far + 1.0) < 1e-5);
  const Complex z(0.3, 0.7);
  CHECK(std::abs(sqrt_p2(z, E1, E2, 1) * sqrt_p2(z, E1, E2, 1) - (z - E1) * (z - E2)) < 1e-14);
  CHECK(on_cut(-0.5, E1, E2));
  CHECK_FALSE(on_cut({-0.5, 1e-6}, E1, E2));
  // Continuous across the real axis outside the cut, jumps across it.
  CHECK(std::abs(sqrt_p2({2.0, 1e-12}, E1, E2, 1) - sqrt_p2({2.0, -1e-12}, E1, E2, 1)) < 1e-10);
  CHECK(std::abs(sqrt_p2({0.0, 1e-12}, E1, E2, 1) + sqrt_p2({0.0, -1e-12}, E1, E2, 1)) < 1e-10);
}

TEST_CASE("double point of the real family against the rational-map oracle") {
  struct Case {
    double mu, T;
  };
  for (Case k : {Case{0.1, 1.0}, Case{0.3, 1.5}, Case{0.05, 2.0}}) {
    CAPTURE(k.mu);
    CAPTURE(k.T);
    const auto rm = oracle::rational_map_for(2.0, -3.0, k.mu, k.T);
    const auto E = oracle::rational_branch_points(rm);
    const CurveN1 c = build_curve(2.0, -3.0, k.mu, k.mu - k.T);
    const DoublePointSolution sol = solve_double_point(c);
    CHECK(std::abs(sol.E1 - E[0]) < 1e-9);
    CHECK(std::abs(sol.E2 - E[1]) < 1e-9);
    CHECK(sol.q_pole_sheet == 1);

    const Contour& boundary = sol.physical_contour();
    CHECK(area(boundary) / kPi == doctest::Approx(k.T).epsilon(1e-8));
    CHECK(hausdorff_distance(boundary, Contour(oracle::rational_boundary(rm, 512))) < 1e-7);

    const CurveN1 solved = with_double_point(c, sol);
    for (Complex z : {Complex(-3.0, 2.0), Complex(0.0, 1.0), Complex(1.0, -0.5)})
      CHECK(std::abs(schwarz_two_sheeted(solved, z, 1) - oracle::rational_schwarz(rm, z)) < 1e-9);
  }
}

TEST_CASE("completion from branch points reproduces the double-point data") {
  const CurveN1 c = build_curve(2.0, -3.0, 0.1, -0.9);
  const auto sol = solve_double_point(c);
  const CurveN1 full = complete_from_branch_points(c, sol.E1, sol.E2);
  CHECK(*full.h == doctest::Approx(sol.h).epsilon(1e-10));
  CHECK(std::abs(full.E3 - sol.E3) < 1e-8);
  CHECK(full.q_pole_sheet == 1);
  CHECK(pole_sheet_at_q(c, sol.E1, sol.E2, sol.E3) == 1);
  // P4 vanishes at every branch point and doubly at E3.
  const Polynomial P4 = quartic_from_curve(c, sol.h);
  for (Complex E : {sol.E1, sol.E2, sol.E3}) CHECK(std::abs(P4(E)) < 1e-8 * std::abs(P4.leading()) * 1e3);
  CHECK(std::abs(P4.derivative()(sol.E3)) < 1e-6);
}

TEST_CASE("classification keeps exactly one physical component") {
  const CurveN1 c = build_curve(2.0, -3.0, 0.2, -1.0);
  const CurveN1 solved = with_double_point(c, solve_double_point(c));
  const auto comps = classify_real_section(solved);
  const auto physical = std::count_if(comps.begin(), comps.end(), [](const TracedComponent& t) { return t.physical; });
  CHECK(physical == 1);
  for (const auto& t : comps)
    if (t.physical) CHECK(t.sheet1_residual < 1e-8);
}

TEST_CASE("evaluation errors") {
  const CurveN1 c = build_curve(2.0, -3.0, 0.1, -0.9);
  CHECK_THROWS_AS(schwarz_two_sheeted(c, 0.0, 1), Error);  // not solved yet
  const CurveN1 solved = with_double_point(c, solve_double_point(c));
  CHECK_THROWS_AS(schwarz_two_sheeted(solved, solved.p, 1), Error);
  CHECK_THROWS_AS(schwarz_two_sheeted(solved, 0.5 * (solved.E1 + solved.E2), 1), Error);
  CHECK_THROWS_AS(quartic_from_curve(build_curve(2.0, 2.0, 0.1, -0.9), 0.0), Error);
  CHECK_THROWS_AS(build_curve(2.0, -3.0, 0.0, -0.9), Error);
  CHECK_THROWS_AS(build_curve(2.0, -3.0, {0.1, 0.1}, -0.9), Error);
}
