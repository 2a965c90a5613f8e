#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

double RationalMap::p() const { return r / c + a + b * c / (1.0 - c * c); }
double RationalMap::q() const { return a - b / c; }
double RationalMap::mu() const {
  const double d = 1.0 / c - c;
  return b * (r - b / (d * d)) / (c * c);
}
double RationalMap::T() const {
  const double d = 1.0 - c * c;
  return r * r - b * b / (d * d);
}

namespace {
Eigen::Vector4d params(const Eigen::Vector4d& x) {
  const RationalMap m{x[0], x[1], x[2], x[3]};
  return {m.p(), m.q(), m.mu(), m.T()};
}
}  // namespace

RationalMap rational_map_for(double p, double q, double mu, double T) {
  const double r0 = std::sqrt(T);
  const double c0 = r0 / (p - q);
  Eigen::Vector4d x(r0, q, mu * c0 * c0 / r0, c0);
  const Eigen::Vector4d target(p, q, mu, T);
  for (int it = 0; it < 100; ++it) {
    const Eigen::Vector4d f = params(x) - target;
    if (f.cwiseAbs().maxCoeff() < 1e-15 * (1.0 + target.cwiseAbs().maxCoeff())) break;
    Eigen::Matrix4d J;
    for (int k = 0; k < 4; ++k) {
      const double h = 1e-7 * (1.0 + std::abs(x[k]));
      Eigen::Vector4d xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      J.col(k) = (params(xp) - params(xm)) / (2 * h);
    }
    x -= J.partialPivLu().solve(f);
  }
  if ((params(x) - target).cwiseAbs().maxCoeff() > 1e-12) throw std::runtime_error("rational map oracle diverged");
  return {x[0], x[1], x[2], x[3]};
}

std::array<double, 2> rational_branch_points(const RationalMap& m) {
  // d/dw [r / w + a + b w / (1 - c w)] = 0  <=>  (r c^2 - b) w^2 - 2 r c w + r = 0.
  const double A = m.r * m.c * m.c - m.b, B = -2.0 * m.r * m.c, C = m.r;
  const Complex disc = std::sqrt(Complex(B * B - 4 * A * C));
  std::vector<double> E;
  for (Complex w : {(-B + disc) / (2 * A), (-B - disc) / (2 * A)}) {
    if (std::abs(w) <= 1.0) continue;
    const Complex S = m.r / w + m.a + m.b * w / (1.0 - m.c * w);
    E.push_back(std::conj(S).real());
  }
  if (E.size() != 2) throw std::runtime_error("rational map has no exterior critical pair");
  std::sort(E.begin(), E.end());
  return {E[0], E[1]};
}

Complex rational_inverse(const RationalMap& m, Complex z) {
  // (r w + a - z)(w - c) + b = 0.
  const Complex A = m.r, B = m.a - z - m.r * m.c, C = m.b - m.c * (m.a - z);
  const Complex disc = std::sqrt(B * B - 4.0 * A * C);
  const Complex w1 = (-B + disc) / (2.0 * A), w2 = (-B - disc) / (2.0 * A);
  return std::abs(w1) > std::abs(w2) ? w1 : w2;
}

Complex rational_schwarz(const RationalMap& m, Complex z) {
  const Complex w = rational_inverse(m, z);
  return m.r / w + m.a + m.b * w / (1.0 - m.c * w);
}

std::vector<Complex> rational_boundary(const RationalMap& m, std::size_t n) {
  std::vector<Complex> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = m.value(std::polar(1.0, 2.0 * std::numbers::pi * j / n));
  return z;
}

double ellipse_radius(double r0, double ratio, double T) {
  const double s = 1.0 - ratio * ratio;
  return std::sqrt(r0 * r0 + T / s);
}

}  // namespace oracle
