#include "lgrowth/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "lgrowth/errors.hpp"

namespace lgrowth {

Polynomial::Polynomial(std::vector<Complex> coefficients) : c_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::from_roots(const std::vector<Complex>& roots) {
  Polynomial p(std::vector<Complex>{1.0});
  for (Complex r : roots) p = p * Polynomial(std::vector<Complex>{-r, 1.0});
  return p;
}

void Polynomial::trim() {
  while (c_.size() > 1 && c_.back() == Complex(0.0)) c_.pop_back();
}

int Polynomial::degree() const {
  if (c_.empty() || (c_.size() == 1 && c_[0] == Complex(0.0))) return -1;
  return static_cast<int>(c_.size()) - 1;
}

Complex Polynomial::coefficient(int k) const {
  return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Complex(0.0);
}

Complex Polynomial::leading() const { return c_.empty() ? Complex(0.0) : c_.back(); }

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial(std::vector<Complex>{0.0});
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Complex> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
  for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Complex(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return Polynomial(std::vector<Complex>{0.0});
  std::vector<Complex> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(Complex s) const {
  std::vector<Complex> r(c_);
  for (auto& x : r) x *= s;
  return Polynomial(std::move(r));
}

std::vector<Complex> Polynomial::roots() const {
  const int n = degree();
  if (n < 1) return {};
  const Complex lead = leading();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c_[i] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::no_convergence, "polynomial root solver failed");

  const Polynomial dp = derivative();
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) {
    Complex z = solver.eigenvalues()[i];
    for (int it = 0; it < 4; ++it) {
      const Complex d = dp(z);
      if (std::abs(d) == 0.0) break;
      const Complex step = (*this)(z) / d;
      // Newton is only trusted while it refines; near multiple roots it can wander.
      if (!(std::abs(step) < 1e-6 * (1.0 + std::abs(z)))) break;
      const Complex candidate = z - step;
      if (!(std::abs((*this)(candidate)) < std::abs((*this)(z)))) break;
      z = candidate;
    }
    out[i] = z;
  }
  return out;
}

}  // namespace lgrowth
