#pragma once

#include <complex>
#include <vector>

namespace lgrowth {

using Complex = std::complex<double>;

// Dense complex polynomial, coefficients stored lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coefficients);

  static Polynomial from_roots(const std::vector<Complex>& roots);

  int degree() const;
  const std::vector<Complex>& coefficients() const { return c_; }
  Complex coefficient(int k) const;
  Complex leading() const;

  Complex operator()(Complex z) const;
  Polynomial derivative() const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(Complex s) const;

  // All complex roots: companion-matrix eigenvalues polished by Newton steps
  // on the original coefficients.
  std::vector<Complex> roots() const;

 private:
  void trim();
  std::vector<Complex> c_;
};

}  // namespace lgrowth
