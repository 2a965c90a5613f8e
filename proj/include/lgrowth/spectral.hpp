#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lgrowth {

using Complex = std::complex<double>;

// Frequency of FFT bin k for n samples, mapped to (-n/2, n/2].
int signed_frequency(std::size_t k, std::size_t n);

// c_k with samples z_j = sum_k c_k exp(2 pi i j k / n) (FFT ordering).
std::vector<Complex> fourier_coefficients(std::span<const Complex> samples);
std::vector<Complex> fourier_synthesis(std::span<const Complex> coefficients);

// Derivative with respect to the angle t_j = 2 pi j / n of the trigonometric
// interpolant through the samples. The Nyquist mode is dropped for even n.
std::vector<Complex> spectral_derivative(std::span<const Complex> samples);

// Trigonometric interpolant of periodic samples, parameter t in [0, 2 pi).
class TrigInterpolant {
 public:
  explicit TrigInterpolant(std::span<const Complex> samples);

  struct Jet {
    Complex value;
    Complex first;
    Complex second;
  };

  std::size_t size() const { return n_; }
  Jet jet(double t) const;
  Complex value(double t) const { return jet(t).value; }
  Complex derivative(double t) const { return jet(t).first; }
  Complex second_derivative(double t) const { return jet(t).second; }

 private:
  std::size_t n_ = 0;
  // Coefficients of exp(+ikt) and exp(-ikt), k = 0..M.
  std::vector<Complex> pos_;
  std::vector<Complex> neg_;
};

}  // namespace lgrowth
