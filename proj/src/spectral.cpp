#include "lgrowth/spectral.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <numbers>

namespace lgrowth {

namespace {
Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}
}  // namespace

int signed_frequency(std::size_t k, std::size_t n) {
  return (2 * k <= n) ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

std::vector<Complex> fourier_coefficients(std::span<const Complex> samples) {
  // Eigen's forward transform uses exp(-2 pi i jk/n) without scaling.
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out;
  fft_engine().fwd(out, in);
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<Complex> fourier_synthesis(std::span<const Complex> coefficients) {
  std::vector<Complex> in(coefficients.begin(), coefficients.end());
  std::vector<Complex> out;
  fft_engine().inv(out, in);
  const double n = static_cast<double>(coefficients.size());
  for (auto& z : out) z *= n;
  return out;
}

std::vector<Complex> spectral_derivative(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  auto c = fourier_coefficients(samples);
  for (std::size_t k = 0; k < n; ++k) {
    const int f = signed_frequency(k, n);
    if (n % 2 == 0 && 2 * k == n) {
      c[k] = 0.0;
    } else {
      c[k] *= Complex(0.0, static_cast<double>(f));
    }
  }
  return fourier_synthesis(c);
}

TrigInterpolant::TrigInterpolant(std::span<const Complex> samples) : n_(samples.size()) {
  const auto c = fourier_coefficients(samples);
  const std::size_t m = n_ / 2;
  pos_.assign(m + 1, 0.0);
  neg_.assign(m + 1, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    if (n_ % 2 == 0 && 2 * k == n_) {
      // Split the Nyquist mode symmetrically so real data interpolate to a
      // real function.
      pos_[m] += 0.5 * c[k];
      neg_[m] += 0.5 * c[k];
      continue;
    }
    const int f = signed_frequency(k, n_);
    if (f >= 0) {
      pos_[f] += c[k];
    } else {
      neg_[-f] += c[k];
    }
  }
}

TrigInterpolant::Jet TrigInterpolant::jet(double t) const {
  const Complex e = std::polar(1.0, t);
  Complex p = 1.0;
  Jet out{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < pos_.size(); ++k) {
    const double kk = static_cast<double>(k);
    const Complex plus = pos_[k] * p;
    const Complex minus = (k == 0) ? Complex(0.0) : neg_[k] * std::conj(p);
    out.value += plus + minus;
    out.first += Complex(0.0, kk) * (plus - minus);
    out.second -= kk * kk * (plus + minus);
    p *= e;
  }
  return out;
}

}  // namespace lgrowth
