#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lgrowth {

using Complex = std::complex<double>;

// A plane point is a finite complex number; helpers below reject NaN/Inf.
using PlanePoint = Complex;

// Closed, positively oriented curve sampled uniformly in a periodic parameter.
// Construction validates finiteness, orientation, spacing uniformity (factor
// 10) and absence of self-intersections.
class Contour {
 public:
  explicit Contour(std::vector<Complex> samples);

  std::size_t size() const { return z_.size(); }
  const std::vector<Complex>& samples() const { return z_; }
  Complex operator[](std::size_t j) const { return z_[j]; }

  // dz/dt with t_j = 2 pi j / n, from the trigonometric interpolant.
  const std::vector<Complex>& tangent() const { return dz_; }

  double mean_spacing() const;
  // Average length of the two segments adjacent to sample j.
  double local_spacing(std::size_t j) const;
  double diameter() const;
  Complex centroid() const;

 private:
  std::vector<Complex> z_;
  std::vector<Complex> dz_;
};

// (1/2) * closed integral of Im(conj(z) dz) by the trapezoid rule on the
// spectral derivative. Accepts either orientation.
double signed_area(std::span<const Complex> samples);
double area(const Contour& c);

// closed integral of conj(xi) dxi / (z - xi). Throws ProximityError when z lies
// within 3 local sample spacings of the contour.
Complex cauchy_transform(const Contour& c, PlanePoint z);

// Distance from z to the nearest contour sample, and the sample index.
double nearest_sample_distance(const Contour& c, PlanePoint z, std::size_t* index = nullptr);

// Symmetric Hausdorff distance. Each directed distance projects onto the
// nearest polygon segment, then refines on the trigonometric interpolant.
double hausdorff_distance(const Contour& a, const Contour& b);

// Winding number of the sampled polygon around z (0 or +-1 for simple curves).
int winding_number(std::span<const Complex> samples, PlanePoint z);

// Largest |curvature| of the trigonometric interpolant at the samples.
double max_curvature(const Contour& c);

// True when any two non-adjacent polygon segments cross.
bool has_self_intersection(std::span<const Complex> samples);

std::vector<Complex> reversed(std::span<const Complex> samples);

// CSV with header "x,y", 17 significant digits, no closing duplicate row.
void write_contour_csv(const Contour& c, std::ostream& out);
void write_contour_csv(const Contour& c, const std::string& path);
Contour read_contour_csv(std::istream& in);
Contour read_contour_csv(const std::string& path);

}  // namespace lgrowth
