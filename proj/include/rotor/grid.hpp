// Uniform periodic grid on the circle with spectral quadrature helpers.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace rotor {

// Equispaced nodes theta_i = 2 pi i / n on [0, 2 pi). For smooth periodic
// integrands the associated trapezoid rule converges faster than any
// power of 1/n, which is what the norm and projection routines rely on.
class CircleGrid {
 public:
  // Throws std::invalid_argument unless n is even and at least 16.
  explicit CircleGrid(int n = 512);

  int size() const { return n_; }
  double spacing() const { return 2.0 * M_PI / static_cast<double>(n_); }
  double node(int i) const { return spacing() * static_cast<double>(i); }
  const std::vector<double>& nodes() const { return nodes_; }

  // Periodic trapezoid rule: spacing * sum of the nodal values.
  double integrate(const std::vector<double>& values) const;

 private:
  int n_;
  std::vector<double> nodes_;
};

// In-place radix-2 FFT when the length is a power of two, otherwise a
// direct O(n^2) transform. sign = -1 gives the forward convention
//   X_m = sum_i x_i exp(-2 pi i m i / n),
// sign = +1 the unnormalized inverse.
void fourier_transform(std::vector<std::complex<double>>& data, int sign);

// Nodal values of the unique zero-mean periodic primitive of the
// fluctuation of `values` around its mean. The mean component has no
// periodic primitive and is dropped; callers integrating density
// differences pass mean-zero data and lose nothing. Computed through the
// discrete Fourier series, so the result is spectrally accurate for
// smooth inputs.
std::vector<double> periodic_primitive(const CircleGrid& grid,
                                       const std::vector<double>& values);

}  // namespace rotor
