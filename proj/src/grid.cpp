#include "rotor/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotor {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void dft_direct(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = sign * 2.0 * M_PI * static_cast<double>(m) *
                         static_cast<double>(i) / static_cast<double>(n);
      acc += a[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[m] = acc;
  }
  a = std::move(out);
}

}  // namespace

CircleGrid::CircleGrid(int n) : n_(n) {
  if (n < 16 || n % 2 != 0) {
    throw std::invalid_argument("CircleGrid: size must be even and >= 16, got " +
                                std::to_string(n));
  }
  nodes_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) nodes_[static_cast<std::size_t>(i)] = node(i);
}

double CircleGrid::integrate(const std::vector<double>& values) const {
  if (static_cast<int>(values.size()) != n_) {
    throw std::invalid_argument("CircleGrid::integrate: value count mismatch");
  }
  double acc = 0.0;
  for (double v : values) acc += v;
  return spacing() * acc;
}

void fourier_transform(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) return;
  if (is_power_of_two(static_cast<int>(data.size()))) {
    fft_radix2(data, sign);
  } else {
    dft_direct(data, sign);
  }
}

std::vector<double> periodic_primitive(const CircleGrid& grid,
                                       const std::vector<double>& values) {
  const int n = grid.size();
  if (static_cast<int>(values.size()) != n) {
    throw std::invalid_argument("periodic_primitive: value count mismatch");
  }
  std::vector<std::complex<double>> spec(values.begin(), values.end());
  fourier_transform(spec, -1);

  // Divide mode m by (i m): X_m sits at index m for 0 < m < n/2 and
  // represents frequency m; index n - m holds frequency -m. The mean
  // mode is dropped, and so is the Nyquist mode, whose primitive
  // sin(n theta / 2) / (n / 2) vanishes at every node anyway.
  std::vector<std::complex<double>> prim(static_cast<std::size_t>(n),
                                         std::complex<double>(0.0, 0.0));
  for (int m = 1; m < n / 2; ++m) {
    const std::complex<double> im(0.0, static_cast<double>(m));
    prim[static_cast<std::size_t>(m)] = spec[static_cast<std::size_t>(m)] / im;
    prim[static_cast<std::size_t>(n - m)] =
        spec[static_cast<std::size_t>(n - m)] / (-im);
  }
  fourier_transform(prim, +1);

  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        prim[static_cast<std::size_t>(i)].real() / static_cast<double>(n);
  }
  return out;
}

}  // namespace rotor
