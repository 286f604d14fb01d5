#include "rotor/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotor {
namespace {

constexpr int kMaxOrder = 64;

// Series I_k(x) = sum_m (x/2)^{k+2m} / (m! (m+k)!), accurate while the
// number of required terms stays modest; used below x = 15.
double bessel_i_series(int k, double x) {
  const double half = 0.5 * x;
  // First term (x/2)^k / k!, built incrementally to avoid overflow.
  double term = 1.0;
  for (int j = 1; j <= k; ++j) term *= half / static_cast<double>(j);
  double sum = term;
  for (int m = 1; m < 400; ++m) {
    term *= half * half / (static_cast<double>(m) * static_cast<double>(m + k));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// Scaled trapezoid rule on the defining integral,
//   I_k(x) = e^x * (1/2pi) * integral cos(k t) exp(x (cos t - 1)) dt.
// The integrand is smooth and periodic, so the uniform rule converges
// spectrally; 512 nodes are ample for x up to a few thousand.
double bessel_i_quadrature(int k, double x) {
  constexpr int n = 512;
  const double h = 2.0 * M_PI / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    acc += std::cos(k * t) * std::exp(x * (std::cos(t) - 1.0));
  }
  return std::exp(x) * acc / static_cast<double>(n);
}

}  // namespace

double bessel_i(int order, double x) {
  if (order < 0 || order > kMaxOrder) {
    throw std::domain_error("bessel_i: order " + std::to_string(order) +
                            " outside supported range [0, 64]");
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("bessel_i: argument must be nonnegative, got " +
                            std::to_string(x));
  }
  if (x < 15.0) return bessel_i_series(order, x);
  return bessel_i_quadrature(order, x);
}

double psi_ratio(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("psi_ratio: argument must be nonnegative, got " +
                            std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  return bessel_i(1, x) / bessel_i(0, x);
}

}  // namespace rotor
