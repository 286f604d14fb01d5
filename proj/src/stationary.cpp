#include "rotor/stationary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rotor/bessel.hpp"

namespace rotor {
namespace {

double wrap_two_pi(double theta) {
  double w = std::fmod(theta, 2.0 * M_PI);
  if (w < 0.0) w += 2.0 * M_PI;
  return w;
}

double checked_coupling(double coupling) {
  if (!(coupling > 0.0)) {
    throw std::domain_error("StationaryProfile: coupling must be positive");
  }
  return coupling;
}

}  // namespace

double solve_sync_degree(double coupling, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("solve_sync_degree: tol must be positive");
  }
  if (coupling <= 1.0) return 0.0;

  // g(r) = Psi(2 K r) - r has g(0+) > 0 (slope K - 1) and g(1) < 0
  // (Psi < 1 everywhere), with a single sign change at the root.
  const auto g = [coupling](double r) {
    return psi_ratio(2.0 * coupling * r) - r;
  };
  double lo = 1e-12;
  double hi = 1.0;
  double mid = 0.5;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double val = g(mid);
    if (std::abs(val) < tol) return mid;
    if (val > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-16) break;
  }
  const double residual = std::abs(g(mid));
  if (residual >= tol) {
    throw std::runtime_error(
        "solve_sync_degree: fixed-point residual " + std::to_string(residual) +
        " did not reach tolerance");
  }
  return mid;
}

double diffusion_coefficient(double coupling) {
  if (coupling <= 1.0) {
    throw std::domain_error(
        "diffusion_coefficient: defined only for coupling > 1");
  }
  const double r = solve_sync_degree(coupling);
  const double i0 = bessel_i(0, 2.0 * coupling * r);
  return 1.0 / std::sqrt(1.0 - 1.0 / (i0 * i0));
}

double c_constant(double coupling) {
  if (coupling <= 1.0) {
    throw std::domain_error("c_constant: defined only for coupling > 1");
  }
  const double r = solve_sync_degree(coupling);
  const double i0 = bessel_i(0, 2.0 * coupling * r);
  return 1.0 / (2.0 * M_PI * i0 * i0);
}

StationaryProfile::StationaryProfile(double coupling, double degree,
                                     double center, int)
    : coupling_(coupling),
      center_(center),
      degree_(degree),
      exponent_scale_(2.0 * coupling * degree),
      bessel_i0_(bessel_i(0, exponent_scale_)) {
  rho_.reserve(16);
  for (int k = 1; k <= kMaxHarmonic; ++k) {
    const double rho = bessel_i(k, exponent_scale_) / bessel_i0_;
    if (rho < 1e-18) break;
    rho_.push_back(rho);
  }
}

StationaryProfile::StationaryProfile(double coupling, double center)
    : StationaryProfile(checked_coupling(coupling), solve_sync_degree(coupling),
                        center, 0) {}

StationaryProfile StationaryProfile::with_degree(double coupling,
                                                 double degree,
                                                 double center) {
  if (!(coupling > 0.0) || !(degree >= 0.0) || degree >= 1.0) {
    throw std::domain_error(
        "StationaryProfile: need coupling > 0 and degree in [0, 1)");
  }
  return StationaryProfile(coupling, degree, center, 0);
}

double StationaryProfile::density(double theta) const {
  return std::exp(exponent_scale_ * std::cos(theta - center_)) /
         (2.0 * M_PI * bessel_i0_);
}

double StationaryProfile::density_deriv(double theta) const {
  return -exponent_scale_ * std::sin(theta - center_) * density(theta);
}

double StationaryProfile::inv_density(double theta) const {
  return 2.0 * M_PI * bessel_i0_ *
         std::exp(-exponent_scale_ * std::cos(theta - center_));
}

double StationaryProfile::cdf(double theta) const {
  const double v = theta - center_;
  double acc = theta / (2.0 * M_PI);
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    acc += rho_[i] * (std::sin(k * v) + std::sin(k * center_)) / (M_PI * k);
  }
  return acc;
}

double StationaryProfile::quantile(double u) const {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("quantile: argument must lie in (0, 1)");
  }
  // Solve C(v) = u on [-pi, pi], where C is the cdf in the frame of the
  // center: C(v) = (v + pi)/(2 pi) + (1/pi) sum_k rho_k sin(k v)/k,
  // so C' equals the density and is strictly positive.
  const auto cdf_centered = [this](double v) {
    double acc = (v + M_PI) / (2.0 * M_PI);
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      acc += rho_[i] * std::sin(k * v) / (M_PI * k);
    }
    return acc;
  };
  const auto pdf_centered = [this](double v) {
    double acc = 1.0 / (2.0 * M_PI);
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      acc += rho_[i] * std::cos(k * v) / M_PI;
    }
    return acc;
  };

  double lo = -M_PI;
  double hi = M_PI;
  double v = 2.0 * M_PI * u - M_PI;
  for (int it = 0; it < 100; ++it) {
    const double err = cdf_centered(v) - u;
    if (std::abs(err) < 1e-15) break;
    if (err > 0.0) {
      hi = v;
    } else {
      lo = v;
    }
    const double step = err / pdf_centered(v);
    double next = v - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - v) < 1e-16) {
      v = next;
      break;
    }
    v = next;
  }
  return wrap_two_pi(center_ + v);
}

double StationaryProfile::kappa(double theta) const {
  const double v = theta - center_;
  double acc = 0.0;
  double sign = 1.0;
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    acc += sign * (rho_[i] / k) * std::sin(k * v);
    sign = -sign;
  }
  return 2.0 * acc;
}

double StationaryProfile::fourier_coeff(int k) const {
  if (k < 0) throw std::domain_error("fourier_coeff: order must be >= 0");
  if (k == 0) return 1.0 / (2.0 * M_PI);
  if (k > harmonic_count()) return 0.0;
  return rho_[static_cast<std::size_t>(k - 1)] / (2.0 * M_PI);
}

}  // namespace rotor
