// Stationary synchronized profiles of the mean-field rotator dynamics.
//
// For coupling K > 1 the model has a circle of stationary densities
//   q_psi(theta) = exp(2 K r cos(theta - psi)) / (2 pi I_0(2 K r)),
// one for each center psi, where the synchronization degree r in (0, 1)
// solves the fixed-point equation r = Psi(2 K r). For K <= 1 only the
// flat profile 1/(2 pi) is stationary and r = 0.
#pragma once

#include <vector>

namespace rotor {

// Largest retained harmonic in cached Fourier expansions. Coefficients
// decay super-geometrically, so this bound is never the accuracy limit.
inline constexpr int kMaxHarmonic = 64;

// Solves r = Psi(2 K r) for the synchronization degree. Returns the
// positive root for K > 1 and exactly 0 for K <= 1. The result leaves a
// fixed-point residual |Psi(2 K r) - r| below tol.
//
// Throws std::invalid_argument if tol <= 0.
double solve_sync_degree(double coupling, double tol = 1e-13);

// Phase diffusion coefficient of the synchronized family,
//   D_K = 1 / sqrt(1 - I_0(2 K r)^{-2}).
// Defined only in the synchronized regime; throws std::domain_error for
// K <= 1.
double diffusion_coefficient(double coupling);

// Normalization c = 2 pi / integral(1/q) = 1 / (2 pi I_0(2 K r)^2) of the
// weighted pairing against 1/q. Throws std::domain_error for K <= 1.
double c_constant(double coupling);

// One stationary profile q_psi with its derived quantities. All series
// evaluations truncate where the harmonic amplitudes fall below 1e-18.
class StationaryProfile {
 public:
  // Profile for the given coupling, centered at psi. Solves the
  // fixed-point equation internally. Throws std::domain_error if
  // coupling <= 0.
  StationaryProfile(double coupling, double center);

  // Profile with an explicitly prescribed synchronization degree, for
  // callers that already hold the root (or want an off-manifold probe).
  static StationaryProfile with_degree(double coupling, double degree,
                                       double center);

  double coupling() const { return coupling_; }
  double center() const { return center_; }
  double degree() const { return degree_; }

  // q_psi(theta).
  double density(double theta) const;

  // d/dtheta q_psi(theta) = -2 K r sin(theta - psi) q_psi(theta).
  double density_deriv(double theta) const;

  // 1 / q_psi(theta), computed in closed form (no division).
  double inv_density(double theta) const;

  // Cumulative integral of the density from 0 to theta, as a series in
  // the harmonic amplitudes. Additive in theta across the period:
  // cdf(theta + 2 pi) = cdf(theta) + 1.
  double cdf(double theta) const;

  // Inverse of the cdf restricted to one period: the unique theta in
  // [0, 2 pi) with cdf(theta) - cdf(0) reaching u in (0, 1), up to the
  // branch choice closest to the center. Used for inverse-transform
  // sampling. Throws std::domain_error if u is outside (0, 1).
  double quantile(double u) const;

  // Kernel kappa_psi(theta): the primitive of 1 - c/q_psi chosen odd
  // about the center. Pairing a measure against it gives the weighted
  // tangent pairing used by the manifold projection.
  double kappa(double theta) const;

  // Complex Fourier coefficient c_k = (1/2pi) integral q(t) e^{-ikt} dt
  // of the centered profile (center = 0 frame): c_k = rho_k / (2 pi),
  // real by symmetry. Valid for 0 <= k; beyond the retained range the
  // coefficients are returned as 0.
  double fourier_coeff(int k) const;

  // Number of retained harmonics in the cached expansion.
  int harmonic_count() const { return static_cast<int>(rho_.size()); }

  // Ratio amplitudes rho_k = I_k(2 K r) / I_0(2 K r), k = 1..count.
  const std::vector<double>& harmonic_amplitudes() const { return rho_; }

 private:
  StationaryProfile(double coupling, double degree, double center, int);

  double coupling_;
  double center_;
  double degree_;
  double exponent_scale_;   // 2 K r
  double bessel_i0_;        // I_0(2 K r)
  std::vector<double> rho_; // rho_k, k = 1..harmonic_count()
};

}  // namespace rotor
