// Fourier-Galerkin solver for the mean-field Fokker-Planck equation
//   dp/dt = (1/2) p'' - d/dtheta ( (J*p) p ),   J(u) = -K sin u.
// The convolution J*p involves only the first Fourier mode, so in
// coefficient space the nonlinearity is a band coupling between
// neighbors through c_1:
//   dc_k/dt = -(k^2/2) c_k + pi K k (c_1 c_{k-1} - conj(c_1) c_{k+1}).
#pragma once

#include <complex>
#include <vector>

#include "rotor/grid.hpp"
#include "rotor/stationary.hpp"

namespace rotor {

// Truncated spectral density p(theta) = sum_{|k| <= M} c_k e^{i k theta}
// with Hermitian symmetry; only k = 1..M is stored and the mass mode
// c_0 = 1/(2 pi) is a fixed constant, so mass conservation is exact by
// construction.
class FourierDensity {
 public:
  // Uniform density at the given truncation (all modes zero).
  explicit FourierDensity(int truncation);

  FourierDensity(int truncation, std::vector<std::complex<double>> modes);

  // Spectral coefficients of a stationary profile, c_k = rho_k
  // e^{-i k psi} / (2 pi).
  static FourierDensity from_profile(const StationaryProfile& q,
                                     int truncation);

  // Coefficients of a tabulated density by discrete Fourier projection.
  // The density must have unit mass within 1e-8.
  static FourierDensity from_values(const CircleGrid& grid,
                                    const std::vector<double>& values,
                                    int truncation);

  int truncation() const { return truncation_; }

  // c_k for any k: Hermitian reflection for k < 0, the pinned constant
  // for k = 0, zero beyond the truncation.
  std::complex<double> mode(int k) const;

  // Modes k = 1..M.
  const std::vector<std::complex<double>>& modes() const { return modes_; }

  void set_mode(int k, std::complex<double> value);

 private:
  int truncation_;
  std::vector<std::complex<double>> modes_;
};

// p(theta - shift) as a phase twist of the coefficients.
FourierDensity rotated(const FourierDensity& density, double shift);

// Right-hand side dc_k/dt for k = 1..M, with c_{M+1} taken as 0.
std::vector<std::complex<double>> rhs(const FourierDensity& density,
                                      double coupling);

// Integrating-factor Euler: the stiff diffusion factor e^{-k^2 dt / 2}
// is applied exactly, so the linear part is unconditionally stable and
// only the mild nonlinear term is explicit. Steps llround(t_end / dt)
// times; t_end must be an integer multiple of dt (slack 1e-9) and dt
// lie in (0, 0.01]. Aborts with std::runtime_error if any mode exceeds
// 10 in magnitude (blow-up guard).
FourierDensity evolve(const FourierDensity& density, double coupling,
                      double t_end, double dt);

// Free energy (1/2) int p log p - (K/2) intint p cos(theta - theta') p,
// the interaction term reducing to -(K/2) (2 pi)^2 |c_1|^2. The entropy
// integral is quadrature on the grid; a non-positive reconstructed
// density raises std::domain_error.
double free_energy(const FourierDensity& density, double coupling,
                   const CircleGrid& grid);

// Pointwise reconstruction c_0 + 2 sum_k Re(c_k e^{i k theta}).
std::vector<double> density_on_grid(const FourierDensity& density,
                                    const CircleGrid& grid);

}  // namespace rotor
