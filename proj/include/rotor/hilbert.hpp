// Negative-Sobolev geometry on the circle: weighted H_{-1,w} norms of
// measure differences via centered primitives, the distance to the
// family of stationary profiles, and the phase projection onto it.
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "rotor/grid.hpp"
#include "rotor/measures.hpp"
#include "rotor/stationary.hpp"

namespace rotor {

// A mean-zero distribution u represented by nodal values of one of its
// primitives. All weighted pairings re-center the primitive so that
// int w U = 0, which makes the stored additive constant irrelevant.
class HMinusOneElement {
 public:
  HMinusOneElement(CircleGrid grid, std::vector<double> primitive);

  // Element for a mean-zero function tabulated at the grid nodes.
  // Throws std::invalid_argument when the values carry nonzero mass
  // (above 1e-10), since a periodic primitive then does not exist.
  static HMinusOneElement from_density_values(const CircleGrid& grid,
                                              const std::vector<double>& values);

  // Element for the difference a - b of two probability measures; the
  // primitive is the cdf difference, which closes up over the period.
  static HMinusOneElement measure_difference(const CircleMeasure& a,
                                             const CircleMeasure& b,
                                             const CircleGrid& grid);

  const CircleGrid& grid() const { return grid_; }
  const std::vector<double>& primitive() const { return primitive_; }

 private:
  CircleGrid grid_;
  std::vector<double> primitive_;
};

// Nodal weight values for a pointwise-positive weight function.
// Throws std::invalid_argument if the weight is not strictly positive
// at every node.
std::vector<double> weight_values(const CircleGrid& grid,
                                  const std::function<double(double)>& weight);

// (u, v)_{-1,w} = int w (U - cU)(V - cV), centering each primitive by
// its weighted mean c = (int w U)/(int w).
double h1w_inner_product(const HMinusOneElement& u, const HMinusOneElement& v,
                         const std::vector<double>& weight);

double h1w_norm(const HMinusOneElement& u, const std::vector<double>& weight);

// || a - b ||_{-1,w} for two probability measures. Weight identically 1
// gives the plain H_{-1} norm. Any two probability measures are at
// distance at most sqrt(2 pi) in that norm.
double h1w_norm_of_difference(const CircleMeasure& a, const CircleMeasure& b,
                              const std::function<double(double)>& weight,
                              const CircleGrid& grid);

// Unweighted H_{-s} norm, s = 1 or 2, from Fourier coefficients in the
// convention u_m = int_0^{2pi} u(theta) e^{-i m theta} dtheta:
//   ||u||_{-s} = ( (1/2pi) sum_{m != 0} |u_m|^2 / m^{2s} )^{1/2}.
// The input holds u_m for m = 0..M; the negative side is implied by
// Hermitian symmetry. In this coefficient convention the s = 1 value
// agrees with the primitive-based norm exactly (conversion constant 1;
// asserted by a cross-check test). Throws std::invalid_argument when
// u_0 is nonzero or s is not 1 or 2.
double fourier_hminus_norm(const std::vector<std::complex<double>>& u, int s);

// The scalar (q'_psi, mu - q_psi)_{-1,1/q_psi}, evaluated through the
// kernel form -int kappa_psi d(mu - q_psi). Vanishes exactly when mu is
// the profile centered at psi; its root in psi defines the projection.
double tangent_functional(const CircleMeasure& mu, double center,
                          double coupling, const CircleGrid& grid);

// Center psi* of the profile nearest to mu in the weighted pairing:
// the root of the tangent functional, found by safeguarded secant from
// the guess with a bracketing fallback. The residual at the returned
// root is below 1e-10; if no root is found near the guess (mu too far
// from the stationary family), throws std::runtime_error carrying the
// last residual.
double project_to_manifold(const CircleMeasure& mu, double coupling,
                           double guess, const CircleGrid& grid);

// min over centers of || mu - q_psi ||_{-1}: coarse scan over 64
// candidate centers, then golden-section refinement. For coupling <= 1
// the family degenerates to the flat profile and no scan is needed.
double dist_to_manifold(const CircleMeasure& mu, double coupling,
                        const CircleGrid& grid);

}  // namespace rotor
