// Modified Bessel functions of integer order and the ratio Psi = I1/I0.
#pragma once

namespace rotor {

// Modified Bessel function of the first kind,
//   I_k(x) = (1/2pi) * integral_0^{2pi} cos(k t) exp(x cos t) dt.
// Evaluated by the ascending power series for small x and by a scaled
// periodic trapezoid rule for large x, where the series needs too many
// terms. Relative accuracy is ~1e-14 over the supported range.
//
// Throws std::domain_error for x < 0 or order outside [0, 64].
double bessel_i(int order, double x);

// Psi(x) = I_1(x)/I_0(x). Increasing and concave on [0, inf), with
// Psi(0) = 0, Psi'(0) = 1/2, and Psi(x) -> 1 as x -> inf.
double psi_ratio(double x);

}  // namespace rotor
