// Linearization of the mean-field dynamics at a stationary profile:
//   L_q u = (1/2) u'' - [ u (J*q) + q (J*u) ]',
// assembled as a generalized symmetric eigenproblem in the weighted
// H_{-1,1/q} geometry, where L_q is self-adjoint with spectrum in
// (-inf, 0]. The convolution J* touches only the first Fourier mode, so
// in the real Fourier basis the nonlocal part is a rank-two coupling.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rotor/grid.hpp"
#include "rotor/hilbert.hpp"
#include "rotor/stationary.hpp"

namespace rotor {

// Matrices of the linearized operator and of the weighted inner product
// over the basis {cos k theta, sin k theta}, k = 1..M, ordered
// cos 1, sin 1, cos 2, sin 2, ... The basis spans exactly the mean-zero
// band-limited functions, matching the operator's domain.
struct OperatorAssembly {
  double coupling;
  double degree;     // synchronization degree r of the profile
  double center;     // center of the profile the operator linearizes at
  int truncation;    // M
  CircleGrid grid;   // quadrature and evaluation grid, 8M nodes
  Eigen::MatrixXd op;    // matrix of L_q, entries (b_i, L_q b_j)_{-1,1/q}
  Eigen::MatrixXd gram;  // entries (b_i, b_j)_{-1,1/q}
};

// Eigenpairs of -L_q, ascending. Eigenvectors are G-orthonormal, which
// makes each e_j unit-norm in H_{-1,1/q}; in the centered frame signs
// follow e_j(0+) >= 0 for even functions and e_j'(0) >= 0 for odd ones
// (the problem itself fixes neither).
struct SpectralDecomposition {
  double coupling;
  double degree;
  double center;
  int truncation;
  CircleGrid grid;
  std::vector<double> eigenvalues;
  // Column j holds the basis coordinates of e_j.
  Eigen::MatrixXd coefficients;
  // +1 for even (cosine block), -1 for odd (sine block) about the
  // center; 0 when the assembly frame breaks the parity split.
  std::vector<int> parity;
  // e_j sampled at the grid nodes.
  std::vector<std::vector<double>> eigenfunctions;
};

// Quadrature assembly of both matrices at grid resolution 8M for the
// profile centered at `center`. Entries come from the primitive
// formula for the weighted pairing; the integrands are band-limited
// below the grid's Nyquist mode, so the quadrature is exact to
// roundoff. Requires coupling > 1 and M >= 16; throws
// std::invalid_argument otherwise, std::runtime_error if the Gram
// matrix fails its positive-definiteness factorization.
OperatorAssembly assemble(double coupling, int truncation,
                          double center = 0.0);

// Generalized symmetric eigensolve of the pencil (-L, G). In the
// centered frame the even and odd parities decouple exactly, so each
// block is solved on its own and the results merged in ascending
// order; this keeps near-degenerate high pairs from mixing across
// parity. Off-center assemblies solve the full pencil and leave the
// parity labels at 0.
SpectralDecomposition eigensolve(const OperatorAssembly& assembly);

// Adjoint eigenfunctions: the unique periodic f_j with
// -(q f_j')' = e_j and int f_j = 0, via f_j' = -E_j / q where E_j is
// the primitive of e_j centered against 1/q. The family is biorthogonal
// to the eigenfunctions: int f_i e_j = delta_ij.
std::vector<std::vector<double>> adjoint_eigenfunctions(
    const SpectralDecomposition& dec);

// Comparison of the computed spectrum against the large-index
// expansion: eigenvalues pair up and approach p^2/2 - K^2 r^2 / 8, and
// the paired eigenfunctions approach the span of sqrt(q) v_1, sqrt(q)
// v_2 with the explicit 1/p corrections
//   v_1 = cos p theta - (sin p theta / p) s(theta),
//   v_2 = sin p theta + (cos p theta / p) s(theta),
//   s = (K r / 2) sin theta + (K^2 r^2 / 8) sin 2 theta.
struct AsymptoticsRow {
  int p;
  double lambda_low;    // smaller eigenvalue of the pair
  double lambda_high;   // larger eigenvalue of the pair
  double predicted;     // p^2/2 - K^2 r^2 / 8
  double residual;      // max |lambda - predicted| over the pair
  double defect;        // max projection defect onto the predicted span
};

struct AsymptoticsReport {
  // Offset aligning eigenvalue indices with the pair pattern: the pair
  // of p sits at indices (offset + 2p, offset + 2p + 1). Chosen by best
  // agreement with the prediction over the requested range.
  int index_offset;
  bool truncation_warning;  // largest p within the polluted top band
  std::vector<AsymptoticsRow> rows;
};

// Requires max(p_range) <= M/2 (indices resolved at all); warns above
// M/4, where Galerkin truncation visibly pollutes the pair.
AsymptoticsReport asymptotics_report(const SpectralDecomposition& dec,
                                     const std::vector<int>& p_range);

// e^{s L_q} u by eigen-expansion: the coefficient of u along e_l is the
// weighted pairing (u, e_l)_{-1,1/q}, which coincides with the kernel
// pairing int f_l u. Contraction with rate e^{-lambda_1 s} on the
// complement of e_0. Requires s >= 0 and u on the decomposition's grid.
HMinusOneElement semigroup_apply(const SpectralDecomposition& dec, double s,
                                 const HMinusOneElement& u);

}  // namespace rotor
