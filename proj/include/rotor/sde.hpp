// Langevin simulator for N coupled rotators:
//   dphi_j = -(K/N) sum_i sin(phi_j - phi_i) dt + dW_j,
// stepped by Euler-Maruyama with the drift reduced through the order
// parameter, so one step costs O(N).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rotor/measures.hpp"
#include "rotor/rng.hpp"
#include "rotor/stationary.hpp"

namespace rotor {

struct PhaseEnsemble {
  std::vector<double> phases;  // stored mod 2 pi
  double time = 0.0;
};

struct SimConfig {
  double coupling = 2.0;
  int n_particles = 2;
  double dt = 1e-3;
  double t_end = 1.0;
  std::uint64_t seed = 0;
  // Replica id mixed into the noise stream, so paths of one experiment
  // draw independent noise under a single seed.
  std::uint64_t stream_index = 0;
  int record_stride = 1;
  // Diagnostic switch: integrate the drift alone.
  bool zero_noise = false;
};

// Validates the configuration: N >= 2, 0 < dt <= 0.01, t_end an integer
// multiple of dt (relative slack 1e-9), record_stride >= 1, coupling
// >= 0. Throws std::invalid_argument naming the offending field.
void validate(const SimConfig& config);

// Recorded trajectory of the order parameter. psi_unwrapped carries the
// continuous lift of the center angle: each recorded increment is the
// raw angle difference shifted into (-pi, pi]. Records where the
// increment reaches pi/2, or where the magnitude is too small for the
// angle to mean anything (r < 1e-12, increment taken as 0), bump
// unwrap_warnings; a nonzero count signals a too-coarse record stride.
struct PhaseTrack {
  std::vector<double> times;
  std::vector<double> r_values;
  std::vector<double> psi_unwrapped;
  int unwrap_warnings = 0;
};

// Mean-field drift -K r_N sin(phi_j - Psi_N), evaluated through the
// complex mean so the degenerate r_N = 0 case needs no special angle.
// Agrees with the O(N^2) pairwise sum to roundoff.
std::vector<double> drift(std::span<const double> phases, double coupling);

// One Euler-Maruyama step from the frozen order parameter of the
// current state: phi += drift dt + sqrt(dt) xi, then reduce mod 2 pi.
// The noise variate of particle j is indexed by (step_index, j) in the
// given stream, making trajectories independent of evaluation order.
void step(PhaseEnsemble& ensemble, const SimConfig& config,
          const CounterRng& noise, std::uint64_t step_index);

// Full trajectory with (t, r_N, lifted Psi_N) recorded every
// record_stride steps, including the initial and final states. When
// final_state is given, it receives the ensemble at t_end.
PhaseTrack run(const SimConfig& config, const PhaseEnsemble& initial,
               PhaseEnsemble* final_state = nullptr);

// Deterministic lattice 2 pi j / N, j = 0..N-1.
PhaseEnsemble sample_equally_spaced(int n);

// Particle j at the (j - 1/2)/N quantile of the profile: the
// deterministic ensemble closest to q in the H_{-1} embedding.
PhaseEnsemble sample_quantiles(const StationaryProfile& q, int n);

// Independent draws from the profile via its analytic quantile.
PhaseEnsemble sample_iid(const StationaryProfile& q, int n,
                         SequentialRng& rng);

// Independent draws from a tabulated density via the interpolated
// inverse cdf. The density must be strictly positive with unit mass
// (|mass - 1| <= 1e-8); throws std::invalid_argument otherwise.
PhaseEnsemble sample_iid_density(const GridDensity& density, int n,
                                 SequentialRng& rng);

}  // namespace rotor
