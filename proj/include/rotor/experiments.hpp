// Desk-scale statistical experiments on the rotator system: diffusion
// of the synchronization center on the N-time scale, the N^{-1/2}
// fluctuation neighborhood of the stationary family, and the emergence
// of a random center from symmetric initial data. Paths are
// embarrassingly parallel; every reported number is independent of the
// thread count because per-path results land in slots owned by their
// path index and the reductions run single-threaded in path order.

#pragma once

#include <cstdint>
#include <vector>

namespace rotor {

// Across-path variance curve of the lifted center Psi against rescaled
// time tau = t / N, with the fitted diffusion coefficient. The slope
// is estimated on tau >= 0.1 only; earlier times carry the approach
// transient. The standard error of d_hat comes from a 1000-resample
// path bootstrap.
struct DiffusionEstimate {
  double coupling = 0.0;
  int n_particles = 0;
  double tau_f = 0.0;
  double dt = 0.0;
  int n_paths = 0;
  int excluded_paths = 0;  // desynchronized, left out of all statistics

  std::vector<double> taus;       // recorded rescaled times
  std::vector<double> variances;  // Var(Psi(tau)) across kept paths

  double slope = 0.0;  // d Var / d tau on the post-burn-in window
  double intercept = 0.0;
  double fit_r2 = 0.0;
  double d_hat = 0.0;     // sqrt(slope)
  double d_stderr = 0.0;  // bootstrap standard error of d_hat
  double target = 0.0;    // diffusion coefficient predicted by theory

  double drift_mean = 0.0;  // mean of Psi(tau_f) - Psi(0) over kept paths
  double drift_stderr = 0.0;

  // Pooled lag-1 autocorrelation of Psi increments over coarse windows
  // past the burn-in; zero with no samples when the window grid is too
  // short to form pairs.
  double autocorr_lag1 = 0.0;
  int autocorr_samples = 0;

  std::vector<double> path_increments;  // per path, desynchronized included
  std::vector<double> path_final_r;
};

// Runs n_paths independent simulations of N rotators started at the
// quantiles of the profile centered at initial_center, records the
// lifted center at ~200 rescaled times up to tau_f, and fits the
// across-path variance growth. Throws std::invalid_argument for
// coupling <= 1, n_particles < 100, tau_f outside (0.1, 4], or
// n_paths < 2, and std::runtime_error when desynchronized paths reach
// 1% of the total.
DiffusionEstimate phase_diffusion_experiment(double coupling, int n_particles,
                                             double tau_f, double dt,
                                             int n_paths, std::uint64_t seed,
                                             double initial_center = 0.0,
                                             int threads = 1);

struct ScalingPoint {
  int n_particles;
  double mean_distance;  // mean over paths of the distance to the family
  double stderr_mean;
};

// Mean distance to the stationary family at a fixed time against the
// particle number, with the log-log slope of the decay.
struct ScalingResult {
  double coupling = 0.0;
  double t_fixed = 0.0;
  int n_paths = 0;
  double dt = 0.0;
  std::vector<ScalingPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
};

// For each N in n_list, runs n_paths paths from the quantiles of the
// centered profile to t_fixed and measures the unweighted H_{-1}
// distance of the empirical measure to the stationary family. Throws
// std::invalid_argument for coupling <= 1, an empty n_list, entries
// below 2, n_paths < 2, or t_fixed <= 0.
ScalingResult fluctuation_scaling(double coupling, double t_fixed,
                                  const std::vector<int>& n_list, int n_paths,
                                  std::uint64_t seed, double dt = 2e-3,
                                  int threads = 1);

// Centers selected by noise from a symmetric start, with a circular
// uniformity test. A path that never crosses the threshold within the
// time limit counts as a timeout and contributes no center.
struct EmergenceResult {
  double coupling = 0.0;
  int n_particles = 0;
  int n_paths = 0;
  double dt = 0.0;
  double threshold = 0.0;   // crossing level r / 2
  double time_limit = 0.0;  // 20 log N
  std::vector<double> centers;  // projected center at first crossing
  std::vector<double> crossing_times;
  int timeout_count = 0;
  double rayleigh_statistic = 0.0;  // n * rbar^2 over the centers
  double rayleigh_p = 1.0;          // small values reject uniformity
};

// Starts each path on the equally spaced lattice (empirical first
// harmonic exactly zero), steps until the synchronization degree first
// exceeds r / 2 or the time limit 20 log N expires, and projects the
// crossing state onto the stationary family. Throws
// std::invalid_argument for coupling <= 1, n_particles < 2, or
// n_paths < 1.
EmergenceResult emergence_from_uniform(double coupling, int n_particles,
                                       int n_paths, std::uint64_t seed,
                                       double dt = 2e-3, int threads = 1);

}  // namespace rotor
