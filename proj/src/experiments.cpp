#include "rotor/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rotor/grid.hpp"
#include "rotor/hilbert.hpp"
#include "rotor/measures.hpp"
#include "rotor/rng.hpp"
#include "rotor/sde.hpp"
#include "rotor/stationary.hpp"

namespace rotor {

namespace {

// Rescaled time discarded before the variance fit; the approach
// transient from the deterministic start lives below it at desk scale.
constexpr double kBurnIn = 0.1;

constexpr int kBootstrapResamples = 1000;

// Record interval count aimed at per path; the actual stride is the
// nearest whole number of steps.
constexpr int kTargetRecords = 200;

// Runs fn(index) for index = 0..count-1 on up to `threads` workers.
// Indices are claimed through a shared counter, so the schedule varies
// but results are deterministic as long as fn(index) writes only to
// slots owned by its index. The first exception wins and is rethrown
// on the caller after the pool drains.
template <typename Fn>
void for_each_index(int count, int threads, Fn&& fn) {
  const int workers = std::min(std::max(threads, 1), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) {
        return;
      }
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back(body);
  }
  for (auto& worker : pool) {
    worker.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += resid * resid;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double sample_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (const double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

double sample_variance(const std::vector<double>& values, double mean) {
  double sum = 0.0;
  for (const double v : values) {
    sum += (v - mean) * (v - mean);
  }
  return sum / static_cast<double>(values.size() - 1);
}

// Variance fit of one (possibly resampled) set of paths over the
// post-burn-in window. rows[k] points at the window-restricted Psi
// record of a kept path; pick maps fit paths to rows.
double window_slope(const std::vector<const double*>& rows,
                    const std::vector<int>& pick,
                    const std::vector<double>& window_taus,
                    std::vector<double>& variances_scratch) {
  const auto n_tau = window_taus.size();
  const auto n_pick = static_cast<double>(pick.size());
  variances_scratch.resize(n_tau);
  for (std::size_t m = 0; m < n_tau; ++m) {
    double sum = 0.0;
    for (const int k : pick) {
      sum += rows[static_cast<std::size_t>(k)][m];
    }
    const double mean = sum / n_pick;
    double sq = 0.0;
    for (const int k : pick) {
      const double d = rows[static_cast<std::size_t>(k)][m] - mean;
      sq += d * d;
    }
    variances_scratch[m] = sq / (n_pick - 1.0);
  }
  return fit_line(window_taus, variances_scratch).slope;
}

// Zar's series approximation of the Rayleigh test p-value for the
// statistic z = n rbar^2, accurate well beyond desk-scale n.
double rayleigh_p_value(double z, double n) {
  const double z2 = z * z;
  const double z3 = z2 * z;
  const double z4 = z2 * z2;
  const double p =
      std::exp(-z) * (1.0 + (2.0 * z - z2) / (4.0 * n) -
                      (24.0 * z - 132.0 * z2 + 76.0 * z3 - 9.0 * z4) /
                          (288.0 * n * n));
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

DiffusionEstimate phase_diffusion_experiment(double coupling, int n_particles,
                                             double tau_f, double dt,
                                             int n_paths, std::uint64_t seed,
                                             double initial_center,
                                             int threads) {
  if (!(coupling > 1.0)) {
    throw std::invalid_argument(
        "phase_diffusion_experiment: coupling must exceed 1");
  }
  if (n_particles < 100) {
    throw std::invalid_argument(
        "phase_diffusion_experiment: needs at least 100 particles");
  }
  if (!(tau_f > kBurnIn) || tau_f > 4.0) {
    throw std::invalid_argument(
        "phase_diffusion_experiment: tau_f must lie in (0.1, 4]");
  }
  if (n_paths < 2) {
    throw std::invalid_argument(
        "phase_diffusion_experiment: needs at least two paths");
  }

  SimConfig base;
  base.coupling = coupling;
  base.n_particles = n_particles;
  base.dt = dt;
  base.t_end = tau_f * n_particles;
  base.seed = seed;
  const auto steps = static_cast<std::int64_t>(std::llround(base.t_end / dt));
  base.record_stride =
      static_cast<int>(std::max<std::int64_t>(1, steps / kTargetRecords));
  validate(base);

  const StationaryProfile profile(coupling, initial_center);
  const PhaseEnsemble initial = sample_quantiles(profile, n_particles);
  const double desync_level = profile.degree() / 2.0;

  struct PathRecord {
    std::vector<double> times;
    std::vector<double> psi;
    double final_r = 0.0;
    bool desynchronized = false;
  };
  std::vector<PathRecord> records(static_cast<std::size_t>(n_paths));

  for_each_index(n_paths, threads, [&](int path) {
    SimConfig cfg = base;
    cfg.stream_index = static_cast<std::uint64_t>(path);
    const PhaseTrack track = run(cfg, initial);
    PathRecord& rec = records[static_cast<std::size_t>(path)];
    rec.times = track.times;
    rec.psi = track.psi_unwrapped;
    rec.final_r = track.r_values.back();
    rec.desynchronized =
        std::any_of(track.r_values.begin(), track.r_values.end(),
                    [&](double r) { return r < desync_level; });
  });

  DiffusionEstimate out;
  out.coupling = coupling;
  out.n_particles = n_particles;
  out.tau_f = tau_f;
  out.dt = dt;
  out.n_paths = n_paths;
  out.target = diffusion_coefficient(coupling);

  std::vector<int> kept;
  for (int path = 0; path < n_paths; ++path) {
    const PathRecord& rec = records[static_cast<std::size_t>(path)];
    out.path_increments.push_back(rec.psi.back() - rec.psi.front());
    out.path_final_r.push_back(rec.final_r);
    if (rec.desynchronized) {
      ++out.excluded_paths;
    } else {
      kept.push_back(path);
    }
  }
  if (static_cast<double>(out.excluded_paths) >= 0.01 * n_paths) {
    throw std::runtime_error(
        "phase_diffusion_experiment: desynchronized paths reached 1% of the "
        "total (" +
        std::to_string(out.excluded_paths) + " of " +
        std::to_string(n_paths) + ")");
  }

  const std::vector<double>& times = records[0].times;
  const auto n_records = times.size();
  out.taus.resize(n_records);
  for (std::size_t m = 0; m < n_records; ++m) {
    out.taus[m] = times[m] / n_particles;
  }

  const auto n_kept = static_cast<double>(kept.size());
  out.variances.resize(n_records);
  for (std::size_t m = 0; m < n_records; ++m) {
    double sum = 0.0;
    for (const int path : kept) {
      sum += records[static_cast<std::size_t>(path)].psi[m];
    }
    const double mean = sum / n_kept;
    double sq = 0.0;
    for (const int path : kept) {
      const double d = records[static_cast<std::size_t>(path)].psi[m] - mean;
      sq += d * d;
    }
    out.variances[m] = sq / (n_kept - 1.0);
  }

  std::size_t window_begin = n_records;
  for (std::size_t m = 0; m < n_records; ++m) {
    if (out.taus[m] >= kBurnIn - 1e-9) {
      window_begin = m;
      break;
    }
  }
  if (n_records - window_begin < 3) {
    throw std::runtime_error(
        "phase_diffusion_experiment: fewer than three records past the "
        "burn-in");
  }
  const std::vector<double> window_taus(out.taus.begin() + window_begin,
                                        out.taus.end());
  {
    const std::vector<double> window_vars(out.variances.begin() + window_begin,
                                          out.variances.end());
    const LineFit fit = fit_line(window_taus, window_vars);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.fit_r2 = fit.r2;
    out.d_hat = std::sqrt(std::max(fit.slope, 0.0));
  }

  std::vector<const double*> rows;
  rows.reserve(kept.size());
  for (const int path : kept) {
    rows.push_back(records[static_cast<std::size_t>(path)].psi.data() +
                   window_begin);
  }
  {
    SequentialRng boot(derive_stream(seed, kPurposeBootstrap, 0));
    const auto k = static_cast<int>(kept.size());
    std::vector<int> pick(kept.size());
    std::vector<double> scratch;
    std::vector<double> replicates;
    replicates.reserve(kBootstrapResamples);
    for (int b = 0; b < kBootstrapResamples; ++b) {
      for (auto& p : pick) {
        p = std::min(k - 1, static_cast<int>(boot.uniform() * k));
      }
      const double slope = window_slope(rows, pick, window_taus, scratch);
      replicates.push_back(std::sqrt(std::max(slope, 0.0)));
    }
    const double mean = sample_mean(replicates);
    out.d_stderr = std::sqrt(sample_variance(replicates, mean));
  }

  {
    std::vector<double> increments;
    increments.reserve(kept.size());
    for (const int path : kept) {
      const PathRecord& rec = records[static_cast<std::size_t>(path)];
      increments.push_back(rec.psi.back() - rec.psi.front());
    }
    out.drift_mean = sample_mean(increments);
    out.drift_stderr =
        std::sqrt(sample_variance(increments, out.drift_mean) / n_kept);
  }

  {
    // Increments over coarse windows of ten record intervals, pooled
    // across paths; consecutive pairs within one path feed the lag-1
    // statistic.
    std::vector<std::size_t> marks;
    for (std::size_t m = window_begin; m < n_records; m += 10) {
      marks.push_back(m);
    }
    if (marks.size() >= 3) {
      std::vector<std::vector<double>> increments(kept.size());
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        const auto& psi = records[static_cast<std::size_t>(kept[i])].psi;
        for (std::size_t j = 0; j + 1 < marks.size(); ++j) {
          increments[i].push_back(psi[marks[j + 1]] - psi[marks[j]]);
        }
        for (const double v : increments[i]) {
          sum += v;
        }
        count += increments[i].size();
      }
      const double mean = sum / static_cast<double>(count);
      double var = 0.0;
      for (const auto& row : increments) {
        for (const double v : row) {
          var += (v - mean) * (v - mean);
        }
      }
      var /= static_cast<double>(count);
      double cov = 0.0;
      std::size_t pairs = 0;
      for (const auto& row : increments) {
        for (std::size_t j = 0; j + 1 < row.size(); ++j) {
          cov += (row[j] - mean) * (row[j + 1] - mean);
          ++pairs;
        }
      }
      cov /= static_cast<double>(pairs);
      out.autocorr_lag1 = var > 0.0 ? cov / var : 0.0;
      out.autocorr_samples = static_cast<int>(pairs);
    }
  }

  return out;
}

ScalingResult fluctuation_scaling(double coupling, double t_fixed,
                                  const std::vector<int>& n_list, int n_paths,
                                  std::uint64_t seed, double dt, int threads) {
  if (!(coupling > 1.0)) {
    throw std::invalid_argument("fluctuation_scaling: coupling must exceed 1");
  }
  if (n_list.empty()) {
    throw std::invalid_argument("fluctuation_scaling: empty size list");
  }
  for (const int n : n_list) {
    if (n < 2) {
      throw std::invalid_argument(
          "fluctuation_scaling: sizes must be at least 2");
    }
  }
  if (n_paths < 2) {
    throw std::invalid_argument(
        "fluctuation_scaling: needs at least two paths");
  }
  if (!(t_fixed > 0.0)) {
    throw std::invalid_argument("fluctuation_scaling: t_fixed must be > 0");
  }

  const StationaryProfile profile(coupling, 0.0);
  const auto n_sizes = n_list.size();
  std::vector<std::vector<double>> distances(
      n_sizes, std::vector<double>(static_cast<std::size_t>(n_paths)));

  const int total = static_cast<int>(n_sizes) * n_paths;
  for_each_index(total, threads, [&](int task) {
    const auto size_index = static_cast<std::size_t>(task / n_paths);
    const int path = task % n_paths;
    SimConfig cfg;
    cfg.coupling = coupling;
    cfg.n_particles = n_list[size_index];
    cfg.dt = dt;
    cfg.t_end = t_fixed;
    cfg.seed = seed;
    cfg.stream_index = static_cast<std::uint64_t>(task);
    const auto steps = static_cast<std::int64_t>(std::llround(t_fixed / dt));
    cfg.record_stride = static_cast<int>(std::max<std::int64_t>(1, steps));
    validate(cfg);
    PhaseEnsemble final_state;
    run(cfg, sample_quantiles(profile, cfg.n_particles), &final_state);
    const CircleGrid grid;
    distances[size_index][static_cast<std::size_t>(path)] =
        dist_to_manifold(EmpiricalMeasure(final_state.phases), coupling, grid);
  });

  ScalingResult out;
  out.coupling = coupling;
  out.t_fixed = t_fixed;
  out.n_paths = n_paths;
  out.dt = dt;
  std::vector<double> log_n;
  std::vector<double> log_mean;
  for (std::size_t i = 0; i < n_sizes; ++i) {
    const double mean = sample_mean(distances[i]);
    const double var = sample_variance(distances[i], mean);
    out.points.push_back(
        {n_list[i], mean, std::sqrt(var / static_cast<double>(n_paths))});
    log_n.push_back(std::log(static_cast<double>(n_list[i])));
    log_mean.push_back(std::log(mean));
  }
  if (n_sizes >= 2) {
    const LineFit fit = fit_line(log_n, log_mean);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
  }
  return out;
}

EmergenceResult emergence_from_uniform(double coupling, int n_particles,
                                       int n_paths, std::uint64_t seed,
                                       double dt, int threads) {
  if (!(coupling > 1.0)) {
    throw std::invalid_argument(
        "emergence_from_uniform: coupling must exceed 1");
  }
  if (n_particles < 2) {
    throw std::invalid_argument(
        "emergence_from_uniform: needs at least two particles");
  }
  if (n_paths < 1) {
    throw std::invalid_argument(
        "emergence_from_uniform: needs at least one path");
  }

  EmergenceResult out;
  out.coupling = coupling;
  out.n_particles = n_particles;
  out.n_paths = n_paths;
  out.dt = dt;
  out.threshold = solve_sync_degree(coupling) / 2.0;
  out.time_limit = 20.0 * std::log(static_cast<double>(n_particles));

  SimConfig cfg;
  cfg.coupling = coupling;
  cfg.n_particles = n_particles;
  cfg.dt = dt;

  // The degree is checked every few steps; the crossing time is
  // resolved to that stride, which is far below the escape time scale.
  constexpr std::uint64_t kCheckStride = 25;
  const auto max_steps =
      static_cast<std::uint64_t>(std::ceil(out.time_limit / dt));

  struct PathOutcome {
    bool crossed = false;
    double center = 0.0;
    double time = 0.0;
  };
  std::vector<PathOutcome> outcomes(static_cast<std::size_t>(n_paths));

  for_each_index(n_paths, threads, [&](int path) {
    PhaseEnsemble ensemble = sample_equally_spaced(n_particles);
    const CounterRng noise(
        derive_stream(seed, kPurposeSdeNoise, static_cast<std::uint64_t>(path)));
    PathOutcome& outcome = outcomes[static_cast<std::size_t>(path)];
    for (std::uint64_t s = 0; s < max_steps; ++s) {
      step(ensemble, cfg, noise, s);
      if ((s + 1) % kCheckStride != 0) {
        continue;
      }
      const OrderParameter op = order_parameter(ensemble.phases);
      if (op.magnitude > out.threshold) {
        const CircleGrid grid;
        outcome.crossed = true;
        outcome.time = static_cast<double>(s + 1) * dt;
        outcome.center = project_to_manifold(EmpiricalMeasure(ensemble.phases),
                                             coupling, op.phase, grid);
        return;
      }
    }
  });

  double cos_sum = 0.0;
  double sin_sum = 0.0;
  for (const PathOutcome& outcome : outcomes) {
    if (!outcome.crossed) {
      ++out.timeout_count;
      continue;
    }
    out.centers.push_back(outcome.center);
    out.crossing_times.push_back(outcome.time);
    cos_sum += std::cos(outcome.center);
    sin_sum += std::sin(outcome.center);
  }
  const auto n_crossed = static_cast<double>(out.centers.size());
  if (n_crossed > 0) {
    const double rbar_sq =
        (cos_sum * cos_sum + sin_sum * sin_sum) / (n_crossed * n_crossed);
    out.rayleigh_statistic = n_crossed * rbar_sq;
    out.rayleigh_p = rayleigh_p_value(out.rayleigh_statistic, n_crossed);
  }
  return out;
}

}  // namespace rotor
