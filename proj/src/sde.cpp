// Compiled with -ffast-math (see CMakeLists): the inner loop leans on
// vectorized trig and reassociated reductions. Results stay
// deterministic for a given binary because every buffer is 64-byte
// aligned and the loop trip counts are fixed by the configuration.
#include "rotor/sde.hpp"

#include <algorithm>
#include <cmath>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotor {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

template <typename T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) {}
  T* allocate(std::size_t n) {
    return static_cast<T*>(
        ::operator new(n * sizeof(T), std::align_val_t{64}));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t{64});
  }
  bool operator==(const AlignedAllocator&) const { return true; }
};

using AlignedVec = std::vector<double, AlignedAllocator<double>>;

double wrap_two_pi(double x) { return x - kTwoPi * std::floor(x / kTwoPi); }

std::int64_t step_count(const SimConfig& config) {
  return std::llround(config.t_end / config.dt);
}

}  // namespace

void validate(const SimConfig& config) {
  if (!(config.coupling >= 0.0)) {
    throw std::invalid_argument("SimConfig: coupling must be >= 0, got " +
                                std::to_string(config.coupling));
  }
  if (config.n_particles < 2) {
    throw std::invalid_argument("SimConfig: n_particles must be >= 2, got " +
                                std::to_string(config.n_particles));
  }
  if (!(config.dt > 0.0) || config.dt > 0.01) {
    throw std::invalid_argument("SimConfig: dt must lie in (0, 0.01], got " +
                                std::to_string(config.dt));
  }
  if (!(config.t_end >= 0.0)) {
    throw std::invalid_argument("SimConfig: t_end must be >= 0, got " +
                                std::to_string(config.t_end));
  }
  const double fitted =
      static_cast<double>(step_count(config)) * config.dt;
  if (std::abs(fitted - config.t_end) >
      1e-9 * std::max(1.0, std::abs(config.t_end))) {
    throw std::invalid_argument(
        "SimConfig: t_end must be an integer multiple of dt");
  }
  if (config.record_stride < 1) {
    throw std::invalid_argument("SimConfig: record_stride must be >= 1, got " +
                                std::to_string(config.record_stride));
  }
}

std::vector<double> drift(std::span<const double> phases, double coupling) {
  if (phases.empty()) {
    throw std::invalid_argument("drift: empty configuration");
  }
  const std::size_t n = phases.size();
  double sx = 0.0;
  double sy = 0.0;
  for (double phi : phases) {
    sx += std::cos(phi);
    sy += std::sin(phi);
  }
  const double gx = -coupling * sx / static_cast<double>(n);
  const double gy = coupling * sy / static_cast<double>(n);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = gx * std::sin(phases[j]) + gy * std::cos(phases[j]);
  }
  return out;
}

void step(PhaseEnsemble& ensemble, const SimConfig& config,
          const CounterRng& noise, std::uint64_t step_index) {
  const auto d = drift(ensemble.phases, config.coupling);
  const double sqrt_dt = std::sqrt(config.dt);
  for (std::size_t j = 0; j < ensemble.phases.size(); ++j) {
    double phi = ensemble.phases[j] + config.dt * d[j];
    if (!config.zero_noise) {
      phi += sqrt_dt * noise.normal(step_index, j);
    }
    ensemble.phases[j] = wrap_two_pi(phi);
  }
  ensemble.time += config.dt;
}

PhaseTrack run(const SimConfig& config, const PhaseEnsemble& initial,
               PhaseEnsemble* final_state) {
  validate(config);
  const int n = config.n_particles;
  if (static_cast<int>(initial.phases.size()) != n) {
    throw std::invalid_argument("run: initial ensemble size does not match "
                                "SimConfig.n_particles");
  }
  const std::int64_t steps = step_count(config);
  const std::int64_t stride = config.record_stride;
  const double dt = config.dt;
  const double sqrt_dt = std::sqrt(dt);
  const CounterRng noise(
      derive_stream(config.seed, kPurposeSdeNoise, config.stream_index));

  AlignedVec phi(initial.phases.begin(), initial.phases.end());
  AlignedVec sin_buf(phi.size());
  AlignedVec cos_buf(phi.size());
  AlignedVec xi(phi.size());

  PhaseTrack track;
  const std::size_t n_records =
      static_cast<std::size_t>(steps / stride) + 2;
  track.times.reserve(n_records);
  track.r_values.reserve(n_records);
  track.psi_unwrapped.reserve(n_records);

  double lift = 0.0;
  double prev_raw = 0.0;
  bool have_prev = false;
  const auto record = [&](std::int64_t s, double sx, double sy) {
    const double r =
        std::sqrt(sx * sx + sy * sy) / static_cast<double>(n);
    if (r < 1e-12) {
      ++track.unwrap_warnings;
    } else {
      const double raw = std::atan2(sy, sx);
      if (have_prev) {
        const double inc = std::remainder(raw - prev_raw, kTwoPi);
        if (std::abs(inc) >= M_PI_2) ++track.unwrap_warnings;
        lift += inc;
      } else {
        lift = raw;
        have_prev = true;
      }
      prev_raw = raw;
    }
    track.times.push_back(static_cast<double>(s) * dt);
    track.r_values.push_back(r);
    track.psi_unwrapped.push_back(lift);
  };

  for (std::int64_t s = 0;; ++s) {
    for (std::size_t j = 0; j < phi.size(); ++j) {
      sin_buf[j] = std::sin(phi[j]);
      cos_buf[j] = std::cos(phi[j]);
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
      sx += cos_buf[j];
      sy += sin_buf[j];
    }
    if (s % stride == 0 || s == steps) record(s, sx, sy);
    if (s == steps) break;

    const double gx = -config.coupling * sx / static_cast<double>(n);
    const double gy = config.coupling * sy / static_cast<double>(n);
    if (config.zero_noise) {
      for (std::size_t j = 0; j < phi.size(); ++j) {
        phi[j] = wrap_two_pi(phi[j] +
                             dt * (gx * sin_buf[j] + gy * cos_buf[j]));
      }
    } else {
      const std::uint64_t s_index = static_cast<std::uint64_t>(s);
      for (std::size_t j = 0; j < phi.size(); ++j) {
        xi[j] = noise.normal(s_index, j);
      }
      for (std::size_t j = 0; j < phi.size(); ++j) {
        phi[j] = wrap_two_pi(phi[j] + dt * (gx * sin_buf[j] + gy * cos_buf[j]) +
                             sqrt_dt * xi[j]);
      }
    }
  }

  if (final_state != nullptr) {
    final_state->phases.assign(phi.begin(), phi.end());
    final_state->time = initial.time + static_cast<double>(steps) * dt;
  }
  return track;
}

PhaseEnsemble sample_equally_spaced(int n) {
  if (n < 1) throw std::invalid_argument("sample_equally_spaced: n must be >= 1");
  PhaseEnsemble e;
  e.phases.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    e.phases[static_cast<std::size_t>(j)] =
        kTwoPi * static_cast<double>(j) / static_cast<double>(n);
  }
  return e;
}

PhaseEnsemble sample_quantiles(const StationaryProfile& q, int n) {
  if (n < 1) throw std::invalid_argument("sample_quantiles: n must be >= 1");
  PhaseEnsemble e;
  e.phases.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    e.phases[static_cast<std::size_t>(j)] = q.quantile(u);
  }
  return e;
}

PhaseEnsemble sample_iid(const StationaryProfile& q, int n,
                         SequentialRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_iid: n must be >= 1");
  PhaseEnsemble e;
  e.phases.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    // uniform() covers (0, 1]; shift by half an ulp-of-53-bits into the
    // open interval the quantile requires.
    const double u = rng.uniform() - 0x1p-54;
    e.phases[static_cast<std::size_t>(j)] = q.quantile(u);
  }
  return e;
}

PhaseEnsemble sample_iid_density(const GridDensity& density, int n,
                                 SequentialRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_iid_density: n must be >= 1");
  for (double v : density.values()) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(
          "sample_iid_density: density must be strictly positive");
    }
  }
  const double mass = density.mass();
  if (std::abs(mass - 1.0) > 1e-8) {
    throw std::invalid_argument(
        "sample_iid_density: density mass " + std::to_string(mass) +
        " is not 1");
  }

  const auto& grid = density.grid();
  auto cdf = density.cdf_on_grid();
  cdf.push_back(1.0);  // value at theta = 2 pi closes the table

  PhaseEnsemble e;
  e.phases.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double u = rng.uniform() - 0x1p-54;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t cell =
        static_cast<std::size_t>(std::distance(cdf.begin(), it)) - 1;
    const double f_lo = cdf[cell];
    const double f_hi = cdf[cell + 1];
    const double frac = f_hi > f_lo ? (u - f_lo) / (f_hi - f_lo) : 0.0;
    e.phases[static_cast<std::size_t>(j)] =
        wrap_two_pi(grid.node(static_cast<int>(cell)) +
                    frac * grid.spacing());
  }
  return e;
}

}  // namespace rotor
