#include "rotor/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rotor {
namespace {

constexpr double kMassMode = 1.0 / (2.0 * M_PI);

int checked_truncation(int truncation) {
  if (truncation < 1) {
    throw std::invalid_argument("FourierDensity: truncation must be >= 1");
  }
  return truncation;
}

}  // namespace

FourierDensity::FourierDensity(int truncation)
    : truncation_(checked_truncation(truncation)),
      modes_(static_cast<std::size_t>(truncation_), {0.0, 0.0}) {}

FourierDensity::FourierDensity(int truncation,
                               std::vector<std::complex<double>> modes)
    : truncation_(checked_truncation(truncation)), modes_(std::move(modes)) {
  if (static_cast<int>(modes_.size()) != truncation_) {
    throw std::invalid_argument(
        "FourierDensity: expected one coefficient per mode 1..M");
  }
}

FourierDensity FourierDensity::from_profile(const StationaryProfile& q,
                                            int truncation) {
  FourierDensity d(truncation);
  for (int k = 1; k <= truncation; ++k) {
    const double mag = q.fourier_coeff(k);
    const double arg = -static_cast<double>(k) * q.center();
    d.set_mode(k, std::polar(mag, arg));
  }
  return d;
}

FourierDensity FourierDensity::from_values(const CircleGrid& grid,
                                           const std::vector<double>& values,
                                           int truncation) {
  const double mass = grid.integrate(values);
  if (std::abs(mass - 1.0) > 1e-8) {
    throw std::invalid_argument("FourierDensity: density mass " +
                                std::to_string(mass) + " is not 1");
  }
  FourierDensity d(truncation);
  const int n = grid.size();
  for (int k = 1; k <= truncation; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      const double ang = static_cast<double>(k) * grid.node(i);
      acc += values[static_cast<std::size_t>(i)] *
             std::complex<double>(std::cos(ang), -std::sin(ang));
    }
    d.set_mode(k, acc / static_cast<double>(n));
  }
  return d;
}

std::complex<double> FourierDensity::mode(int k) const {
  if (k == 0) return {kMassMode, 0.0};
  const int a = std::abs(k);
  if (a > truncation_) return {0.0, 0.0};
  const auto c = modes_[static_cast<std::size_t>(a - 1)];
  return k > 0 ? c : std::conj(c);
}

void FourierDensity::set_mode(int k, std::complex<double> value) {
  if (k < 1 || k > truncation_) {
    throw std::invalid_argument("FourierDensity::set_mode: mode " +
                                std::to_string(k) + " out of range");
  }
  modes_[static_cast<std::size_t>(k - 1)] = value;
}

FourierDensity rotated(const FourierDensity& density, double shift) {
  FourierDensity out(density.truncation());
  for (int k = 1; k <= density.truncation(); ++k) {
    const double ang = -static_cast<double>(k) * shift;
    out.set_mode(k, density.mode(k) *
                        std::complex<double>(std::cos(ang), std::sin(ang)));
  }
  return out;
}

std::vector<std::complex<double>> rhs(const FourierDensity& density,
                                      double coupling) {
  const int m = density.truncation();
  const std::complex<double> c1 = density.mode(1);
  const std::complex<double> c1_bar = std::conj(c1);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    const double kk = static_cast<double>(k);
    const std::complex<double> nonlinear =
        M_PI * coupling * kk *
        (c1 * density.mode(k - 1) - c1_bar * density.mode(k + 1));
    out[static_cast<std::size_t>(k - 1)] =
        -0.5 * kk * kk * density.mode(k) + nonlinear;
  }
  return out;
}

FourierDensity evolve(const FourierDensity& density, double coupling,
                      double t_end, double dt) {
  if (!(dt > 0.0) || dt > 0.01) {
    throw std::invalid_argument("evolve: dt must lie in (0, 0.01], got " +
                                std::to_string(dt));
  }
  if (!(t_end >= 0.0)) {
    throw std::invalid_argument("evolve: t_end must be >= 0");
  }
  const std::int64_t steps = std::llround(t_end / dt);
  if (std::abs(static_cast<double>(steps) * dt - t_end) >
      1e-9 * std::max(1.0, std::abs(t_end))) {
    throw std::invalid_argument("evolve: t_end must be an integer multiple of dt");
  }

  const int m = density.truncation();
  std::vector<double> decay(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    decay[static_cast<std::size_t>(k - 1)] =
        std::exp(-0.5 * static_cast<double>(k) * static_cast<double>(k) * dt);
  }

  FourierDensity state = density;
  for (std::int64_t s = 0; s < steps; ++s) {
    const auto derivative = rhs(state, coupling);
    for (int k = 1; k <= m; ++k) {
      const std::size_t i = static_cast<std::size_t>(k - 1);
      // The stiff -k^2/2 part of the derivative is handled by the
      // integrating factor; only the nonlinear remainder is stepped
      // explicitly.
      const std::complex<double> nonlinear =
          derivative[i] +
          0.5 * static_cast<double>(k) * static_cast<double>(k) *
              state.mode(k);
      state.set_mode(k, decay[i] * (state.mode(k) + dt * nonlinear));
    }
    for (int k = 1; k <= m; ++k) {
      if (std::abs(state.mode(k)) > 10.0) {
        throw std::runtime_error(
            "evolve: mode " + std::to_string(k) + " reached magnitude " +
            std::to_string(std::abs(state.mode(k))) + " at t = " +
            std::to_string(static_cast<double>(s + 1) * dt) + ", aborting");
      }
    }
  }
  return state;
}

double free_energy(const FourierDensity& density, double coupling,
                   const CircleGrid& grid) {
  const auto values = density_on_grid(density, grid);
  std::vector<double> entropy(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) {
      throw std::domain_error(
          "free_energy: reconstructed density is " + std::to_string(values[i]) +
          " at theta = " + std::to_string(grid.node(static_cast<int>(i))) +
          "; entropy undefined");
    }
    entropy[i] = values[i] * std::log(values[i]);
  }
  const double twopi_sq = 4.0 * M_PI * M_PI;
  return 0.5 * grid.integrate(entropy) -
         0.5 * coupling * twopi_sq * std::norm(density.mode(1));
}

std::vector<double> density_on_grid(const FourierDensity& density,
                                    const CircleGrid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.size()), kMassMode);
  for (int k = 1; k <= density.truncation(); ++k) {
    const auto c = density.mode(k);
    for (int i = 0; i < grid.size(); ++i) {
      const double ang = static_cast<double>(k) * grid.node(i);
      out[static_cast<std::size_t>(i)] +=
          2.0 * (c.real() * std::cos(ang) - c.imag() * std::sin(ang));
    }
  }
  return out;
}

}  // namespace rotor
