#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rotor/grid.hpp"
#include "rotor/pde.hpp"
#include "rotor/stationary.hpp"

namespace {

// Frozen by tools/oracle_gen: free energy of the synchronized profile.
struct FrozenEnergy {
  double coupling;
  double value;
};

constexpr FrozenEnergy kFrozenEnergies[] = {
    {1.2, -0.935284298725962794},
    {1.5, -0.99897053398701163},
    {2.0, -1.1540462543702682},
    {5.0, -2.39741438142103447},
};

constexpr double kUniformEnergy = -0.918938533204672742;

std::complex<double> imag_unit() { return {0.0, 1.0}; }

// Projection of real nodal samples onto mode k in the convention
// c_k = (1/2pi) int f e^{-ik theta}.
std::complex<double> project_mode(const rotor::CircleGrid& grid,
                                  const std::vector<double>& values, int k) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    acc += values[static_cast<std::size_t>(i)] *
           std::exp(-imag_unit() * static_cast<double>(k) * grid.node(i));
  }
  return acc / static_cast<double>(grid.size());
}

std::vector<double> spectral_derivative(const rotor::CircleGrid& grid,
                                        const std::vector<double>& values) {
  const int n = grid.size();
  std::vector<std::complex<double>> data(values.begin(), values.end());
  rotor::fourier_transform(data, -1);
  for (int m = 0; m < n; ++m) {
    const int freq = m <= n / 2 ? m : m - n;
    data[static_cast<std::size_t>(m)] *=
        freq == n / 2 ? 0.0 : imag_unit() * static_cast<double>(freq);
  }
  rotor::fourier_transform(data, 1);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        data[static_cast<std::size_t>(i)].real() / static_cast<double>(n);
  }
  return out;
}

}  // namespace

TEST_CASE("coefficient right-hand side matches a collocation oracle") {
  const int truncation = 8;
  const double coupling = 1.7;
  std::vector<std::complex<double>> modes(truncation);
  for (int k = 1; k <= truncation; ++k) {
    modes[static_cast<std::size_t>(k - 1)] =
        std::pow(0.45, k) * std::complex<double>(0.08 + 0.01 * k, -0.05 + 0.02 * k);
  }
  const rotor::FourierDensity density(truncation, modes);

  const rotor::CircleGrid grid(256);
  const auto p = rotor::density_on_grid(density, grid);

  // Mean-field velocity from the first mode alone.
  const std::complex<double> c1 = density.mode(1);
  std::vector<double> flux(p.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double theta = grid.node(i);
    const double velocity = -coupling * 2.0 * M_PI *
                            (c1.real() * std::sin(theta) +
                             c1.imag() * std::cos(theta));
    flux[static_cast<std::size_t>(i)] = velocity * p[static_cast<std::size_t>(i)];
  }
  const auto p_prime = spectral_derivative(grid, p);
  const auto p_second = spectral_derivative(grid, p_prime);
  const auto flux_prime = spectral_derivative(grid, flux);
  std::vector<double> time_derivative(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    time_derivative[i] = 0.5 * p_second[i] - flux_prime[i];
  }

  const auto fast = rotor::rhs(density, coupling);
  REQUIRE(static_cast<int>(fast.size()) == truncation);
  for (int k = 1; k <= truncation; ++k) {
    const auto oracle = project_mode(grid, time_derivative, k);
    CHECK(std::abs(fast[static_cast<std::size_t>(k - 1)] - oracle) < 1e-12);
  }
}

TEST_CASE("synchronized profiles are fixed points of the flow") {
  for (double coupling : {1.5, 2.0}) {
    const rotor::StationaryProfile q(coupling, 0.7);
    const auto density = rotor::FourierDensity::from_profile(q, 64);
    const auto derivative = rotor::rhs(density, coupling);
    for (const auto& d : derivative) {
      CHECK(std::abs(d) < 1e-14);
    }
  }
}

TEST_CASE("the flat density never moves") {
  const rotor::FourierDensity uniform(32);
  const auto evolved = rotor::evolve(uniform, 2.0, 1.0, 1e-3);
  for (int k = 1; k <= 32; ++k) {
    CHECK(evolved.mode(k) == std::complex<double>(0.0, 0.0));
  }
}

TEST_CASE("even data decays by pure diffusion when the first mode is zero") {
  // p0 = (1 + 0.4 cos 2 theta) / 2 pi: with c_1 = 0 the band coupling
  // vanishes identically and each mode obeys the heat factor exactly.
  rotor::FourierDensity density(16);
  const double c2 = 0.1 / M_PI;
  density.set_mode(2, c2);
  const double t_end = 10.0;
  const auto evolved = rotor::evolve(density, 2.0, t_end, 1e-3);

  CHECK(evolved.mode(1) == std::complex<double>(0.0, 0.0));
  CHECK(evolved.mode(3) == std::complex<double>(0.0, 0.0));
  const double expected = c2 * std::exp(-2.0 * t_end);
  CHECK(evolved.mode(2).real() == doctest::Approx(expected).epsilon(1e-10));
  CHECK(evolved.mode(2).imag() == 0.0);

  const rotor::CircleGrid grid(128);
  const auto values = rotor::density_on_grid(evolved, grid);
  double sup = 0.0;
  for (double v : values) {
    sup = std::max(sup, std::abs(v - 1.0 / (2.0 * M_PI)));
  }
  CHECK(sup < 1e-6);
}

TEST_CASE("free energy matches frozen references") {
  const rotor::CircleGrid grid(512);
  const rotor::FourierDensity uniform(64);
  CHECK(rotor::free_energy(uniform, 2.0, grid) ==
        doctest::Approx(kUniformEnergy).epsilon(1e-12));
  for (const auto& row : kFrozenEnergies) {
    const rotor::StationaryProfile q(row.coupling, 0.0);
    const auto density = rotor::FourierDensity::from_profile(q, 64);
    CHECK(rotor::free_energy(density, row.coupling, grid) ==
          doctest::Approx(row.value).epsilon(1e-9));
  }
  // At coupling 10 the profile minimum sits below double roundoff, so
  // the reconstructed tail touches zero and the entropy guard fires.
  const rotor::StationaryProfile sharp(10.0, 0.0);
  const auto sharp_density = rotor::FourierDensity::from_profile(sharp, 64);
  CHECK_THROWS_AS(rotor::free_energy(sharp_density, 10.0, grid),
                  std::domain_error);
}

TEST_CASE("free energy never increases along the flow") {
  const rotor::CircleGrid grid(256);
  const double coupling = 2.0;
  const double dt = 1e-3;
  rotor::FourierDensity density(48);
  density.set_mode(1, 0.15 / M_PI);
  density.set_mode(2, std::complex<double>(0.0, 0.1 / M_PI));
  double previous = rotor::free_energy(density, coupling, grid);
  double worst_rise = 0.0;
  for (int step = 0; step < 10000; ++step) {
    density = rotor::evolve(density, coupling, dt, dt);
    const double current = rotor::free_energy(density, coupling, grid);
    worst_rise = std::max(worst_rise, current - previous);
    previous = current;
  }
  CHECK(worst_rise <= 1e-10);
  // By t = 10 the flow has come close to a synchronized profile.
  const rotor::StationaryProfile q(coupling, 0.0);
  const auto limit = rotor::FourierDensity::from_profile(q, 48);
  CHECK(previous == doctest::Approx(rotor::free_energy(limit, coupling, grid))
                        .epsilon(1e-4));
}

TEST_CASE("the flow commutes with rotations") {
  const double coupling = 2.0;
  const double shift = 0.9;
  rotor::FourierDensity density(24);
  density.set_mode(1, std::complex<double>(0.12 / M_PI, -0.03 / M_PI));
  density.set_mode(3, 0.04 / M_PI);
  const auto evolve_then_rotate =
      rotor::rotated(rotor::evolve(density, coupling, 0.5, 1e-3), shift);
  const auto rotate_then_evolve =
      rotor::evolve(rotor::rotated(density, shift), coupling, 0.5, 1e-3);
  for (int k = 1; k <= 24; ++k) {
    CHECK(std::abs(evolve_then_rotate.mode(k) - rotate_then_evolve.mode(k)) <
          1e-12);
  }
}

TEST_CASE("grid values round-trip through the spectral representation") {
  const rotor::CircleGrid grid(256);
  std::vector<double> values(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double theta = grid.node(i);
    values[static_cast<std::size_t>(i)] =
        (1.0 + 0.4 * std::cos(theta) + 0.2 * std::cos(3.0 * theta) -
         0.1 * std::sin(2.0 * theta)) /
        (2.0 * M_PI);
  }
  const auto density = rotor::FourierDensity::from_values(grid, values, 8);
  CHECK(std::abs(density.mode(1) - std::complex<double>(0.1 / M_PI, 0.0)) <
        1e-14);
  CHECK(std::abs(density.mode(2) - std::complex<double>(0.0, 0.025 / M_PI)) <
        1e-14);
  CHECK(std::abs(density.mode(3) - std::complex<double>(0.05 / M_PI, 0.0)) <
        1e-14);
  const auto back = rotor::density_on_grid(density, grid);
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(std::abs(back[i] - values[i]) < 1e-14);
  }

  std::vector<double> biased = values;
  for (double& v : biased) v *= 1.02;
  CHECK_THROWS_AS(rotor::FourierDensity::from_values(grid, biased, 8),
                  std::invalid_argument);
}

TEST_CASE("mode accessors pin the mass and reflect negative indices") {
  rotor::FourierDensity density(8);
  density.set_mode(2, std::complex<double>(0.01, -0.02));
  CHECK(density.mode(0) == std::complex<double>(1.0 / (2.0 * M_PI), 0.0));
  CHECK(density.mode(-2) == std::conj(density.mode(2)));
  CHECK(density.mode(9) == std::complex<double>(0.0, 0.0));
  CHECK(density.mode(-9) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(density.set_mode(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(density.set_mode(9, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rotor::FourierDensity(0), std::invalid_argument);
}

TEST_CASE("evolve validates its step size and time horizon") {
  const rotor::FourierDensity density(8);
  CHECK_THROWS_AS(rotor::evolve(density, 2.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rotor::evolve(density, 2.0, 1.0, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(rotor::evolve(density, 2.0, 0.0105, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(rotor::evolve(density, 2.0, -1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("runaway modes abort the integration") {
  rotor::FourierDensity density(8);
  density.set_mode(1, 20.0);
  CHECK_THROWS_AS(rotor::evolve(density, 2.0, 0.1, 1e-3), std::runtime_error);
}
