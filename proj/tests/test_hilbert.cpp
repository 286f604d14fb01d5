#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rotor/bessel.hpp"
#include "rotor/grid.hpp"
#include "rotor/hilbert.hpp"
#include "rotor/measures.hpp"
#include "rotor/rng.hpp"
#include "rotor/stationary.hpp"

namespace {

// Frozen by tools/oracle_gen: squared weighted norm of q' at each
// coupling, equal to 1 - I_0(2Kr)^{-2} in closed form.
struct FrozenNorm {
  double coupling;
  double qprime_norm_sq;
};

constexpr FrozenNorm kFrozenNorms[] = {
    {1.2, 0.54065452382868128},
    {1.5, 0.84943276465436593},
    {2.0, 0.975418158993571475},
    {5.0, 0.999999646153861722},
};

// Distance between the flat density and the profile at K = 2, frozen
// from the quadrature oracle.
constexpr double kUniformDistK2 = 0.491910889833499841;

std::vector<double> profile_deriv_values(const rotor::StationaryProfile& q,
                                         const rotor::CircleGrid& grid) {
  std::vector<double> values(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    values[static_cast<std::size_t>(i)] = q.density_deriv(grid.node(i));
  }
  return values;
}

std::vector<double> inv_density_values(const rotor::StationaryProfile& q,
                                       const rotor::CircleGrid& grid) {
  std::vector<double> values(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    values[static_cast<std::size_t>(i)] = q.inv_density(grid.node(i));
  }
  return values;
}

// Spectral derivative of periodic nodal samples.
std::vector<double> spectral_derivative(const rotor::CircleGrid& grid,
                                        const std::vector<double>& values) {
  const int n = grid.size();
  std::vector<std::complex<double>> data(values.begin(), values.end());
  rotor::fourier_transform(data, -1);
  std::vector<std::complex<double>> diff(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const int freq = m <= n / 2 ? m : m - n;
    if (freq == n / 2) {
      diff[static_cast<std::size_t>(m)] = 0.0;
    } else {
      diff[static_cast<std::size_t>(m)] =
          std::complex<double>(0.0, static_cast<double>(freq)) *
          data[static_cast<std::size_t>(m)];
    }
  }
  rotor::fourier_transform(diff, 1);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        diff[static_cast<std::size_t>(i)].real() / static_cast<double>(n);
  }
  return out;
}

}  // namespace

TEST_CASE("weighted norm identity holds along three independent routes") {
  const rotor::CircleGrid grid(512);
  for (double coupling : {1.5, 2.0, 5.0}) {
    const rotor::StationaryProfile q(coupling, 0.0);

    // Route 1: quadrature of (kappa')^2 q with kappa' from the spectral
    // derivative of the sampled kernel.
    std::vector<double> kappa(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
      kappa[static_cast<std::size_t>(i)] = q.kappa(grid.node(i));
    }
    const auto kappa_deriv = spectral_derivative(grid, kappa);
    std::vector<double> integrand(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
      const double kp = kappa_deriv[static_cast<std::size_t>(i)];
      integrand[static_cast<std::size_t>(i)] = kp * kp * q.density(grid.node(i));
    }
    const double route1 = grid.integrate(integrand);

    // Route 2: 1 - (2 pi)^2 / int(1/q).
    const double route2 =
        1.0 - std::pow(2.0 * M_PI, 2) / grid.integrate(inv_density_values(q, grid));

    // Route 3: the weighted norm of q' itself.
    const auto qprime = rotor::HMinusOneElement::from_density_values(
        grid, profile_deriv_values(q, grid));
    const double route3 =
        std::pow(rotor::h1w_norm(qprime, inv_density_values(q, grid)), 2);

    CHECK(std::abs(route1 - route2) < 1e-8);
    CHECK(std::abs(route2 - route3) < 1e-8);
    CHECK(std::abs(route1 - route3) < 1e-8);
  }
}

TEST_CASE("weighted norm of the profile derivative matches frozen values") {
  const rotor::CircleGrid grid(1024);
  for (const auto& row : kFrozenNorms) {
    const rotor::StationaryProfile q(row.coupling, 0.0);
    const auto qprime = rotor::HMinusOneElement::from_density_values(
        grid, profile_deriv_values(q, grid));
    const double norm_sq =
        std::pow(rotor::h1w_norm(qprime, inv_density_values(q, grid)), 2);
    CHECK(norm_sq == doctest::Approx(row.qprime_norm_sq).epsilon(1e-9));
  }
}

TEST_CASE("diffusion coefficient is the reciprocal weighted norm of q'") {
  const rotor::CircleGrid grid(1024);
  for (double coupling : {1.5, 2.0, 5.0}) {
    const rotor::StationaryProfile q(coupling, 0.0);
    const auto qprime = rotor::HMinusOneElement::from_density_values(
        grid, profile_deriv_values(q, grid));
    const double norm = rotor::h1w_norm(qprime, inv_density_values(q, grid));
    CHECK(std::abs(rotor::diffusion_coefficient(coupling) * norm - 1.0) < 1e-8);
  }
}

TEST_CASE("plain norm of cos(p theta) is sqrt(pi)/p") {
  const rotor::CircleGrid grid(512);
  const auto ones = rotor::weight_values(grid, [](double) { return 1.0; });
  for (int p : {2, 8, 16}) {
    std::vector<double> values(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
      values[static_cast<std::size_t>(i)] = std::cos(p * grid.node(i));
    }
    const auto u = rotor::HMinusOneElement::from_density_values(grid, values);
    CHECK(rotor::h1w_norm(u, ones) ==
          doctest::Approx(std::sqrt(M_PI) / p).epsilon(1e-10));
  }
}

TEST_CASE("weighted norm of high modes approaches the Bessel constant") {
  // p * ||cos(p theta)||_{-1,1/q} tends to sqrt(2) pi I_0(2Kr).
  const double coupling = 2.0;
  const rotor::CircleGrid grid(512);
  const rotor::StationaryProfile q(coupling, 0.0);
  const auto weight = inv_density_values(q, grid);
  const double x = 2.0 * coupling * q.degree();
  const double limit = std::sqrt(2.0) * M_PI * rotor::bessel_i(0, x);
  for (int p : {8, 16, 32}) {
    std::vector<double> values(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
      values[static_cast<std::size_t>(i)] = std::cos(p * grid.node(i));
    }
    const auto u = rotor::HMinusOneElement::from_density_values(grid, values);
    const double scaled = p * rotor::h1w_norm(u, weight);
    CHECK(std::abs(scaled / limit - 1.0) < 1e-8);
  }
}

TEST_CASE("fourier norm of the zero element and of single pairs") {
  std::vector<std::complex<double>> zero(9, 0.0);
  CHECK(rotor::fourier_hminus_norm(zero, 1) == 0.0);
  CHECK(rotor::fourier_hminus_norm(zero, 2) == 0.0);

  // Unit pair at |m| = 1: ((1/2pi) * 2)^{1/2} = 1/sqrt(pi).
  std::vector<std::complex<double>> pair1(3, 0.0);
  pair1[1] = 1.0;
  CHECK(rotor::fourier_hminus_norm(pair1, 1) ==
        doctest::Approx(0.5641895835477563).epsilon(1e-14));

  // cos(2 theta) has u_2 = pi: norms sqrt(pi)/2 and sqrt(pi)/4.
  std::vector<std::complex<double>> pair2(4, 0.0);
  pair2[2] = M_PI;
  CHECK(rotor::fourier_hminus_norm(pair2, 1) ==
        doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-13));
  CHECK(rotor::fourier_hminus_norm(pair2, 2) ==
        doctest::Approx(std::sqrt(M_PI) / 4.0).epsilon(1e-13));
}

TEST_CASE("fourier and primitive norms agree exactly on band-limited elements") {
  const rotor::CircleGrid grid(512);
  const auto ones = rotor::weight_values(grid, [](double) { return 1.0; });
  rotor::SequentialRng rng(rotor::derive_stream(7, rotor::kPurposeBootstrap, 0));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(7, 0.0);
    std::vector<double> b(7, 0.0);
    std::vector<std::complex<double>> coeffs(7, 0.0);
    for (int m = 1; m <= 6; ++m) {
      a[static_cast<std::size_t>(m)] = 2.0 * rng.uniform() - 1.0;
      b[static_cast<std::size_t>(m)] = 2.0 * rng.uniform() - 1.0;
      coeffs[static_cast<std::size_t>(m)] =
          M_PI * std::complex<double>(a[static_cast<std::size_t>(m)],
                                      -b[static_cast<std::size_t>(m)]);
    }
    std::vector<double> values(static_cast<std::size_t>(grid.size()), 0.0);
    for (int i = 0; i < grid.size(); ++i) {
      const double theta = grid.node(i);
      for (int m = 1; m <= 6; ++m) {
        values[static_cast<std::size_t>(i)] +=
            a[static_cast<std::size_t>(m)] * std::cos(m * theta) +
            b[static_cast<std::size_t>(m)] * std::sin(m * theta);
      }
    }
    const auto u = rotor::HMinusOneElement::from_density_values(grid, values);
    const double primitive_route = rotor::h1w_norm(u, ones);
    const double fourier_route = rotor::fourier_hminus_norm(coeffs, 1);
    CHECK(primitive_route / fourier_route == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("fourier norm rejects mass and unsupported exponents") {
  std::vector<std::complex<double>> with_mass(3, 0.0);
  with_mass[0] = 0.5;
  CHECK_THROWS_AS(rotor::fourier_hminus_norm(with_mass, 1), std::invalid_argument);
  std::vector<std::complex<double>> ok(3, 0.0);
  ok[1] = 1.0;
  CHECK_THROWS_AS(rotor::fourier_hminus_norm(ok, 3), std::invalid_argument);
  CHECK_THROWS_AS(rotor::fourier_hminus_norm(ok, 0), std::invalid_argument);
}

TEST_CASE("norm of a difference vanishes for equal measures") {
  const rotor::CircleGrid grid(512);
  const rotor::StationaryProfile q(2.0, 1.0);
  const auto one = [](double) { return 1.0; };
  CHECK(rotor::h1w_norm_of_difference(q, q, one, grid) < 1e-14);
}

TEST_CASE("any two probability measures are within sqrt(2 pi)") {
  const rotor::CircleGrid grid(512);
  const auto one = [](double) { return 1.0; };
  const double bound = std::sqrt(2.0 * M_PI);

  const rotor::StationaryProfile q(5.0, 0.0);
  const rotor::EmpiricalMeasure lump(std::vector<double>{3.1, 3.11, 3.12});
  CHECK(rotor::h1w_norm_of_difference(lump, q, one, grid) <= bound);

  rotor::SequentialRng rng(rotor::derive_stream(11, rotor::kPurposeBootstrap, 0));
  std::vector<double> atoms(40);
  for (double& a : atoms) a = 2.0 * M_PI * rng.uniform();
  const rotor::EmpiricalMeasure cloud(atoms);
  CHECK(rotor::h1w_norm_of_difference(cloud, lump, one, grid) <= bound);
}

TEST_CASE("weight ratio bounds the norm ratio") {
  const rotor::CircleGrid grid(512);
  const rotor::StationaryProfile q(2.0, 0.0);
  const auto w1 = inv_density_values(q, grid);
  const auto w2 = rotor::weight_values(grid, [](double) { return 1.0; });
  double w1_max = 0.0;
  double w1_min = 1e300;
  for (double w : w1) {
    w1_max = std::max(w1_max, w);
    w1_min = std::min(w1_min, w);
  }
  rotor::SequentialRng rng(rotor::derive_stream(13, rotor::kPurposeBootstrap, 0));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> values(static_cast<std::size_t>(grid.size()), 0.0);
    for (int m = 1; m <= 5; ++m) {
      const double a = 2.0 * rng.uniform() - 1.0;
      const double b = 2.0 * rng.uniform() - 1.0;
      for (int i = 0; i < grid.size(); ++i) {
        values[static_cast<std::size_t>(i)] +=
            a * std::cos(m * grid.node(i)) + b * std::sin(m * grid.node(i));
      }
    }
    const auto u = rotor::HMinusOneElement::from_density_values(grid, values);
    const double n1 = rotor::h1w_norm(u, w1);
    const double n2 = rotor::h1w_norm(u, w2);
    CHECK(n1 / n2 <= std::sqrt(w1_max / 1.0) * (1.0 + 1e-12));
    CHECK(n2 / n1 <= std::sqrt(1.0 / w1_min) * (1.0 + 1e-12));
  }
}

TEST_CASE("weight functions must be strictly positive") {
  const rotor::CircleGrid grid(64);
  CHECK_THROWS_AS(rotor::weight_values(grid, [](double t) { return t - 3.0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(rotor::weight_values(grid, [](double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("density values with mass cannot form an element") {
  const rotor::CircleGrid grid(64);
  std::vector<double> biased(static_cast<std::size_t>(grid.size()), 0.01);
  CHECK_THROWS_AS(rotor::HMinusOneElement::from_density_values(grid, biased),
                  std::invalid_argument);
}

TEST_CASE("distance from the flat density to the family at K = 2") {
  const rotor::CircleGrid grid(512);
  std::vector<double> flat(static_cast<std::size_t>(grid.size()),
                           1.0 / (2.0 * M_PI));
  const rotor::GridDensity uniform(grid, flat);
  CHECK(rotor::dist_to_manifold(uniform, 2.0, grid) ==
        doctest::Approx(kUniformDistK2).epsilon(1e-10));
}

TEST_CASE("profiles are at distance zero from their own family") {
  const rotor::CircleGrid grid(512);
  for (double center : {0.0, 1.4}) {
    const rotor::StationaryProfile q(2.0, center);
    CHECK(rotor::dist_to_manifold(q, 2.0, grid) < 1e-9);
  }
}

TEST_CASE("manifold distance is rotation invariant") {
  const rotor::CircleGrid grid(512);
  const rotor::StationaryProfile q(2.0, 0.0);
  const int n = grid.size();
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] =
        q.density(grid.node(i)) + 2e-4 * std::cos(3.0 * grid.node(i));
  }
  const rotor::GridDensity mu(grid, values);

  // Rotation by a whole number of grid steps resamples exactly.
  const int shift = 41;
  std::vector<double> rolled(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rolled[static_cast<std::size_t>(i)] =
        values[static_cast<std::size_t>((i - shift + n) % n)];
  }
  const rotor::GridDensity mu_rot(grid, rolled);
  CHECK(std::abs(rotor::dist_to_manifold(mu, 2.0, grid) -
                 rotor::dist_to_manifold(mu_rot, 2.0, grid)) < 1e-10);
}

TEST_CASE("tangent functional vanishes exactly on the family") {
  const rotor::CircleGrid grid(512);
  for (double center : {0.0, 0.9, 4.4}) {
    const rotor::StationaryProfile q(2.0, center);
    CHECK(std::abs(rotor::tangent_functional(q, center, 2.0, grid)) < 1e-12);
  }
}

TEST_CASE("tangent functional slope equals minus the squared norm of q'") {
  const rotor::CircleGrid grid(512);
  const double coupling = 2.0;
  const double eps = 1e-5;
  const rotor::StationaryProfile shifted(coupling, eps);
  const double value = rotor::tangent_functional(shifted, 0.0, coupling, grid);
  const rotor::StationaryProfile q(coupling, 0.0);
  const auto qprime = rotor::HMinusOneElement::from_density_values(
      grid, profile_deriv_values(q, grid));
  const double norm_sq =
      std::pow(rotor::h1w_norm(qprime, inv_density_values(q, grid)), 2);
  CHECK(value / eps == doctest::Approx(-norm_sq).epsilon(1e-4));
}

TEST_CASE("tangent functional agrees with the primitive inner product") {
  const rotor::CircleGrid grid(512);
  const double coupling = 2.0;
  const rotor::StationaryProfile q(coupling, 0.0);
  const int n = grid.size();
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double theta = grid.node(i);
    values[static_cast<std::size_t>(i)] =
        q.density(theta) + 1e-4 * (std::sin(theta) + 0.5 * std::cos(2.0 * theta));
  }
  const rotor::GridDensity mu(grid, values);
  const double direct = rotor::tangent_functional(mu, 0.0, coupling, grid);

  const auto diff = rotor::HMinusOneElement::measure_difference(mu, q, grid);
  const auto qprime = rotor::HMinusOneElement::from_density_values(
      grid, profile_deriv_values(q, grid));
  const double via_primitives =
      rotor::h1w_inner_product(qprime, diff, inv_density_values(q, grid));
  CHECK(std::abs(direct - via_primitives) < 1e-8);
}

TEST_CASE("tangent functional is affine under mixtures") {
  const rotor::CircleGrid grid(512);
  const double coupling = 2.0;
  const rotor::StationaryProfile q(coupling, 0.0);
  const int n = grid.size();
  std::vector<double> va(static_cast<std::size_t>(n));
  std::vector<double> vb(static_cast<std::size_t>(n));
  std::vector<double> vmix(static_cast<std::size_t>(n));
  const double alpha = 0.3;
  for (int i = 0; i < n; ++i) {
    const double theta = grid.node(i);
    va[static_cast<std::size_t>(i)] = q.density(theta) + 2e-4 * std::sin(theta);
    vb[static_cast<std::size_t>(i)] =
        q.density(theta) + 2e-4 * std::cos(2.0 * theta);
    vmix[static_cast<std::size_t>(i)] = alpha * va[static_cast<std::size_t>(i)] +
                                        (1.0 - alpha) * vb[static_cast<std::size_t>(i)];
  }
  const double fa =
      rotor::tangent_functional(rotor::GridDensity(grid, va), 0.2, coupling, grid);
  const double fb =
      rotor::tangent_functional(rotor::GridDensity(grid, vb), 0.2, coupling, grid);
  const double fmix = rotor::tangent_functional(rotor::GridDensity(grid, vmix),
                                                0.2, coupling, grid);
  CHECK(fmix == doctest::Approx(alpha * fa + (1.0 - alpha) * fb).epsilon(1e-12));
}

TEST_CASE("projection returns the center of an exact profile") {
  const rotor::CircleGrid grid(512);
  for (double center : {0.0, 1.0, 5.5}) {
    const rotor::StationaryProfile q(2.0, center);
    const double proj = rotor::project_to_manifold(q, 2.0, center + 0.2, grid);
    const double dev = std::abs(proj - center);
    CHECK(std::min(dev, 2.0 * M_PI - dev) < 1e-9);
  }
}

TEST_CASE("even perturbations leave the projected center unmoved") {
  const rotor::CircleGrid grid(512);
  const double coupling = 2.0;
  const double psi0 = 0.8;
  const rotor::StationaryProfile q(coupling, psi0);
  const int n = grid.size();
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v = grid.node(i) - psi0;
    values[static_cast<std::size_t>(i)] =
        q.density(grid.node(i)) + 1e-3 * (0.3 * std::cos(v) + 0.2 * std::cos(2.0 * v));
  }
  const rotor::GridDensity mu(grid, values);
  const double proj = rotor::project_to_manifold(mu, coupling, psi0 + 0.1, grid);
  CHECK(std::abs(proj - psi0) < 1e-8);
}

TEST_CASE("projection is equivariant under rotations") {
  const rotor::CircleGrid grid(512);
  const double coupling = 2.0;
  const double psi0 = 0.5;
  const double shift = 1.7;
  const auto perturbed = [&](double center) {
    const rotor::StationaryProfile q(coupling, center);
    std::vector<double> values(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
      const double v = grid.node(i) - center;
      values[static_cast<std::size_t>(i)] =
          q.density(grid.node(i)) +
          5e-4 * (0.4 * std::sin(v) + 0.3 * std::cos(2.0 * v));
    }
    return rotor::GridDensity(grid, values);
  };
  const double base =
      rotor::project_to_manifold(perturbed(psi0), coupling, psi0, grid);
  const double rotated =
      rotor::project_to_manifold(perturbed(psi0 + shift), coupling,
                                 psi0 + shift, grid);
  CHECK(std::abs(rotated - base - shift) < 1e-8);
}

TEST_CASE("projection expansion has a cubic remainder") {
  // psi* = psi0 - (A/S)(1 - H1/S) + O(eps^3) with A the tangent pairing
  // of the perturbation, S the squared weighted norm of q', and H1 the
  // quadrature of (1 - c/q) against the perturbation. Halving eps must
  // shrink the defect by about 8.
  const double coupling = 1.2;
  const double psi0 = 0.3;
  const rotor::CircleGrid grid(1024);
  const rotor::StationaryProfile q(coupling, psi0);
  const double c = rotor::c_constant(coupling);
  const double S = 1.0 - 2.0 * M_PI * c;
  const int n = grid.size();

  std::vector<double> errors;
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    std::vector<double> values(static_cast<std::size_t>(n));
    double h1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double theta = grid.node(i);
      const double v = theta - psi0;
      const double h = eps * (0.35 * std::sin(v) + 0.2 * std::cos(2.0 * v));
      values[static_cast<std::size_t>(i)] = q.density(theta) + h;
      h1 += (1.0 - c * q.inv_density(theta)) * h;
    }
    h1 *= grid.spacing();
    const rotor::GridDensity mu(grid, values);
    const double pairing = rotor::tangent_functional(mu, psi0, coupling, grid);
    const double predicted = psi0 - (pairing / S) * (1.0 - h1 / S);
    const double actual = rotor::project_to_manifold(mu, coupling, psi0, grid);
    errors.push_back(std::abs(actual - predicted));
  }
  REQUIRE(errors.size() == 3);
  const double ratio10 = errors[0] / errors[1];
  const double ratio21 = errors[1] / errors[2];
  CHECK(ratio10 >= 6.0);
  CHECK(ratio10 <= 10.0);
  CHECK(ratio21 >= 6.0);
  CHECK(ratio21 <= 10.0);
}

TEST_CASE("empirical measures project like their smooth counterparts") {
  const rotor::CircleGrid grid(512);
  const double coupling = 2.0;
  const double center = 2.2;
  const rotor::StationaryProfile q(coupling, center);
  const int n = 4000;
  std::vector<double> atoms(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    atoms[static_cast<std::size_t>(j)] = q.quantile((j + 0.5) / n);
  }
  const rotor::EmpiricalMeasure mu(atoms);
  const double proj = rotor::project_to_manifold(mu, coupling, center + 0.3, grid);
  CHECK(std::abs(proj - center) < 1e-3);
  CHECK(rotor::dist_to_manifold(mu, coupling, grid) < 0.05);
}
