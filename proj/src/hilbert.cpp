#include "rotor/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rotor {
namespace {

double wrap_two_pi(double theta) {
  double w = std::fmod(theta, 2.0 * M_PI);
  if (w < 0.0) w += 2.0 * M_PI;
  return w;
}

// Squared distance || mu - q_psi ||^2_{-1} as a function of the center,
// reusing the measure's cdf across candidate centers.
class CenterObjective {
 public:
  CenterObjective(const CircleGrid& grid, std::vector<double> measure_cdf,
                  double coupling, double degree)
      : grid_(grid),
        measure_cdf_(std::move(measure_cdf)),
        coupling_(coupling),
        degree_(degree) {}

  double operator()(double center) const {
    const auto q =
        StationaryProfile::with_degree(coupling_, degree_, center);
    const int n = grid_.size();
    std::vector<double> u(static_cast<std::size_t>(n));
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = measure_cdf_[static_cast<std::size_t>(i)] -
                       q.cdf(grid_.node(i));
      u[static_cast<std::size_t>(i)] = v;
      mean += v;
    }
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (double v : u) acc += (v - mean) * (v - mean);
    return grid_.spacing() * acc;
  }

 private:
  const CircleGrid& grid_;
  std::vector<double> measure_cdf_;
  double coupling_;
  double degree_;
};

double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

HMinusOneElement::HMinusOneElement(CircleGrid grid,
                                   std::vector<double> primitive)
    : grid_(std::move(grid)), primitive_(std::move(primitive)) {
  if (static_cast<int>(primitive_.size()) != grid_.size()) {
    throw std::invalid_argument("HMinusOneElement: primitive size mismatch");
  }
}

HMinusOneElement HMinusOneElement::from_density_values(
    const CircleGrid& grid, const std::vector<double>& values) {
  const double mass = grid.integrate(values);
  if (std::abs(mass) > 1e-10) {
    throw std::invalid_argument(
        "HMinusOneElement: values carry mass " + std::to_string(mass) +
        ", no periodic primitive exists");
  }
  return HMinusOneElement(grid, periodic_primitive(grid, values));
}

HMinusOneElement HMinusOneElement::measure_difference(const CircleMeasure& a,
                                                      const CircleMeasure& b,
                                                      const CircleGrid& grid) {
  const auto cdf_a = measure_cdf_on_grid(a, grid);
  const auto cdf_b = measure_cdf_on_grid(b, grid);
  std::vector<double> u(cdf_a.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = cdf_a[i] - cdf_b[i];
  return HMinusOneElement(grid, std::move(u));
}

std::vector<double> weight_values(
    const CircleGrid& grid, const std::function<double(double)>& weight) {
  std::vector<double> w(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double v = weight(grid.node(i));
    if (!(v > 0.0)) {
      throw std::invalid_argument(
          "weight_values: weight must be strictly positive, got " +
          std::to_string(v) + " at theta = " + std::to_string(grid.node(i)));
    }
    w[static_cast<std::size_t>(i)] = v;
  }
  return w;
}

double h1w_inner_product(const HMinusOneElement& u, const HMinusOneElement& v,
                         const std::vector<double>& weight) {
  const int n = u.grid().size();
  if (v.grid().size() != n || static_cast<int>(weight.size()) != n) {
    throw std::invalid_argument("h1w_inner_product: size mismatch");
  }
  double w_total = 0.0;
  double wu = 0.0;
  double wv = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    w_total += weight[k];
    wu += weight[k] * u.primitive()[k];
    wv += weight[k] * v.primitive()[k];
  }
  const double cu = wu / w_total;
  const double cv = wv / w_total;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    acc += weight[k] * (u.primitive()[k] - cu) * (v.primitive()[k] - cv);
  }
  return u.grid().spacing() * acc;
}

double h1w_norm(const HMinusOneElement& u, const std::vector<double>& weight) {
  return std::sqrt(std::max(0.0, h1w_inner_product(u, u, weight)));
}

double h1w_norm_of_difference(const CircleMeasure& a, const CircleMeasure& b,
                              const std::function<double(double)>& weight,
                              const CircleGrid& grid) {
  const auto u = HMinusOneElement::measure_difference(a, b, grid);
  return h1w_norm(u, weight_values(grid, weight));
}

double fourier_hminus_norm(const std::vector<std::complex<double>>& u, int s) {
  if (s != 1 && s != 2) {
    throw std::invalid_argument("fourier_hminus_norm: order must be 1 or 2");
  }
  if (!u.empty() && std::abs(u[0]) > 1e-14) {
    throw std::invalid_argument(
        "fourier_hminus_norm: zeroth coefficient must vanish");
  }
  double acc = 0.0;
  for (std::size_t m = 1; m < u.size(); ++m) {
    const double mm = static_cast<double>(m);
    const double denom = s == 1 ? mm * mm : mm * mm * mm * mm;
    // |u_m|^2 + |u_{-m}|^2 with the negative side Hermitian.
    acc += 2.0 * std::norm(u[m]) / denom;
  }
  return std::sqrt(acc / (2.0 * M_PI));
}

double tangent_functional(const CircleMeasure& mu, double center,
                          double coupling, const CircleGrid& grid) {
  const double degree = solve_sync_degree(coupling);
  const auto q = StationaryProfile::with_degree(coupling, degree, center);
  const auto kappa = [&q](double theta) { return q.kappa(theta); };

  // int kappa q dtheta vanishes analytically (odd about the center);
  // subtracting its quadrature value keeps density inputs on the same
  // quadrature for both terms.
  std::vector<double> kq(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double theta = grid.node(i);
    kq[static_cast<std::size_t>(i)] = q.kappa(theta) * q.density(theta);
  }
  return -(integrate_against(mu, kappa, grid) - grid.integrate(kq));
}

double project_to_manifold(const CircleMeasure& mu, double coupling,
                           double guess, const CircleGrid& grid) {
  const auto f = [&](double psi) {
    return tangent_functional(mu, psi, coupling, grid);
  };

  // The functional increases through its root (slope ||q'||^2 > 0), so
  // a clamped secant from the guess converges in a handful of steps
  // whenever the guess sits in the right basin.
  double x0 = guess;
  double x1 = guess + 1e-3;
  double f0 = f(x0);
  double f1 = f(x1);
  double best = std::abs(f1) < std::abs(f0) ? x1 : x0;
  double best_res = std::min(std::abs(f0), std::abs(f1));
  for (int it = 0; it < 60 && best_res > 1e-13; ++it) {
    if (f1 == f0) break;
    const double step = std::clamp(f1 * (x1 - x0) / (f1 - f0), -0.5, 0.5);
    const double x2 = x1 - step;
    const double f2 = f(x2);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (std::abs(f1) < best_res) {
      best_res = std::abs(f1);
      best = x1;
    }
    if (std::abs(x1 - x0) < 1e-15) break;
  }

  // Fallback when the secant stalls: scan one period around the guess
  // for the increasing sign change closest to it, then bisect.
  if (best_res > 1e-13) {
    constexpr int m = 128;
    const auto scan_node = [&guess](int j) {
      return guess - M_PI + 2.0 * M_PI * static_cast<double>(j) / m;
    };
    std::vector<double> fs(m + 1);
    for (int j = 0; j <= m; ++j) fs[static_cast<std::size_t>(j)] = f(scan_node(j));

    double a = 0.0, b = 0.0;
    double best_gap = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int j = 0; j < m; ++j) {
      if (fs[static_cast<std::size_t>(j)] <= 0.0 &&
          fs[static_cast<std::size_t>(j + 1)] >= 0.0) {
        const double mid = 0.5 * (scan_node(j) + scan_node(j + 1));
        if (std::abs(mid - guess) < best_gap) {
          best_gap = std::abs(mid - guess);
          a = scan_node(j);
          b = scan_node(j + 1);
          found = true;
        }
      }
    }
    for (int it = 0; found && it < 120; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = f(mid);
      if (std::abs(fm) < best_res) {
        best_res = std::abs(fm);
        best = mid;
      }
      if (best_res < 1e-13 || b - a < 1e-15) break;
      if (fm <= 0.0) {
        a = mid;
      } else {
        b = mid;
      }
    }
  }

  if (best_res > 1e-10) {
    throw std::runtime_error(
        "project_to_manifold: no root near the guess, last residual " +
        std::to_string(best_res));
  }
  return wrap_two_pi(best);
}

double dist_to_manifold(const CircleMeasure& mu, double coupling,
                        const CircleGrid& grid) {
  const double degree = solve_sync_degree(coupling);
  const CenterObjective objective(grid, measure_cdf_on_grid(mu, grid),
                                  coupling, degree);
  if (degree == 0.0) {
    return std::sqrt(std::max(0.0, objective(0.0)));
  }

  const int n_scan = 64;
  double best_center = 0.0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_scan; ++j) {
    const double psi = 2.0 * M_PI * static_cast<double>(j) / n_scan;
    const double val = objective(psi);
    if (val < best_val) {
      best_val = val;
      best_center = psi;
    }
  }
  const double span = 2.0 * M_PI / n_scan;
  const double refined = golden_section_min(
      [&objective](double psi) { return objective(psi); },
      best_center - span, best_center + span, 1e-10);
  return std::sqrt(std::max(0.0, objective(refined)));
}

}  // namespace rotor
