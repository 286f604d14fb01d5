#include "rotor/measures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace rotor {
namespace {

double wrap_two_pi(double theta) {
  double w = std::fmod(theta, 2.0 * M_PI);
  if (w < 0.0) w += 2.0 * M_PI;
  return w;
}

}  // namespace

OrderParameter order_parameter(std::span<const double> phases) {
  if (phases.empty()) {
    throw std::invalid_argument("order_parameter: empty configuration");
  }
  double re = 0.0;
  double im = 0.0;
  for (double phi : phases) {
    re += std::cos(phi);
    im += std::sin(phi);
  }
  re /= static_cast<double>(phases.size());
  im /= static_cast<double>(phases.size());
  const double r = std::hypot(re, im);
  const double psi =
      r < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : std::atan2(im, re);
  return {r, psi};
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) {
    throw std::invalid_argument("EmpiricalMeasure: needs at least one atom");
  }
  for (double& a : atoms_) a = wrap_two_pi(a);
  std::sort(atoms_.begin(), atoms_.end());
}

double EmpiricalMeasure::mean_of(
    const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (double a : atoms_) acc += f(a);
  return acc / static_cast<double>(atoms_.size());
}

std::vector<double> EmpiricalMeasure::cdf_on_grid(
    const CircleGrid& grid) const {
  std::vector<double> cdf(static_cast<std::size_t>(grid.size()));
  const double inv_n = 1.0 / static_cast<double>(atoms_.size());
  std::size_t next = 0;
  for (int i = 0; i < grid.size(); ++i) {
    const double theta = grid.node(i);
    while (next < atoms_.size() && atoms_[next] <= theta) ++next;
    cdf[static_cast<std::size_t>(i)] = static_cast<double>(next) * inv_n;
  }
  return cdf;
}

GridDensity::GridDensity(CircleGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw std::invalid_argument("GridDensity: value count mismatch");
  }
}

double GridDensity::mass() const { return grid_.integrate(values_); }

std::vector<double> GridDensity::cdf_on_grid() const {
  const auto prim = periodic_primitive(grid_, values_);
  double mean = 0.0;
  for (double v : values_) mean += v;
  mean /= static_cast<double>(values_.size());

  std::vector<double> cdf(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    cdf[i] = mean * grid_.node(static_cast<int>(i)) + prim[i] - prim[0];
  }
  return cdf;
}

std::vector<double> measure_cdf_on_grid(const CircleMeasure& mu,
                                        const CircleGrid& grid) {
  struct Visitor {
    const CircleGrid& grid;

    std::vector<double> operator()(const EmpiricalMeasure& m) const {
      return m.cdf_on_grid(grid);
    }
    std::vector<double> operator()(const GridDensity& m) const {
      if (m.grid().size() != grid.size()) {
        throw std::invalid_argument(
            "measure_cdf_on_grid: density tabulated on a different grid");
      }
      return m.cdf_on_grid();
    }
    std::vector<double> operator()(const StationaryProfile& q) const {
      std::vector<double> cdf(static_cast<std::size_t>(grid.size()));
      for (int i = 0; i < grid.size(); ++i) {
        cdf[static_cast<std::size_t>(i)] = q.cdf(grid.node(i));
      }
      return cdf;
    }
  };
  return std::visit(Visitor{grid}, mu);
}

double integrate_against(const CircleMeasure& mu,
                         const std::function<double(double)>& f,
                         const CircleGrid& grid) {
  struct Visitor {
    const std::function<double(double)>& f;
    const CircleGrid& grid;

    double operator()(const EmpiricalMeasure& m) const { return m.mean_of(f); }
    double operator()(const GridDensity& m) const {
      std::vector<double> vals(m.values().size());
      for (std::size_t i = 0; i < vals.size(); ++i) {
        vals[i] = f(m.grid().node(static_cast<int>(i))) * m.values()[i];
      }
      return m.grid().integrate(vals);
    }
    double operator()(const StationaryProfile& q) const {
      std::vector<double> vals(static_cast<std::size_t>(grid.size()));
      for (int i = 0; i < grid.size(); ++i) {
        const double theta = grid.node(i);
        vals[static_cast<std::size_t>(i)] = f(theta) * q.density(theta);
      }
      return grid.integrate(vals);
    }
  };
  return std::visit(Visitor{f, grid}, mu);
}

}  // namespace rotor
