// Probability measures on the circle: particle ensembles, tabulated
// densities, and the order parameter of a phase configuration.
#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "rotor/grid.hpp"
#include "rotor/stationary.hpp"

namespace rotor {

// Complex mean of the unit vectors e^{i phi_j}: magnitude r in [0, 1]
// and argument psi. When the magnitude is below 1e-12 the argument is
// meaningless and is reported as NaN.
struct OrderParameter {
  double magnitude;
  double phase;
};

OrderParameter order_parameter(std::span<const double> phases);

// Atomic measure (1/N) sum of delta masses. Atoms are reduced mod 2 pi
// on construction and kept in sorted order for cdf evaluation.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<double> atoms);

  int size() const { return static_cast<int>(atoms_.size()); }
  const std::vector<double>& atoms() const { return atoms_; }

  // (1/N) sum f(atom).
  double mean_of(const std::function<double(double)>& f) const;

  // Exact cdf theta -> mu([0, theta]) at the grid nodes.
  std::vector<double> cdf_on_grid(const CircleGrid& grid) const;

 private:
  std::vector<double> atoms_;
};

// Density tabulated at the nodes of a grid. Values may be signed (the
// norm machinery works with differences); mass handling is up to the
// caller.
class GridDensity {
 public:
  GridDensity(CircleGrid grid, std::vector<double> values);

  const CircleGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  double mass() const;

  // Cdf at the grid nodes via the spectral primitive: exact for
  // band-limited densities, spectrally accurate for smooth ones.
  std::vector<double> cdf_on_grid() const;

 private:
  CircleGrid grid_;
  std::vector<double> values_;
};

// Any of the measure representations the geometry routines accept.
using CircleMeasure =
    std::variant<EmpiricalMeasure, GridDensity, StationaryProfile>;

// Cdf theta_i -> mu([0, theta_i]) of any measure representation,
// evaluated at the nodes of the given grid. A GridDensity must be
// tabulated on a grid of the same size.
std::vector<double> measure_cdf_on_grid(const CircleMeasure& mu,
                                        const CircleGrid& grid);

// Integral of f against the measure: exact atom average for empirical
// measures, trapezoid quadrature on the grid for densities and
// profiles.
double integrate_against(const CircleMeasure& mu,
                         const std::function<double(double)>& f,
                         const CircleGrid& grid);

}  // namespace rotor
