#pragma once

#include <vector>

#include "invscat/potentials.hpp"

namespace invscat {

/// Phase shifts delta_l, l = 0..l_max, at one wavenumber (radians, principal
/// branch (-pi/2, pi/2]).
struct PhaseShiftSet {
  double k = 0.0;
  double a = 0.0;
  std::vector<double> deltas;

  int l_max() const { return static_cast<int>(deltas.size()) - 1; }
};

namespace forward {

struct Options {
  /// Total fixed RK4 steps between r_min and a, split across breakpoints.
  int steps = 4000;
  /// Start radius as a fraction of a; the regular solution ~ r^{l+1} there.
  double r_min_fraction = 1e-6;
};

/// Regular solution of the radial equation expressed in the Liouville
/// variable, integrated from r_min out to r = a. Returns y'(0)/y(0), which is
/// m(-(l+1/2)^2) for the auxiliary operator.
double interior_log_derivative(const PotentialSpec& q, const ProblemSetup& setup, int l,
                               const Options& opts = {});

/// delta_l by matching the interior solution to free Riccati-Bessel waves at
/// r = a; u ~ sin(kr - l pi/2 + delta) outside.
double phase_shift(const PotentialSpec& q, const ProblemSetup& setup, int l, const Options& opts = {});

PhaseShiftSet phase_shift_set(const PotentialSpec& q, const ProblemSetup& setup, int l_max,
                              const Options& opts = {});

}  // namespace forward
}  // namespace invscat
