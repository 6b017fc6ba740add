#pragma once

#include <string>
#include <vector>

#include "invscat/mfunction.hpp"

namespace invscat {

struct KappaInterval {
  double lo;
  double hi;
};

/// Auxiliary s-wave phase Delta(kappa) on an increasing grid, with the
/// large-kappa model Delta ~ a1/kappa + a3/kappa^3.
struct PhaseFunctionGrid {
  std::vector<double> kappa;
  std::vector<double> delta;
  double a1 = 0.0;
  double a3 = 0.0;
  /// Intervals where Im m(kappa^2) <= 0 forced the modulus clamp.
  std::vector<KappaInterval> clamped;
  std::vector<std::string> warnings;

  double kappa_max() const { return kappa.back(); }
};

namespace jost {

struct GridSpec {
  double kappa_min = 1e-3;
  double kappa_max = 60.0;
  /// Geometric nodes on [kappa_min, 1], uniform nodes on (1, kappa_max].
  int n_geometric = 100;
  int n_uniform = 500;
  /// Dispersion integrals run to tail_factor * kappa_max before the
  /// closed-form tail takes over.
  double tail_factor = 3.0;
  /// Lower bound for |f|^2 where the m-function fails to be Herglotz.
  double modulus_floor = 1e-6;
};

std::vector<double> kappa_grid(const GridSpec& spec);

/// |f(kappa)|^2 = kappa / Im m(kappa^2). Throws NonHerglotz if Im m <= 0.
double jost_modulus_sq(const MRepresentation& m, double kappa);

/// As jost_modulus_sq, but values below `floor` (including non-positive
/// Im m) are replaced by `floor`; `clamped` reports whether that happened.
double jost_modulus_sq_clamped(const MRepresentation& m, double kappa, double floor, bool& clamped);

/// Delta(kappa) = (2 kappa / pi) int_0^inf [g(t) - g(kappa)] / (t^2 - kappa^2) dt,
/// g = log|f|, on the grid of `spec`.
PhaseFunctionGrid phase_from_dispersion(const MRepresentation& m, const GridSpec& spec = {});

/// Closed-form phase for Q = -s e^{-2x}; principal branch.
double analytic_delta_constant(double s, double kappa);

/// Closed-form phase for the two-layer potential (see analytic_m_step);
/// principal branch.
double analytic_delta_step(double s_inner, double s_outer, double x0, double kappa);

/// Tabulate an analytic phase on the grid, unwrapping from kappa_max down.
PhaseFunctionGrid analytic_phase_grid(const MRepresentation& m, const GridSpec& spec = {});

/// Poles of a closed-form m on lambda = -nu^2 below the well depth: each is
/// an auxiliary bound state. Detected as upward jumps, since m decreases in
/// nu between poles.
int negative_axis_poles(const MRepresentation& m, int samples = 4000);

/// Least-squares a1, a3 over kappa in [kappa_max/2, kappa_max].
void fit_tail(PhaseFunctionGrid& grid);

}  // namespace jost
}  // namespace invscat
