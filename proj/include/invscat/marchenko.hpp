#pragma once

#include <string>
#include <vector>

#include "invscat/jost.hpp"
#include "invscat/potentials.hpp"

namespace invscat {

namespace marchenko {

struct GridSpec {
  double h = 0.02;
  double x_max = 8.0;

  /// Number of diagonal nodes on [0, x_max].
  std::size_t nodes() const;
  void validate() const;
};

}  // namespace marchenko

/// F(z_j), z_j = j h, j = 0..2(n-1), covering [0, 2 x_max].
struct InputKernelGrid {
  double h = 0.02;
  double x_max = 8.0;
  std::vector<double> values;

  double z(std::size_t j) const { return static_cast<double>(j) * h; }
};

/// K(x_i, x_i) on the uniform grid; rows[i][j] = K(x_i, x_i + j h) when kept.
struct KernelDiagonal {
  double h = 0.02;
  std::vector<double> x;
  std::vector<double> diag;
  std::vector<std::vector<double>> rows;
  /// Smallest reciprocal condition estimate over all solves.
  double min_rcond = 1.0;
};

struct ReconstructedPotential {
  /// Increasing radii in [r_min, a].
  std::vector<double> r;
  std::vector<double> q;
  /// Companion transformed potential on the full x grid.
  std::vector<double> x;
  std::vector<double> Q;
  std::vector<std::string> diagnostics;
};

struct WavefunctionCheck {
  /// max |-y'' + Q y - lambda y| over interior nodes, relative to max lambda |y|.
  double residual = 0.0;
  /// y(0, lambda) from the transformation-kernel representation.
  double y0 = 0.0;
  std::vector<double> y;
};

namespace marchenko {

/// F(z) = (1/pi) int_0^inf [(1 - cos 2 Delta) cos kz + sin 2 Delta sin kz] dk,
/// the bound-state-free input kernel; z = 0 takes the limit from above.
class InputKernel {
 public:
  explicit InputKernel(const PhaseFunctionGrid& phase);

  double operator()(double z) const;
  /// |closed-form tail| / integral of |head integrand| at z.
  double tail_ratio(double z) const;

 private:
  struct Parts {
    double head;
    double head_abs;
    double tail;
  };
  Parts parts(double z) const;

  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> one_minus_cos_;
  std::vector<double> sin2_;
  double kappa_max_;
  double b1_;
  double b3_;
  double c2_;
};

double input_kernel(const PhaseFunctionGrid& phase, double z);

/// Tabulates F; throws TailDivergence when the tail model dominates.
InputKernelGrid input_kernel_grid(const PhaseFunctionGrid& phase, const GridSpec& grid = {});

/// Nystrom solution of K(x,y) + F(x+y) + int_x^X K(x,t) F(t+y) dt = 0.
KernelDiagonal solve_kernel(const InputKernelGrid& F, bool want_rows = false);

/// Q = -2 d/dx K(x,x); optional 5-point quadratic smoothing of the result.
std::vector<double> transformed_potential(const KernelDiagonal& K, bool smooth = false);

/// e^{-6}: default lower end of the reported radii, as a fraction of a.
inline constexpr double kReportFloor = 0.0024787521766663585;

/// q = Q / r^2 + k^2, r = a e^{-x}, kept for r >= a * r_min_fraction.
ReconstructedPotential backtransform(const std::vector<double>& x, const std::vector<double>& Q,
                                     const ProblemSetup& setup, double r_min_fraction = kReportFloor);

/// Rebuild y(x, lambda) from the kernel rows and test it against the ODE.
WavefunctionCheck wavefunction_check(const KernelDiagonal& K, const std::vector<double>& Q, double lambda);

}  // namespace marchenko
}  // namespace invscat
