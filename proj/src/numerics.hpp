#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace invscat::numerics {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Gauss-Legendre rule on [lo, hi] with panels no wider than
/// panel_width and `order` nodes per panel.
Quadrature gauss_legendre_panels(double lo, double hi, double panel_width, int order);

/// Append `extra` to `into`.
void append(Quadrature& into, const Quadrature& extra);

/// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);
  ~CubicSpline();
  CubicSpline(const CubicSpline&) = delete;
  CubicSpline& operator=(const CubicSpline&) = delete;

  double operator()(double x) const;
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double sine_integral(double x);

/// Runs body(i) for i in [0, n); results must be written to per-index slots
/// so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Least-squares fit y ~ sum_j c_j basis_j(x).
std::vector<double> least_squares(const std::vector<std::vector<double>>& design, const std::vector<double>& y);

}  // namespace invscat::numerics
