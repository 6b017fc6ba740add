#include "invscat/forward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "invscat/error.hpp"
#include "invscat/specfun.hpp"

namespace invscat::forward {
namespace {

using State = std::array<double, 2>;

// y'' = (Q(x) + (l + 1/2)^2) y, integrated over [x_from, x_to] (x_to < x_from).
State rk4_segment(const TransformedPotential& Q, double omega2, double x_from, double x_to, int n,
                  State y) {
  const double lo = std::min(x_from, x_to);
  const double hi = std::max(x_from, x_to);
  auto rhs = [&](double x, const State& s) -> State {
    return {s[1], (Q.inside(x, lo, hi) + omega2) * s[0]};
  };
  const double h = (x_to - x_from) / n;
  double x = x_from;
  for (int i = 0; i < n; ++i) {
    const State k1 = rhs(x, y);
    const State k2 = rhs(x + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const State k3 = rhs(x + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const State k4 = rhs(x + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    x = x_from + (i + 1) * h;
    // Only the ratio y'/y matters; keep magnitudes in range.
    const double mag = std::max(std::abs(y[0]), std::abs(y[1]));
    if (mag > 1e150) {
      y[0] *= 1e-150;
      y[1] *= 1e-150;
    }
  }
  return y;
}

State integrate_regular(const PotentialSpec& q, const ProblemSetup& setup, int l, const Options& opts) {
  if (l < 0) throw Error(ErrorKind::Domain, "l must be >= 0");
  if (opts.steps < 16) throw Error(ErrorKind::InvalidConfig, "forward solver needs at least 16 steps");
  if (!(opts.r_min_fraction > 0.0 && opts.r_min_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "r_min fraction must lie in (0, 1)");
  }
  const TransformedPotential Q(q, setup);
  const double omega = l + 0.5;
  const double x_max = -std::log(opts.r_min_fraction);

  std::vector<double> nodes{0.0};
  for (double xb : Q.breakpoints_x()) {
    if (xb > 0.0 && xb < x_max) nodes.push_back(xb);
  }
  nodes.push_back(x_max);
  std::sort(nodes.begin(), nodes.end());

  // y ~ e^{-omega x}, i.e. u ~ r^{l+1}, at r_min.
  State y{1.0, -omega};
  for (std::size_t i = nodes.size() - 1; i > 0; --i) {
    const double from = nodes[i];
    const double to = nodes[i - 1];
    const int n = std::max(8, static_cast<int>(std::lround(opts.steps * (from - to) / x_max)));
    y = rk4_segment(Q, omega * omega, from, to, n, y);
  }
  if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
    throw Error(ErrorKind::IntegrationFailure, "interior integration overflowed for l = " + std::to_string(l));
  }
  return y;
}

}  // namespace

double interior_log_derivative(const PotentialSpec& q, const ProblemSetup& setup, int l, const Options& opts) {
  const State y = integrate_regular(q, setup, l, opts);
  if (std::abs(y[0]) <= 1e-300) {
    throw Error(ErrorKind::IntegrationFailure, "interior solution vanishes at r = a for l = " + std::to_string(l));
  }
  return y[1] / y[0];
}

double phase_shift(const PotentialSpec& q, const ProblemSetup& setup, int l, const Options& opts) {
  setup.validate();
  const State y = integrate_regular(q, setup, l, opts);

  // phi = r^{1/2} y, d phi / dr = r^{-1/2} (y/2 - y_x); the common r^{-1/2}
  // factor drops out of the two-component match, which stays well defined when
  // u(a) = 0.
  const double u = y[0];
  const double du = (0.5 * y[0] - y[1]) / setup.a;

  const double rho = setup.k * setup.a;
  const auto b = specfun::cyl_bessel_half_integer(l, rho);
  const double c = std::sqrt(std::numbers::pi / 2.0);
  const double sr = std::sqrt(rho);
  const double uj = c * sr * b.j;
  const double uy = c * sr * b.y;
  const double duj = c * (0.5 * b.j / sr + sr * b.dj);
  const double duy = c * (0.5 * b.y / sr + sr * b.dy);

  const double num = setup.k * duj * u - uj * du;
  const double den = setup.k * duy * u - uy * du;
  if (!std::isfinite(num) || !std::isfinite(den) || (num == 0.0 && den == 0.0)) {
    throw Error(ErrorKind::IntegrationFailure, "phase-shift match failed for l = " + std::to_string(l));
  }
  if (den == 0.0) return std::numbers::pi / 2.0;
  double delta = std::atan(num / den);
  if (delta <= -std::numbers::pi / 2.0) delta += std::numbers::pi;
  return delta;
}

PhaseShiftSet phase_shift_set(const PotentialSpec& q, const ProblemSetup& setup, int l_max, const Options& opts) {
  if (l_max < 0) throw Error(ErrorKind::Domain, "l_max must be >= 0");
  PhaseShiftSet out{setup.k, setup.a, {}};
  out.deltas.reserve(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) {
    try {
      out.deltas.push_back(phase_shift(q, setup, l, opts));
    } catch (const Error& e) {
      throw Error(e.kind(), "l = " + std::to_string(l) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace invscat::forward
