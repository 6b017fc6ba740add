#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

// Piecewise-smooth real Q(x) on [0, inf); `breaks` are the jump points.
struct HalfLinePotential {
  std::function<double(double)> Q;
  std::vector<double> breaks;
};

inline HalfLinePotential exponential(double s) {
  return {[s](double x) { return -s * std::exp(-2.0 * x); }, {}};
}

// Q = -s_outer e^{-2x} on [0, x0), -s_inner e^{-2x} beyond.
inline HalfLinePotential two_layer(double s_inner, double s_outer, double x0) {
  return {[=](double x) { return -(x < x0 ? s_outer : s_inner) * std::exp(-2.0 * x); }, {x0}};
}

// Integrate -y'' + Q y = lambda y from x_far down to 0 with classical RK4,
// landing exactly on every break. Returns (y(0), y'(0)).
inline std::pair<Complex, Complex> integrate_down(const HalfLinePotential& p, Complex lambda, double x_far,
                                                  Complex y, Complex dy, double h_target = 1e-3) {
  std::vector<double> knots{x_far};
  for (auto it = p.breaks.rbegin(); it != p.breaks.rend(); ++it) {
    if (*it > 0.0 && *it < x_far) knots.push_back(*it);
  }
  knots.push_back(0.0);
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double hi = knots[s];
    const double lo = knots[s + 1];
    const int n = std::max(8, static_cast<int>(std::ceil((hi - lo) / h_target)));
    const double h = -(hi - lo) / n;
    // Inside the segment Q is smooth; sample it from the open interval.
    const double eps = 1e-12 * std::max(1.0, hi);
    auto q = [&](double x) { return p.Q(std::clamp(x, lo + eps, hi - eps)); };
    double x = hi;
    for (int i = 0; i < n; ++i) {
      auto f = [&](double xx, Complex yy) { return (q(xx) - lambda) * yy; };
      const Complex k1y = dy, k1d = f(x, y);
      const Complex k2y = dy + 0.5 * h * k1d, k2d = f(x + 0.5 * h, y + 0.5 * h * k1y);
      const Complex k3y = dy + 0.5 * h * k2d, k3d = f(x + 0.5 * h, y + 0.5 * h * k2y);
      const Complex k4y = dy + h * k3d, k4d = f(x + h, y + h * k3y);
      y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
      x = hi + (i + 1) * h;
    }
  }
  return {y, dy};
}

// m(lambda) = y'(0)/y(0) for the solution decaying like e^{i sqrt(lambda) x}.
inline Complex m_function(const HalfLinePotential& p, Complex lambda, double x_far = 30.0) {
  Complex root = std::sqrt(lambda);
  if (root.imag() < 0.0) root = -root;
  const Complex e = std::exp(Complex(0.0, 1.0) * root * x_far);
  const auto [y, dy] = integrate_down(p, lambda, x_far, e, Complex(0.0, 1.0) * root * e);
  return dy / y;
}

// Jost value f(0, kappa) of the solution ~ e^{i kappa x}.
inline Complex jost_value(const HalfLinePotential& p, double kappa, double x_far = 30.0) {
  const Complex e = std::exp(Complex(0.0, kappa * x_far));
  const double h = std::min(1e-3, 0.01 / kappa);
  return integrate_down(p, kappa * kappa, x_far, e, Complex(0.0, kappa) * e, h).first;
}

// Bring a phase into (-pi/2, pi/2].
inline double reduce_half_pi(double d) {
  d = std::remainder(d, kPi);
  if (d <= -kPi / 2) d += kPi;
  return d;
}

// For Q = -s e^{-2x}: f(0, kappa) = sum_m (-s/4)^m / (m! (1 - i kappa)_m).
inline Complex jost_value_exponential(double s, double kappa) {
  Complex term(1.0, 0.0);
  Complex sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= (-s / 4.0) / (static_cast<double>(m) * Complex(m, -kappa));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// int_X^inf sin(t)/t dt for X >= 100 from the auxiliary-function asymptotics.
inline double sine_integral_tail(double X) {
  const double x2 = X * X;
  const double f = (1.0 - 2.0 / x2 + 24.0 / (x2 * x2) - 720.0 / (x2 * x2 * x2)) / X;
  const double g = (1.0 - 6.0 / x2 + 120.0 / (x2 * x2) - 5040.0 / (x2 * x2 * x2)) / x2;
  return f * std::cos(X) + g * std::sin(X);
}

// e^{i sigma x} sum_m (-w/4)^m / (m! (1 - i sigma)_m), w = s e^{-2x}: the
// solution of -y'' - s e^{-2x} y = sigma^2 y that behaves like e^{i sigma x}.
// Returns (y, y') at x.
inline std::pair<Complex, Complex> exponential_solution(double s, double sigma, double x) {
  const double w = s * std::exp(-2.0 * x);
  Complex term(1.0, 0.0), sum = term, wd(0.0, 0.0);
  for (int m = 1; m < 300; ++m) {
    term *= (-w / 4.0) / (static_cast<double>(m) * Complex(m, -sigma));
    sum += term;
    wd += static_cast<double>(m) * term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  const Complex e = std::exp(Complex(0.0, sigma * x));
  return {e * sum, e * (Complex(0.0, sigma) * sum - 2.0 * wd)};
}

// f(0, kappa) for the two-layer potential by matching at x0.
inline Complex jost_value_two_layer(double s_inner, double s_outer, double x0, double kappa) {
  const auto [f, df] = exponential_solution(s_inner, kappa, x0);
  const auto [p, dp] = exponential_solution(s_outer, kappa, x0);
  const auto [q, dq] = exponential_solution(s_outer, -kappa, x0);
  const Complex w = p * dq - dp * q;
  const Complex alpha = (f * dq - df * q) / w;
  const Complex beta = (p * df - dp * f) / w;
  return alpha * exponential_solution(s_outer, kappa, 0.0).first + beta * exponential_solution(s_outer, -kappa, 0.0).first;
}

// (1/pi) int_0^inf [(1 - cos 2D) cos kz + sin 2D sin kz] dk: Simpson on
// [0, K], then D ~ D(K) K / k beyond, keeping the leading sin 2D term.
inline double fourier_kernel(const std::function<double(double)>& delta, double z, double K, int n) {
  if (n % 2) ++n;
  const double h = K / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double k = i * h;
    const double d = k > 0.0 ? delta(k) : 0.0;
    const double f = (1.0 - std::cos(2.0 * d)) * std::cos(k * z) + std::sin(2.0 * d) * std::sin(k * z);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f;
  }
  const double a1 = delta(K) * K;
  const double tail = z > 0.0 ? 2.0 * a1 * sine_integral_tail(K * z) : 0.0;
  return (acc * h / 3.0 + tail) / kPi;
}

// Trapezoid Nystrom rows solved by Neumann iteration, one row per x_i:
// K_j = -F_{2i+j} - sum_t w_t K_t F_{2i+j+t}.
inline std::vector<double> neumann_diagonal(const std::vector<double>& F, double h, std::size_t n, int iters = 200) {
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = n - i;
    std::vector<double> K(m, 0.0);
    for (int it = 0; it < iters; ++it) {
      std::vector<double> next(m);
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
          const double w = (m > 1 && (t == 0 || t == m - 1)) ? 0.5 * h : (m > 1 ? h : 0.0);
          s += w * K[t] * F[2 * i + j + t];
        }
        next[j] = -F[2 * i + j] - s;
      }
      K.swap(next);
    }
    diag[i] = K[0];
  }
  return diag;
}

// F(z) = c e^{-b z} on [x, X] is separable: K(x, y) = g(x) e^{-b y} with
// K(x, x) = -c e^{-2bx} / (1 + c (e^{-2bx} - e^{-2bX}) / (2b)).
inline double separable_diagonal(double c, double b, double x, double X) {
  const double e = std::exp(-2.0 * b * x);
  return -c * e / (1.0 + c * (e - std::exp(-2.0 * b * X)) / (2.0 * b));
}

// Riccati-Bessel phase shift of a constant well q0 < k^2 on [0, a].
inline double constant_well_shift(double q0, double a, double k, int l) {
  const double K = std::sqrt(k * k - q0);
  const auto lu = static_cast<unsigned>(l);
  auto rj = [lu](double x) { return x * std::sph_bessel(lu, x); };
  auto ry = [lu](double x) { return x * std::sph_neumann(lu, x); };
  auto d = [](const std::function<double(double)>& f, double x) {
    const double e = 1e-5 * std::max(1.0, x);
    return (f(x - 2 * e) - 8 * f(x - e) + 8 * f(x + e) - f(x + 2 * e)) / (12 * e);
  };
  const double L = K * d(rj, K * a) / rj(K * a);
  const double num = k * d(rj, k * a) - L * rj(k * a);
  const double den = k * d(ry, k * a) - L * ry(k * a);
  return reduce_half_pi(std::atan(num / den));
}

}  // namespace oracle
