#include "invscat/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "invscat/error.hpp"

namespace invscat::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// Godfrey's coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

Complex lanczos_gamma(Complex z) {
  // Valid for Re z >= 1/2.
  z -= 1.0;
  Complex series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    series += kLanczos[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  const Complex log_gamma =
      0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
  return std::exp(log_gamma);
}

bool is_nonpositive_integer(Complex z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  const double n = std::round(z.real());
  return n <= 0.0 && std::abs(z.real() - n) <= tol;
}

void check_order(Complex nu) {
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) || std::abs(nu.imag()) > 200.0) {
    throw Error(ErrorKind::Domain, "Bessel order outside |Im nu| <= 200");
  }
}

// J_nu(z) for nu not a negative integer.
Complex bessel_series(Complex nu, Complex z, const SeriesOptions& opts) {
  const Complex w = z * z;
  const ReducedSeries t = reduced_bessel_series(nu, w, opts);
  const Complex prefactor = std::exp(nu * std::log(0.5 * z)) / gamma_complex(nu + 1.0);
  return prefactor * t.sum;
}

Complex bessel_any_order(Complex nu, Complex z, const SeriesOptions& opts) {
  if (is_nonpositive_integer(nu, 0.0) && nu.real() < 0.0) {
    const int n = static_cast<int>(-nu.real());
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * bessel_series(Complex(n, 0.0), z, opts);
  }
  return bessel_series(nu, z, opts);
}

}  // namespace

Complex gamma_complex(Complex z) {
  if (is_nonpositive_integer(z, 1e-12)) {
    throw Error(ErrorKind::GammaPole,
                "Gamma pole at z = " + std::to_string(z.real()) + " + " + std::to_string(z.imag()) + "i");
  }
  if (z.real() < 0.5) {
    return kPi / (std::sin(kPi * z) * lanczos_gamma(1.0 - z));
  }
  return lanczos_gamma(z);
}

Complex pochhammer(Complex x, unsigned n) {
  Complex p = 1.0;
  for (unsigned j = 0; j < n; ++j) p *= x + static_cast<double>(j);
  return p;
}

ReducedSeries reduced_bessel_series(Complex nu, Complex w, const SeriesOptions& opts) {
  // No order cap here: the reduced series carries no e^{pi |Im nu| / 2} growth.
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag())) throw Error(ErrorKind::Domain, "non-finite Bessel order");
  if (std::sqrt(std::abs(w)) > opts.max_argument) {
    throw Error(ErrorKind::Domain, "Bessel argument beyond the power-series range");
  }
  const Complex step = -0.25 * w;
  Complex term = 1.0;
  ReducedSeries out{1.0, 0.0};
  const double min_terms = std::sqrt(std::abs(w));
  for (int m = 1; m <= opts.max_terms; ++m) {
    const Complex denom = static_cast<double>(m) * (nu + static_cast<double>(m));
    if (denom == 0.0) {
      throw Error(ErrorKind::Domain, "reduced Bessel series undefined for negative integer order");
    }
    term *= step / denom;
    out.sum += term;
    out.w_derivative += static_cast<double>(m) * term;
    if (m >= min_terms && std::abs(term) * m <= 1e-16 * std::max(std::abs(out.sum), std::abs(out.w_derivative))) {
      return out;
    }
    if (term == 0.0) return out;
  }
  throw Error(ErrorKind::NonConvergence, "Bessel series did not converge within the term cap");
}

BesselValue bessel_j_complex_order(Complex nu, double x, const SeriesOptions& opts) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "Bessel argument must be positive");
  return bessel_j_complex_order(nu, Complex(x, 0.0), opts);
}

BesselValue bessel_j_complex_order(Complex nu, Complex z, const SeriesOptions& opts) {
  if (z == 0.0) throw Error(ErrorKind::Domain, "Bessel argument must be non-zero");
  if (std::abs(z) > opts.max_argument) {
    throw Error(ErrorKind::Domain, "Bessel argument beyond the power-series range");
  }
  check_order(nu);
  const Complex value = bessel_any_order(nu, z, opts);
  const Complex lower = bessel_any_order(nu - 1.0, z, opts);
  return {value, lower - nu / z * value};
}

HalfIntegerBessel cyl_bessel_half_integer(int l, double x) {
  if (l < 0 || l > 100) throw Error(ErrorKind::Domain, "half-integer Bessel needs 0 <= l <= 100");
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "half-integer Bessel needs x > 0");

  const double s = std::sin(x);
  const double c = std::cos(x);

  // Spherical y_n: upward recurrence is stable.
  std::vector<double> yl(l + 2);
  yl[0] = -c / x;
  yl[1] = -c / (x * x) - s / x;
  for (int n = 1; n <= l; ++n) {
    yl[n + 1] = (2.0 * n + 1.0) / x * yl[n] - yl[n - 1];
  }

  // Spherical j_n: upward while n < x, Miller's downward recurrence otherwise.
  std::vector<double> jl(l + 2);
  jl[0] = s / x;
  jl[1] = s / (x * x) - c / x;
  if (l + 1 <= x) {
    for (int n = 1; n <= l; ++n) jl[n + 1] = (2.0 * n + 1.0) / x * jl[n] - jl[n - 1];
  } else {
    const int start = l + 1 + 20 + static_cast<int>(std::sqrt(40.0 * (l + 1)));
    double above = 0.0;
    double current = 1e-300;
    std::vector<double> trial(start + 2, 0.0);
    trial[start] = current;
    for (int n = start; n >= 1; --n) {
      const double below = (2.0 * n + 1.0) / x * current - above;
      above = current;
      current = below;
      trial[n - 1] = current;
      if (std::abs(current) > 1e250) {
        for (int k = n - 1; k <= start; ++k) trial[k] *= 1e-250;
        current *= 1e-250;
        above *= 1e-250;
      }
    }
    // Normalise against whichever of j_0, j_1 is better conditioned.
    const double scale = (std::abs(jl[0]) >= std::abs(jl[1])) ? jl[0] / trial[0] : jl[1] / trial[1];
    for (int n = 0; n <= l + 1; ++n) jl[n] = trial[n] * scale;
  }

  const double dj = (l == 0) ? -jl[1] : jl[l - 1] - (l + 1.0) / x * jl[l];
  const double dy = (l == 0) ? -yl[1] : yl[l - 1] - (l + 1.0) / x * yl[l];

  const double norm = std::sqrt(2.0 * x / kPi);
  const double dnorm = 1.0 / std::sqrt(2.0 * kPi * x);
  HalfIntegerBessel out{norm * jl[l], norm * yl[l], dnorm * jl[l] + norm * dj, dnorm * yl[l] + norm * dy};
  if (!std::isfinite(out.y) || !std::isfinite(out.dy) || !std::isfinite(out.j)) {
    throw Error(ErrorKind::Overflow, "half-integer Bessel Y overflow at l = " + std::to_string(l));
  }
  return out;
}

}  // namespace invscat::specfun
