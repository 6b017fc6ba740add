#pragma once

#include <complex>

namespace invscat {

using Complex = std::complex<double>;

namespace specfun {

/// Complex Gamma function. Lanczos approximation (g = 7, 9 terms) evaluated in
/// log form, with reflection for Re z < 1/2. Throws ErrorKind::GammaPole within
/// 1e-12 of a non-positive integer.
Complex gamma_complex(Complex z);

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), (x)_0 = 1.
Complex pochhammer(Complex x, unsigned n);

struct SeriesOptions {
  double max_argument = 30.0;
  int max_terms = 200;
};

struct BesselValue {
  Complex value;
  Complex derivative;
};

/// J_nu(x) of complex order by its power series, J'_nu from
/// J'_nu = J_{nu-1} - (nu/x) J_nu.
///
/// |J_{i kappa}| grows like exp(pi kappa / 2); absolute accuracy degrades with
/// |Im nu| while relative accuracy holds. Callers that only need ratios should
/// prefer reduced_bessel_series().
BesselValue bessel_j_complex_order(Complex nu, double x, const SeriesOptions& opts = {});

/// Same series continued to complex argument (principal branch of (z/2)^nu).
/// Needed for sqrt(s) with s < 0.
BesselValue bessel_j_complex_order(Complex nu, Complex z, const SeriesOptions& opts = {});

/// The entire part of the Bessel series,
///   T_nu(w) = sum_m (-w/4)^m / (m! (nu+1)_m),
/// so that J_nu(z) = (z/2)^nu T_nu(z^2) / Gamma(nu+1). `w_derivative` is
/// w T'_nu(w) = sum_m m (-w/4)^m / (m! (nu+1)_m). No Gamma prefactor, no
/// overflow for large |Im nu|.
struct ReducedSeries {
  Complex sum;
  Complex w_derivative;
};
ReducedSeries reduced_bessel_series(Complex nu, Complex w, const SeriesOptions& opts = {});

/// Ordinary Bessel functions of half-integer order l + 1/2 and their
/// derivatives with respect to the argument, from spherical Bessel recurrences.
struct HalfIntegerBessel {
  double j;
  double y;
  double dj;
  double dy;
};
HalfIntegerBessel cyl_bessel_half_integer(int l, double x);

}  // namespace specfun
}  // namespace invscat
