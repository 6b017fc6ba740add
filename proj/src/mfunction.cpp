#include "invscat/mfunction.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "invscat/error.hpp"

namespace invscat {
namespace mfunction {
namespace {

struct Reduced {
  Complex a;  // U e^{nu x}
  Complex b;  // U' e^{nu x}
};

// U(x) = e^{-nu x} T_nu(s e^{-2x}) solves -y'' - s e^{-2x} y = -nu^2 y.
Reduced reduced_solution(Complex nu, double s, double x) {
  const auto t = specfun::reduced_bessel_series(nu, Complex(s * std::exp(-2.0 * x), 0.0));
  return {t.sum, -nu * t.sum - 2.0 * t.w_derivative};
}

Complex constant_from_nu(double s, Complex nu) {
  if (s == 0.0) return -nu;
  const auto t = specfun::reduced_bessel_series(nu, Complex(s, 0.0));
  if (std::abs(t.sum) < 1e-300) {
    throw Error(ErrorKind::NearZeroDenominator, "m-function denominator vanishes (spectral coincidence)");
  }
  return -nu - 2.0 * t.w_derivative / t.sum;
}

Complex step_from_nu(double s_in, double s_out, double x0, Complex nu) {
  if (!(x0 > 0.0)) throw Error(ErrorKind::Domain, "step position x0 must be > 0");
  const Reduced v = reduced_solution(nu, s_in, x0);
  const Reduced u1 = reduced_solution(nu, s_out, x0);
  const Reduced u2 = reduced_solution(-nu, s_out, x0);
  const Reduced u1_0 = reduced_solution(nu, s_out, 0.0);
  const Reduced u2_0 = reduced_solution(-nu, s_out, 0.0);
  // Coefficients of the decaying inner solution on the outer basis, each
  // scaled by W[u1, u2].
  const Complex p = v.a * u2.b - v.b * u2.a;
  const Complex r = std::exp(-2.0 * nu * x0) * (u1.a * v.b - u1.b * v.a);
  const Complex den = p * u1_0.a + r * u2_0.a;
  if (std::abs(den) < 1e-300) {
    throw Error(ErrorKind::NearZeroDenominator, "m-function denominator vanishes (spectral coincidence)");
  }
  return (p * u1_0.b + r * u2_0.b) / den;
}

// Series coefficients c_n(x), n = 0..n_max.
std::vector<Complex> kernel_values(InterpolationKernel kernel, Complex x, int n_max) {
  std::vector<Complex> c(static_cast<std::size_t>(std::max(n_max + 1, 0)));
  if (n_max < 0) return c;
  auto check = [](Complex d) {
    if (std::abs(d) < 1e-14) throw Error(ErrorKind::InterpolationPole, "interpolation evaluated on a pole");
  };
  Complex ratio;
  if (kernel == InterpolationKernel::Derived) {
    check(0.5 + x);
    ratio = 1.0 / (0.5 + x);
  } else {
    ratio = 1.0;
  }
  c[0] = ratio;
  for (int n = 1; n <= n_max; ++n) {
    const Complex den = (kernel == InterpolationKernel::Derived) ? 0.5 + x + static_cast<double>(n)
                                                                 : 0.5 + x + static_cast<double>(n - 1);
    check(den);
    ratio *= (0.5 - x + static_cast<double>(n - 1)) / den;
    c[static_cast<std::size_t>(n)] = (2.0 * n + 1.0) * ratio;
  }
  return c;
}

}  // namespace

Complex sqrt_upper(Complex lambda) {
  if (lambda.imag() == 0.0 && lambda.real() < 0.0) return Complex(0.0, std::sqrt(-lambda.real()));
  Complex r = std::sqrt(lambda);
  if (r.imag() < 0.0) r = -r;
  return r;
}

double m_from_phase_shift(double delta, int l, const ProblemSetup& setup) {
  setup.validate();
  const double ka = setup.k * setup.a;
  const auto b = specfun::cyl_bessel_half_integer(l, ka);
  const double t = std::tan(delta);
  const double den = b.j - t * b.y;
  if (std::abs(den) < 1e-13 * std::abs(t * b.y)) {
    throw Error(ErrorKind::NearZeroDenominator,
                "phase shift for l = " + std::to_string(l) + " is incompatible with the truncation radius");
  }
  return -ka * (b.dj - t * b.dy) / den;
}

Complex analytic_m_constant(double s, Complex lambda) {
  if (lambda == 0.0) throw Error(ErrorKind::Domain, "m-function evaluated at lambda = 0");
  return constant_from_nu(s, Complex(0.0, -1.0) * sqrt_upper(lambda));
}

Complex analytic_m_step(double s_inner, double s_outer, double x0, Complex lambda) {
  if (lambda == 0.0) throw Error(ErrorKind::Domain, "m-function evaluated at lambda = 0");
  return step_from_nu(s_inner, s_outer, x0, Complex(0.0, -1.0) * sqrt_upper(lambda));
}

std::vector<std::vector<double>> legendre_matrix(int l_max) {
  std::vector<std::vector<double>> a(static_cast<std::size_t>(l_max + 1));
  for (int n = 0; n <= l_max; ++n) {
    auto& row = a[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n + 1));
    row[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
      row[static_cast<std::size_t>(m)] =
          row[static_cast<std::size_t>(m - 1)] * (m - 1.0 - n) * (n + static_cast<double>(m)) / (double(m) * m);
    }
  }
  return a;
}

MSamples samples_from_phase_shifts(const PhaseShiftSet& shifts, const std::vector<double>& delta_sigma,
                                   const PhaseShiftSet* refined) {
  const ProblemSetup setup{shifts.a, shifts.k};
  MSamples out;
  out.provenance = MSamples::Provenance::PhaseShifts;
  const int l_max = shifts.l_max();
  if (l_max < 0) throw Error(ErrorKind::InvalidConfig, "no phase shifts given");
  if (!delta_sigma.empty() && static_cast<int>(delta_sigma.size()) != l_max + 1) {
    throw Error(ErrorKind::InvalidConfig, "phase-shift uncertainty list has the wrong length");
  }
  for (int l = 0; l <= l_max; ++l) {
    const double d = shifts.deltas[static_cast<std::size_t>(l)];
    const double m = m_from_phase_shift(d, l, setup);
    out.values.push_back(m);
    double sig = 0.0;
    if (!delta_sigma.empty()) {
      sig = std::abs(m_from_phase_shift(d + delta_sigma[static_cast<std::size_t>(l)], l, setup) - m);
    }
    out.sigma.push_back(sig);
  }
  if (refined) {
    if (refined->l_max() != l_max) throw Error(ErrorKind::InvalidConfig, "refined phase shifts differ in length");
    for (int l = 0; l <= l_max; ++l) {
      out.refined.push_back(m_from_phase_shift(refined->deltas[static_cast<std::size_t>(l)], l, setup));
    }
  }
  return out;
}

}  // namespace mfunction

MRepresentation MRepresentation::analytic_constant(double s) {
  if (!std::isfinite(s)) throw Error(ErrorKind::InvalidConfig, "s must be finite");
  return MRepresentation(Constant{s});
}

MRepresentation MRepresentation::analytic_step(double s_inner, double s_outer, double x0) {
  if (!std::isfinite(s_inner) || !std::isfinite(s_outer)) throw Error(ErrorKind::InvalidConfig, "s must be finite");
  if (!(x0 > 0.0)) throw Error(ErrorKind::Domain, "step position x0 must be > 0");
  return MRepresentation(Step{s_inner, s_outer, x0});
}

MRepresentation MRepresentation::interpolated(MSamples samples, const InterpolationOptions& opts) {
  const int l_max = samples.l_max();
  if (l_max < 0) throw Error(ErrorKind::InvalidConfig, "interpolation needs at least one sample");
  if (samples.sigma.empty()) samples.sigma.assign(samples.values.size(), 0.0);
  for (double v : samples.values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidConfig, "non-finite m sample");
  }
  const auto a = mfunction::legendre_matrix(l_max);
  std::vector<double> b(static_cast<std::size_t>(l_max + 1));
  std::vector<double> noise(b.size());
  const bool has_refined = samples.refined.size() == samples.values.size();
  for (int n = 0; n <= l_max; ++n) {
    double sum = 0.0;
    double sum_ref = 0.0;
    double abs_sum = 0.0;
    double prop = 0.0;
    for (int m = 0; m <= n; ++m) {
      const double anm = a[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
      const double mu = samples.values[static_cast<std::size_t>(m)] + m + 0.5;
      sum += anm * mu;
      if (has_refined) sum_ref += anm * (samples.refined[static_cast<std::size_t>(m)] + m + 0.5);
      abs_sum += std::abs(anm * mu);
      prop += std::abs(anm) * samples.sigma[static_cast<std::size_t>(m)];
    }
    b[static_cast<std::size_t>(n)] = sum;
    noise[static_cast<std::size_t>(n)] =
        prop + (has_refined ? std::abs(sum - sum_ref) : 0.0) + 2.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  }

  int order = l_max;
  switch (opts.order.rule) {
    case SeriesOrder::Rule::Full:
      break;
    case SeriesOrder::Rule::Fixed:
      if (opts.order.n < 0 || opts.order.n > l_max) {
        throw Error(ErrorKind::InvalidConfig, "series order must lie in [0, l_max]");
      }
      order = opts.order.n;
      break;
    case SeriesOrder::Rule::Auto:
      for (int n = 0; n <= l_max; ++n) {
        const double ref = std::max(std::abs(b[static_cast<std::size_t>(n)]),
                                    n > 0 ? std::abs(b[static_cast<std::size_t>(n - 1)]) : 0.0);
        if (noise[static_cast<std::size_t>(n)] > 0.5 * ref) {
          order = n - 1;
          break;
        }
      }
      break;
  }
  return MRepresentation(Interpolated{std::move(samples), opts.kernel, std::move(b), std::move(noise), order});
}

Complex MRepresentation::eval_nu(Complex nu) const {
  if (const auto* c = std::get_if<Constant>(&v_)) return mfunction::constant_from_nu(c->s, nu);
  if (const auto* s = std::get_if<Step>(&v_)) {
    if (s->s_inner == s->s_outer) return mfunction::constant_from_nu(s->s_inner, nu);
    return mfunction::step_from_nu(s->s_inner, s->s_outer, s->x0, nu);
  }
  const auto& it = std::get<Interpolated>(v_);
  // Free part i sqrt(lambda) = -nu; the series argument x = -i sqrt(lambda) = nu.
  Complex m = -nu;
  const auto c = mfunction::kernel_values(it.kernel, nu, it.order);
  for (int n = 0; n <= it.order; ++n) m += c[static_cast<std::size_t>(n)] * it.coefficients[static_cast<std::size_t>(n)];
  return m;
}

Complex MRepresentation::eval(Complex lambda) const {
  if (lambda == 0.0) throw Error(ErrorKind::Domain, "m-function evaluated at lambda = 0");
  return eval_nu(Complex(0.0, -1.0) * mfunction::sqrt_upper(lambda));
}

Complex MRepresentation::at_real_kappa(double kappa) const {
  if (!(kappa > 0.0)) throw Error(ErrorKind::Domain, "kappa must be > 0");
  return eval_nu(Complex(0.0, -kappa));
}

bool MRepresentation::is_free() const {
  if (const auto* c = std::get_if<Constant>(&v_)) return c->s == 0.0;
  if (const auto* s = std::get_if<Step>(&v_)) return s->s_inner == 0.0 && s->s_outer == 0.0;
  const auto& it = std::get<Interpolated>(v_);
  for (int n = 0; n <= it.order; ++n) {
    if (it.coefficients[static_cast<std::size_t>(n)] != 0.0) return false;
  }
  return true;
}

std::string MRepresentation::describe() const {
  std::ostringstream os;
  os.precision(9);
  if (const auto* c = std::get_if<Constant>(&v_)) {
    os << "analytic-constant(s=" << c->s << ")";
  } else if (const auto* s = std::get_if<Step>(&v_)) {
    os << "analytic-step(s_inner=" << s->s_inner << ",s_outer=" << s->s_outer << ",x0=" << s->x0 << ")";
  } else {
    const auto& it = std::get<Interpolated>(v_);
    os << "interpolated(l_max=" << it.samples.l_max() << ",order=" << it.order
       << ",kernel=" << (it.kernel == InterpolationKernel::Derived ? "derived" : "as-printed") << ")";
  }
  return os.str();
}

}  // namespace invscat
