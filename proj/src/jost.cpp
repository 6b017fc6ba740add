#include "invscat/jost.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "invscat/error.hpp"
#include "numerics.hpp"

namespace invscat::jost {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

Complex principal_sqrt(double s) {
  return s >= 0.0 ? Complex(std::sqrt(s), 0.0) : Complex(0.0, std::sqrt(-s));
}

// i artanh(w) = (i/2) log((1+w)/(1-w)), checked to be real.
double real_phase_from_w(Complex w) {
  if (std::abs(1.0 - w) < 1e-14) throw Error(ErrorKind::BranchCut, "phase formula hits the artanh branch point");
  const Complex d = 0.5 * kI * std::log((1.0 + w) / (1.0 - w));
  if (!std::isfinite(d.real()) || !(std::abs(d.imag()) <= 1e-8)) {
    std::ostringstream os;
    os << "phase formula has imaginary residue " << d.imag();
    throw Error(ErrorKind::BranchCut, os.str());
  }
  return d.real();
}

// 4^{i kappa} alpha^{-i kappa} Gamma(1 + i kappa) / Gamma(1 - i kappa)
Complex gamma_ratio(double alpha, double kappa) {
  const Complex ik(0.0, kappa);
  const Complex log_alpha = std::log(Complex(alpha, 0.0));
  return std::exp(ik * std::log(4.0) - ik * log_alpha) * specfun::gamma_complex(1.0 + ik) /
         specfun::gamma_complex(1.0 - ik);
}

// W[J_nu1(za t), J_nu2(zb t)] with respect to t.
Complex wronskian(Complex nu1, Complex nu2, Complex za, Complex zb, double t) {
  const auto f = specfun::bessel_j_complex_order(nu1, za * t);
  const auto g = specfun::bessel_j_complex_order(nu2, zb * t);
  return f.value * zb * g.derivative - za * f.derivative * g.value;
}

// Jost function route for the two-layer case: Delta = -arg f(0), with f the
// solution ~ e^{i kappa x} at large x.
double delta_step_jost(double s_in, double s_out, double x0, double kappa) {
  const Complex nu(0.0, -kappa);
  auto reduced = [](Complex n, double s, double x) {
    const auto t = specfun::reduced_bessel_series(n, Complex(s * std::exp(-2.0 * x), 0.0));
    return std::pair<Complex, Complex>{t.sum, -n * t.sum - 2.0 * t.w_derivative};
  };
  const auto v = reduced(nu, s_in, x0);
  const auto u1 = reduced(nu, s_out, x0);
  const auto u2 = reduced(-nu, s_out, x0);
  const Complex p = v.first * u2.second - v.second * u2.first;
  const Complex r = std::exp(-2.0 * nu * x0) * (u1.first * v.second - u1.second * v.first);
  const Complex f0 = p * reduced(nu, s_out, 0.0).first + r * reduced(-nu, s_out, 0.0).first;
  const Complex w12 = u1.first * u2.second - u1.second * u2.first;
  return -std::arg(f0 / w12);
}

void collect_intervals(const std::vector<double>& t, const std::vector<char>& flag, std::vector<KappaInterval>& out) {
  std::size_t i = 0;
  while (i < t.size()) {
    if (!flag[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < t.size() && flag[j + 1]) ++j;
    out.push_back({t[i], t[j]});
    i = j + 1;
  }
}

// (atanh(u) - u) / kappa with u = kappa / T, accurate for small u.
double atanh_excess(double u, double kappa) {
  if (u < 1e-2) {
    const double u2 = u * u;
    return u * u2 * (1.0 / 3.0 + u2 * (1.0 / 5.0 + u2 * (1.0 / 7.0 + u2 / 9.0))) / kappa;
  }
  return (std::atanh(u) - u) / kappa;
}

}  // namespace

std::vector<double> kappa_grid(const GridSpec& spec) {
  if (!(spec.kappa_min > 0.0) || !(spec.kappa_min < 1.0) || !(spec.kappa_max > 1.0) || spec.n_geometric < 2 ||
      spec.n_uniform < 2) {
    throw Error(ErrorKind::InvalidConfig, "invalid kappa grid specification");
  }
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(spec.n_geometric + spec.n_uniform));
  const double ratio = std::log(1.0 / spec.kappa_min) / (spec.n_geometric - 1);
  for (int i = 0; i < spec.n_geometric; ++i) k.push_back(spec.kappa_min * std::exp(ratio * i));
  k.back() = 1.0;
  const double step = (spec.kappa_max - 1.0) / spec.n_uniform;
  for (int i = 1; i <= spec.n_uniform; ++i) k.push_back(1.0 + step * i);
  k.back() = spec.kappa_max;
  return k;
}

double jost_modulus_sq(const MRepresentation& m, double kappa) {
  const double im = m.at_real_kappa(kappa).imag();
  if (!(im > 0.0)) {
    std::ostringstream os;
    os << "Im m(kappa^2) <= 0 at kappa = " << kappa;
    throw Error(ErrorKind::NonHerglotz, os.str());
  }
  return kappa / im;
}

double jost_modulus_sq_clamped(const MRepresentation& m, double kappa, double floor, bool& clamped) {
  const double im = m.at_real_kappa(kappa).imag();
  clamped = false;
  if (!(im > 0.0)) {
    clamped = true;
    return floor;
  }
  const double v = kappa / im;
  if (v < floor) {
    clamped = true;
    return floor;
  }
  return v;
}

PhaseFunctionGrid phase_from_dispersion(const MRepresentation& m, const GridSpec& spec) {
  PhaseFunctionGrid out;
  out.kappa = kappa_grid(spec);
  const double T = spec.tail_factor * spec.kappa_max;
  if (!(T > spec.kappa_max)) throw Error(ErrorKind::InvalidConfig, "dispersion cutoff must exceed kappa_max");

  if (m.is_free()) {
    out.delta.assign(out.kappa.size(), 0.0);
    return out;
  }

  numerics::Quadrature quad = numerics::gauss_legendre_panels(0.0, 2.0, 0.1, 16);
  numerics::append(quad, numerics::gauss_legendre_panels(2.0, T, 0.5, 16));
  const std::size_t nt = quad.nodes.size();

  std::vector<double> g(nt);
  std::vector<char> clamped_t(nt, 0);
  numerics::parallel_for(nt, [&](std::size_t i) {
    bool c = false;
    g[i] = 0.5 * std::log(jost_modulus_sq_clamped(m, quad.nodes[i], spec.modulus_floor, c));
    clamped_t[i] = c ? 1 : 0;
  });

  // g(t) ~ c / t^2 beyond T, fitted on [T/2, T].
  double num = 0.0;
  double den = 0.0;
  double mid_scale = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    const double t = quad.nodes[i];
    if (t >= 0.5 * T) {
      num += g[i] / (t * t);
      den += 1.0 / (t * t * t * t);
    } else if (t >= 0.25 * T) {
      mid_scale = std::max(mid_scale, std::abs(g[i]) * t * t);
    }
  }
  const double c = den > 0.0 ? num / den : 0.0;
  if (std::abs(c) > 10.0 * mid_scale && std::abs(c) > 1e-12) {
    std::ostringstream os;
    os << "log-modulus tail does not decay (fitted c = " << c << ", mid-range scale " << mid_scale << ")";
    throw Error(ErrorKind::TailFit, os.str());
  }

  std::vector<char> clamped_k(out.kappa.size(), 0);
  out.delta.resize(out.kappa.size());
  numerics::parallel_for(out.kappa.size(), [&](std::size_t j) {
    const double k = out.kappa[j];
    bool ck = false;
    const double gk = 0.5 * std::log(jost_modulus_sq_clamped(m, k, spec.modulus_floor, ck));
    clamped_k[j] = ck ? 1 : 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double t = quad.nodes[i];
      const double d = t * t - k * k;
      if (std::abs(t - k) <= 1e-12 * k) continue;
      sum += quad.weights[i] * (g[i] - gk) / d;
    }
    const double u = k / T;
    // int_T^inf c t^-2 / (t^2 - k^2) dt and -g(k) int_T^inf dt / (t^2 - k^2)
    const double tail_c = c / (k * k) * atanh_excess(u, k);
    const double tail_k = -gk * std::atanh(u) / k;
    out.delta[j] = 2.0 * k / kPi * (sum + tail_c + tail_k);
  });

  collect_intervals(out.kappa, clamped_k, out.clamped);
  std::vector<KappaInterval> beyond;
  collect_intervals(quad.nodes, clamped_t, beyond);
  for (const auto& iv : beyond) {
    if (iv.lo > spec.kappa_max) out.clamped.push_back(iv);
  }
  if (!out.clamped.empty()) {
    double span = 0.0;
    for (const auto& iv : out.clamped) span += iv.hi - iv.lo;
    std::ostringstream os;
    os << "m-function not Herglotz on " << out.clamped.size() << " kappa interval(s), total width " << span
       << "; modulus clamped";
    out.warnings.push_back(os.str());
    if (span > 0.1 * T) out.warnings.push_back("persistent non-Herglotz behavior; an auxiliary bound state is possible");
  }
  fit_tail(out);
  return out;
}

double analytic_delta_constant(double s, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::Domain, "kappa must be > 0");
  if (s == 0.0) return 0.0;
  const Complex z = principal_sqrt(s);
  const Complex ik(0.0, kappa);
  const Complex jp = specfun::bessel_j_complex_order(ik, z).value;
  const Complex jm = specfun::bessel_j_complex_order(-ik, z).value;
  const Complex r = gamma_ratio(s, kappa) * jp / jm;
  return real_phase_from_w((1.0 - r) / (1.0 + r));
}

double analytic_delta_step(double s_inner, double s_outer, double x0, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::Domain, "kappa must be > 0");
  if (!(x0 > 0.0)) throw Error(ErrorKind::Domain, "step position x0 must be > 0");
  if (s_inner == s_outer) return analytic_delta_constant(s_inner, kappa);
  // Zero layers and orders past the Bessel series cap take the Jost route.
  if (s_inner == 0.0 || s_outer == 0.0 || kappa > 200.0) return delta_step_jost(s_inner, s_outer, x0, kappa);

  const Complex p(0.0, kappa);
  const Complex n(0.0, -kappa);
  const Complex z1 = principal_sqrt(s_inner);
  const Complex z2 = principal_sqrt(s_outer);
  const double t = std::exp(-x0);
  const Complex jp2 = specfun::bessel_j_complex_order(p, z2).value;
  const Complex jm2 = specfun::bessel_j_complex_order(n, z2).value;
  const Complex h = (jm2 * wronskian(p, p, z1, z2, t) - jp2 * wronskian(p, n, z1, z2, t)) /
                    (jp2 * wronskian(n, n, z1, z2, t) - jm2 * wronskian(n, p, z1, z2, t));
  const Complex gh = gamma_ratio(s_inner, kappa) * h;
  // Raw J_{+-i kappa} products overflow at large kappa.
  if (!std::isfinite(gh.real()) || !std::isfinite(gh.imag())) return delta_step_jost(s_inner, s_outer, x0, kappa);
  return real_phase_from_w((1.0 + gh) / (1.0 - gh));
}

PhaseFunctionGrid analytic_phase_grid(const MRepresentation& m, const GridSpec& spec) {
  PhaseFunctionGrid out;
  out.kappa = kappa_grid(spec);
  const std::size_t n = out.kappa.size();
  std::vector<double> raw(n);
  const auto& v = m.variant();
  if (const auto* c = std::get_if<MRepresentation::Constant>(&v)) {
    numerics::parallel_for(n, [&](std::size_t i) { raw[i] = analytic_delta_constant(c->s, out.kappa[i]); });
  } else if (const auto* s = std::get_if<MRepresentation::Step>(&v)) {
    numerics::parallel_for(
        n, [&](std::size_t i) { raw[i] = analytic_delta_step(s->s_inner, s->s_outer, s->x0, out.kappa[i]); });
  } else {
    throw Error(ErrorKind::InvalidConfig, "closed-form phase needs an analytic m-function");
  }
  out.delta.resize(n);
  out.delta[n - 1] = raw[n - 1];
  for (std::size_t i = n - 1; i > 0; --i) {
    const double prev = out.delta[i];
    double d = raw[i - 1];
    d += kPi * std::round((prev - d) / kPi);
    out.delta[i - 1] = d;
  }
  const double at_zero = out.delta.front() / kPi;
  if (std::abs(at_zero) > 0.5) {
    std::ostringstream os;
    os << "phase near kappa = 0 is " << out.delta.front() << "; an auxiliary bound state is likely";
    out.warnings.push_back(os.str());
  }
  fit_tail(out);
  return out;
}

int negative_axis_poles(const MRepresentation& m, int samples) {
  double depth = 0.0;
  if (const auto* c = std::get_if<MRepresentation::Constant>(&m.variant())) {
    depth = c->s;
  } else if (const auto* s = std::get_if<MRepresentation::Step>(&m.variant())) {
    depth = std::max(s->s_inner, s->s_outer);
  } else {
    throw Error(ErrorKind::InvalidConfig, "pole scan needs an analytic m-function");
  }
  if (depth <= 0.0) return 0;
  const auto at = [&](double nu) { return m.eval(Complex(-nu * nu, 0.0)).real(); };
  const double nu_min = 1e-3;
  const double step = (std::sqrt(depth) + 1.0 - nu_min) / samples;
  int poles = 0;
  double prev = at(nu_min);
  for (int i = 1; i <= samples; ++i) {
    const double cur = at(nu_min + i * step);
    if (cur > prev) ++poles;
    prev = cur;
  }
  return poles;
}

void fit_tail(PhaseFunctionGrid& grid) {
  const double kmax = grid.kappa_max();
  std::vector<std::vector<double>> design;
  std::vector<double> y;
  for (std::size_t i = 0; i < grid.kappa.size(); ++i) {
    const double k = grid.kappa[i];
    if (k < 0.5 * kmax) continue;
    design.push_back({1.0 / k, 1.0 / (k * k * k)});
    y.push_back(grid.delta[i]);
  }
  if (y.size() < 2) {
    grid.a1 = grid.delta.back() * kmax;
    grid.a3 = 0.0;
    return;
  }
  const auto coef = numerics::least_squares(design, y);
  grid.a1 = coef[0];
  grid.a3 = coef[1];
}

}  // namespace invscat::jost
