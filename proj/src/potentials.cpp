#include "invscat/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "invscat/error.hpp"

namespace invscat {

void ProblemSetup::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidConfig, "radius a must be > 0");
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidConfig, "wavenumber k must be > 0");
}

PotentialSpec::PotentialSpec(Variant v, double a) : variant_(std::move(v)), a_(a) {
  if (!(a_ > 0.0) || !std::isfinite(a_)) throw Error(ErrorKind::InvalidConfig, "radius a must be > 0");
}

PotentialSpec PotentialSpec::constant(double q0, double a) {
  if (!std::isfinite(q0)) throw Error(ErrorKind::InvalidConfig, "q0 must be finite");
  return PotentialSpec(potential::Constant{q0}, a);
}

PotentialSpec PotentialSpec::step(double q1, double q2, double r0, double a) {
  if (!std::isfinite(q1) || !std::isfinite(q2)) throw Error(ErrorKind::InvalidConfig, "step strengths must be finite");
  if (!(r0 > 0.0 && r0 < a)) throw Error(ErrorKind::InvalidConfig, "step radius must satisfy 0 < r0 < a");
  return PotentialSpec(potential::Step{q1, q2, r0}, a);
}

PotentialSpec PotentialSpec::shifted_coulomb(double A, double a) {
  if (!std::isfinite(A)) throw Error(ErrorKind::InvalidConfig, "Coulomb strength must be finite");
  return PotentialSpec(potential::ShiftedCoulomb{A}, a);
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> r, std::vector<double> q, double a) {
  if (r.size() != q.size() || r.size() < 2) {
    throw Error(ErrorKind::InvalidConfig, "tabulated potential needs at least two (r, q) nodes");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(q[i])) throw Error(ErrorKind::InvalidConfig, "non-finite table entry");
    if (r[i] <= 0.0 || r[i] > a * (1.0 + 1e-12)) {
      throw Error(ErrorKind::InvalidConfig, "table radii must lie in (0, a]");
    }
    if (i > 0 && !(r[i] > r[i - 1])) throw Error(ErrorKind::InvalidConfig, "table radii must be strictly increasing");
  }
  return PotentialSpec(potential::Tabulated{std::move(r), std::move(q)}, a);
}

std::string PotentialSpec::name() const {
  std::ostringstream os;
  os.precision(9);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, potential::Constant>) {
          os << "constant(q0=" << v.q0;
        } else if constexpr (std::is_same_v<T, potential::Step>) {
          os << "step(q1=" << v.q1 << ",q2=" << v.q2 << ",r0=" << v.r0;
        } else if constexpr (std::is_same_v<T, potential::ShiftedCoulomb>) {
          os << "coulomb(A=" << v.A;
        } else {
          os << "table(n=" << v.r.size();
        }
      },
      variant_);
  os << ",a=" << a_ << ")";
  return os.str();
}

std::vector<double> PotentialSpec::breakpoints() const {
  if (const auto* s = std::get_if<potential::Step>(&variant_)) return {s->r0};
  if (const auto* t = std::get_if<potential::Tabulated>(&variant_)) {
    std::vector<double> out;
    for (double r : t->r) {
      if (r < a_) out.push_back(r);
    }
    return out;
  }
  return {};
}

double PotentialSpec::sup_abs() const {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, potential::Constant>) {
          return std::abs(v.q0);
        } else if constexpr (std::is_same_v<T, potential::Step>) {
          return std::max(std::abs(v.q1), std::abs(v.q2));
        } else if constexpr (std::is_same_v<T, potential::ShiftedCoulomb>) {
          return v.A == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
          double m = 0.0;
          for (double q : v.q) m = std::max(m, std::abs(q));
          return m;
        }
      },
      variant_);
}

double eval_q(const PotentialSpec& q, double r) {
  const double a = q.a();
  if (r > a) return 0.0;
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, potential::Constant>) {
          return v.q0;
        } else if constexpr (std::is_same_v<T, potential::Step>) {
          return r < v.r0 ? v.q1 : v.q2;
        } else if constexpr (std::is_same_v<T, potential::ShiftedCoulomb>) {
          return v.A / r - v.A / a;
        } else {
          if (r < v.r.front() || r > v.r.back()) return 0.0;
          const auto it = std::upper_bound(v.r.begin(), v.r.end(), r);
          if (it == v.r.end()) return v.q.back();
          const std::size_t i = static_cast<std::size_t>(it - v.r.begin());
          const double t = (r - v.r[i - 1]) / (v.r[i] - v.r[i - 1]);
          return (1.0 - t) * v.q[i - 1] + t * v.q[i];
        }
      },
      q.variant());
}

double r_of_x(double x, const ProblemSetup& setup) {
  if (!(x >= 0.0)) throw Error(ErrorKind::Domain, "x must be >= 0");
  return setup.a * std::exp(-x);
}

double x_of_r(double r, const ProblemSetup& setup) {
  if (!(r > 0.0) || r > setup.a) throw Error(ErrorKind::Domain, "r must lie in (0, a]");
  return -std::log(r / setup.a);
}

TransformedPotential::TransformedPotential(PotentialSpec q, ProblemSetup setup)
    : q_(std::move(q)), setup_(setup) {
  setup_.validate();
  if (std::abs(q_.a() - setup_.a) > 1e-12 * setup_.a) {
    throw Error(ErrorKind::InvalidConfig, "potential support radius differs from setup radius");
  }
}

double TransformedPotential::operator()(double x) const {
  const double r = setup_.a * std::exp(-x);
  return r * r * (eval_q(q_, r) - setup_.k * setup_.k);
}

double TransformedPotential::inside(double x, double x_lo, double x_hi) const {
  const double r = setup_.a * std::exp(-x);
  // q is sampled at an interior point of the segment so that a jump at the
  // segment end does not leak into the stage values.
  const double margin = 1e-9 * (x_hi - x_lo);
  const double xs = std::clamp(x, x_lo + margin, x_hi - margin);
  const double rs = setup_.a * std::exp(-xs);
  return r * r * (eval_q(q_, rs) - setup_.k * setup_.k);
}

std::vector<double> TransformedPotential::breakpoints_x() const {
  std::vector<double> out;
  for (double r : q_.breakpoints()) out.push_back(-std::log(r / setup_.a));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> TransformedPotential::s() const {
  if (const auto* c = std::get_if<potential::Constant>(&q_.variant())) {
    return setup_.a * setup_.a * (setup_.k * setup_.k - c->q0);
  }
  return std::nullopt;
}

std::optional<double> TransformedPotential::s1() const {
  if (const auto* s = std::get_if<potential::Step>(&q_.variant())) {
    return setup_.a * setup_.a * (setup_.k * setup_.k - s->q1);
  }
  return std::nullopt;
}

std::optional<double> TransformedPotential::s2() const {
  if (const auto* s = std::get_if<potential::Step>(&q_.variant())) {
    return setup_.a * setup_.a * (setup_.k * setup_.k - s->q2);
  }
  return std::nullopt;
}

std::optional<double> TransformedPotential::x0() const {
  if (const auto* s = std::get_if<potential::Step>(&q_.variant())) return -std::log(s->r0 / setup_.a);
  return std::nullopt;
}

TransformedPotential liouville_forward(const PotentialSpec& q, const ProblemSetup& setup) {
  return TransformedPotential(q, setup);
}

}  // namespace invscat
