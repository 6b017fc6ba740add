#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace invscat {

/// Geometry shared by every stage: potential support [0, a] and the fixed
/// wavenumber k. Lengths and inverse lengths are in consistent units.
struct ProblemSetup {
  double a = 1.0;
  double k = 1.0;

  void validate() const;
};

namespace potential {

struct Constant {
  double q0;
};

/// q1 inside r0, q2 on [r0, a]; q(r0) = q2.
struct Step {
  double q1;
  double q2;
  double r0;
};

/// A/r - A/a on (0, a].
struct ShiftedCoulomb {
  double A;
};

/// Linear interpolation between strictly increasing nodes in (0, a]; zero
/// outside the node range.
struct Tabulated {
  std::vector<double> r;
  std::vector<double> q;
};

}  // namespace potential

/// A fixed-energy potential q(r) supported on [0, a]. All strengths are in
/// units of 1/length^2; q(r) = 0 for r > a.
class PotentialSpec {
 public:
  using Variant = std::variant<potential::Constant, potential::Step, potential::ShiftedCoulomb,
                               potential::Tabulated>;

  static PotentialSpec constant(double q0, double a);
  static PotentialSpec step(double q1, double q2, double r0, double a);
  static PotentialSpec shifted_coulomb(double A, double a);
  static PotentialSpec tabulated(std::vector<double> r, std::vector<double> q, double a);

  double a() const { return a_; }
  const Variant& variant() const { return variant_; }
  std::string name() const;

  bool is_constant() const { return std::holds_alternative<potential::Constant>(variant_); }
  bool is_step() const { return std::holds_alternative<potential::Step>(variant_); }

  /// Radii in (0, a) where q or its derivative jumps.
  std::vector<double> breakpoints() const;

  /// sup |q| over (0, a]; infinite for the Coulomb variant.
  double sup_abs() const;

 private:
  PotentialSpec(Variant v, double a);

  Variant variant_;
  double a_;
};

/// Pointwise evaluation; exactly zero for r > a.
double eval_q(const PotentialSpec& q, double r);

/// Liouville variable change r = a e^{-x}.
double r_of_x(double x, const ProblemSetup& setup);
double x_of_r(double r, const ProblemSetup& setup);

/// Q(x) = r^2 (q(r) - k^2), r = a e^{-x}: the half-line potential of the
/// auxiliary Sturm-Liouville problem.
class TransformedPotential {
 public:
  TransformedPotential(PotentialSpec q, ProblemSetup setup);

  double operator()(double x) const;

  /// Q(x) evaluated with q taken from the open interval of x values
  /// (x_lo, x_hi); used by integrators that step across breakpoints.
  double inside(double x, double x_lo, double x_hi) const;

  /// Breakpoints mapped to x, in increasing order.
  std::vector<double> breakpoints_x() const;

  const PotentialSpec& spec() const { return q_; }
  const ProblemSetup& setup() const { return setup_; }

  /// Constant case: Q(x) = -s e^{-2x}, s = a^2 (k^2 - q0).
  std::optional<double> s() const;
  /// Step case: s1 from q1 (x > x0), s2 from q2 (x < x0), x0 = -log(r0 / a).
  std::optional<double> s1() const;
  std::optional<double> s2() const;
  std::optional<double> x0() const;

 private:
  PotentialSpec q_;
  ProblemSetup setup_;
};

TransformedPotential liouville_forward(const PotentialSpec& q, const ProblemSetup& setup);

}  // namespace invscat
