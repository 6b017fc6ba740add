#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "invscat/forward.hpp"
#include "invscat/potentials.hpp"
#include "invscat/specfun.hpp"

namespace invscat {

/// Point values m_l = m(-(l+1/2)^2), l = 0..l_max, of the auxiliary m-function.
struct MSamples {
  enum class Provenance { PhaseShifts, Analytic };

  std::vector<double> values;
  /// Per-sample uncertainty (absolute); zero when unknown.
  std::vector<double> sigma;
  /// Optional second evaluation of the same samples at finer forward
  /// resolution; the spread gives a correlated noise estimate.
  std::vector<double> refined;
  Provenance provenance = Provenance::PhaseShifts;

  int l_max() const { return static_cast<int>(values.size()) - 1; }
};

/// Kernel of the Legendre-type interpolation series.
///   Derived:   c_n(x) = (2n+1) (1/2-x)_n / (1/2+x)_{n+1}
///   AsPrinted: c_n(x) = (2n+1) (1/2-x)_n / (1/2+x)_n
enum class InterpolationKernel { Derived, AsPrinted };

/// How many series terms to keep: all, a fixed count, or the largest prefix
/// whose coefficients stay above their propagated noise.
struct SeriesOrder {
  enum class Rule { Auto, Full, Fixed };
  Rule rule = Rule::Auto;
  int n = 0;

  static SeriesOrder automatic() { return {}; }
  static SeriesOrder full() { return {Rule::Full, 0}; }
  static SeriesOrder fixed(int n) { return {Rule::Fixed, n}; }
};

struct InterpolationOptions {
  InterpolationKernel kernel = InterpolationKernel::Derived;
  SeriesOrder order;
};

namespace mfunction {

/// m(-(l+1/2)^2) from a phase shift by matching to the exterior free wave.
double m_from_phase_shift(double delta, int l, const ProblemSetup& setup);

/// m(lambda) = -sqrt(s) J'_nu(sqrt s) / J_nu(sqrt s), nu = -i sqrt(lambda);
/// s = 0 gives i sqrt(lambda).
Complex analytic_m_constant(double s, Complex lambda);

/// Two-layer exponential potential: Q = -s_outer e^{-2x} for x < x0 and
/// -s_inner e^{-2x} for x > x0.
Complex analytic_m_step(double s_inner, double s_outer, double x0, Complex lambda);

/// Principal square root with Im >= 0; negative reals map to the upper side.
Complex sqrt_upper(Complex lambda);

/// a_nm = (-n)_m (n+1)_m / (m!)^2.
std::vector<std::vector<double>> legendre_matrix(int l_max);

MSamples samples_from_phase_shifts(const PhaseShiftSet& shifts, const std::vector<double>& delta_sigma = {},
                                   const PhaseShiftSet* refined = nullptr);

}  // namespace mfunction

/// An evaluable m-function of the auxiliary operator.
class MRepresentation {
 public:
  struct Constant {
    double s;
  };
  struct Step {
    double s_inner;
    double s_outer;
    double x0;
  };
  struct Interpolated {
    MSamples samples;
    InterpolationKernel kernel;
    /// b_n = sum_m a_nm (m_m + m + 1/2)
    std::vector<double> coefficients;
    std::vector<double> noise;
    /// Highest series index kept.
    int order;
  };
  using Variant = std::variant<Constant, Step, Interpolated>;

  static MRepresentation analytic_constant(double s);
  static MRepresentation analytic_step(double s_inner, double s_outer, double x0);
  static MRepresentation interpolated(MSamples samples, const InterpolationOptions& opts = {});

  /// m(lambda), principal branch of sqrt(lambda).
  Complex eval(Complex lambda) const;
  /// m(kappa^2) on the upper rim of the continuous spectrum.
  Complex at_real_kappa(double kappa) const;

  const Variant& variant() const { return v_; }
  bool is_analytic() const { return !std::holds_alternative<Interpolated>(v_); }
  bool is_free() const;
  std::string describe() const;

 private:
  explicit MRepresentation(Variant v) : v_(std::move(v)) {}
  Complex eval_nu(Complex nu) const;

  Variant v_;
};

}  // namespace invscat
