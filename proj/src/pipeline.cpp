#include "invscat/pipeline.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "invscat/error.hpp"

namespace invscat {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::ExactM:
      return "exact-m";
    case Mode::ExactDelta:
      return "exact-delta";
    case Mode::PhaseShifts:
      return "phase-shifts";
    case Mode::ForwardOnly:
      return "forward-only";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "exact-m") return Mode::ExactM;
  if (text == "exact-delta") return Mode::ExactDelta;
  if (text == "phase-shifts") return Mode::PhaseShifts;
  if (text == "forward-only") return Mode::ForwardOnly;
  throw Error(ErrorKind::InvalidConfig, "unknown mode '" + text + "'");
}

double RunConfig::effective_kappa_max() const {
  if (kappa_max) return *kappa_max;
  return mode == Mode::PhaseShifts ? 40.0 : 60.0;
}

void RunConfig::validate() const {
  setup.validate();
  grid.validate();
  if (bound_states != 0) throw Error(ErrorKind::InvalidConfig, "bound-state terms are not supported");
  if (l_max < 0 || l_max > 100) throw Error(ErrorKind::InvalidConfig, "l_max must lie in [0, 100]");
  if (!(effective_kappa_max() > 1.0)) throw Error(ErrorKind::InvalidConfig, "kappa_max must exceed 1");
  if (!(r_report_min_fraction > 0.0 && r_report_min_fraction < 0.95)) {
    throw Error(ErrorKind::InvalidConfig, "report floor must lie in (0, 0.95)");
  }
  if (potential && std::abs(potential->a() - setup.a) > 1e-12 * setup.a) {
    throw Error(ErrorKind::InvalidConfig, "potential radius differs from a");
  }
  switch (mode) {
    case Mode::ExactM:
    case Mode::ExactDelta:
      if (!potential || !(potential->is_constant() || potential->is_step())) {
        throw Error(ErrorKind::InvalidConfig,
                    std::string(to_string(mode)) + " mode needs a constant or step potential");
      }
      break;
    case Mode::PhaseShifts:
      if (!potential && !shifts) throw Error(ErrorKind::InvalidConfig, "phase-shifts mode needs a potential or shifts");
      break;
    case Mode::ForwardOnly:
      if (!potential) throw Error(ErrorKind::InvalidConfig, "forward computation needs a potential");
      break;
  }
  if (shifts) {
    if (shifts->l_max() < 0) throw Error(ErrorKind::InvalidConfig, "shift list is empty");
    if (std::abs(shifts->k - setup.k) > 1e-12 * setup.k || std::abs(shifts->a - setup.a) > 1e-12 * setup.a) {
      throw Error(ErrorKind::InvalidConfig, "shift list was recorded for a different (a, k)");
    }
    if (!shift_sigma.empty() && shift_sigma.size() != shifts->deltas.size()) {
      throw Error(ErrorKind::InvalidConfig, "shift uncertainties do not match the shift list");
    }
  }
}

namespace pipeline {
namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

MRepresentation analytic_m(const RunConfig& config) {
  const TransformedPotential Q(*config.potential, config.setup);
  if (const auto s = Q.s()) return MRepresentation::analytic_constant(*s);
  return MRepresentation::analytic_step(*Q.s1(), *Q.s2(), *Q.x0());
}

std::optional<double> step_radius(const RunConfig& config) {
  if (!config.potential) return std::nullopt;
  if (const auto* s = std::get_if<potential::Step>(&config.potential->variant())) return s->r0;
  return std::nullopt;
}

Metrics compute_metrics(const ReconstructedPotential& rec, const RunConfig& config) {
  Metrics m;
  const double a = config.setup.a;
  m.window_lo = a * config.r_report_min_fraction;
  m.window_hi = 0.95 * a;
  if (!rec.r.empty()) m.q_at_rmin = rec.q.front();
  if (!config.potential) return m;
  m.has_truth = true;
  double sum2 = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < rec.r.size(); ++i) {
    if (!in_error_window(rec.r[i], config)) continue;
    const double err = std::abs(rec.q[i] - eval_q(*config.potential, rec.r[i]));
    m.max_abs_err = std::max(m.max_abs_err, err);
    sum2 += err * err;
    ++count;
  }
  m.l2_err = count ? std::sqrt(sum2 / static_cast<double>(count)) : 0.0;
  return m;
}

}  // namespace

bool in_error_window(double r, const RunConfig& config) {
  const double a = config.setup.a;
  if (r < a * config.r_report_min_fraction * (1.0 - 1e-12) || r > 0.95 * a) return false;
  if (const auto r0 = step_radius(config)) {
    if (std::abs(r - *r0) < 0.1 * a) return false;
  }
  return true;
}

PhaseShiftSet input_shifts(const RunConfig& config) {
  if (config.shifts) return *config.shifts;
  return forward::phase_shift_set(*config.potential, config.setup, config.l_max, config.forward);
}

RunReport run(const RunConfig& config) {
  stage("config", [&] {
    config.validate();
    return 0;
  });
  RunReport report;
  report.kappa_max = config.effective_kappa_max();

  if (config.mode == Mode::ForwardOnly) {
    report.shifts = stage("forward", [&] { return input_shifts(config); });
    return report;
  }

  jost::GridSpec kspec;
  kspec.kappa_max = report.kappa_max;

  PhaseFunctionGrid phase;
  switch (config.mode) {
    case Mode::ExactM: {
      const MRepresentation m = stage("m-function", [&] { return analytic_m(config); });
      report.m_description = m.describe();
      phase = stage("dispersion", [&] { return jost::phase_from_dispersion(m, kspec); });
      if (const int poles = jost::negative_axis_poles(m); poles > 0) {
        phase.warnings.push_back("m-function has " + std::to_string(poles) +
                                 " pole(s) on the negative axis; auxiliary bound states are not modeled");
      }
      break;
    }
    case Mode::ExactDelta: {
      const MRepresentation m = stage("m-function", [&] { return analytic_m(config); });
      report.m_description = m.describe();
      phase = stage("phase", [&] { return jost::analytic_phase_grid(m, kspec); });
      break;
    }
    case Mode::PhaseShifts: {
      report.shifts = stage("forward", [&] { return input_shifts(config); });
      const MSamples samples = stage("m-samples", [&] {
        if (config.shifts) return mfunction::samples_from_phase_shifts(*report.shifts, config.shift_sigma);
        forward::Options fine = config.forward;
        fine.steps *= 2;
        const PhaseShiftSet refined = forward::phase_shift_set(*config.potential, config.setup, config.l_max, fine);
        return mfunction::samples_from_phase_shifts(*report.shifts, {}, &refined);
      });
      const MRepresentation m =
          stage("interpolation", [&] { return MRepresentation::interpolated(samples, config.interpolation); });
      report.m_description = m.describe();
      phase = stage("dispersion", [&] { return jost::phase_from_dispersion(m, kspec); });
      break;
    }
    case Mode::ForwardOnly:
      break;
  }
  report.warnings.insert(report.warnings.end(), phase.warnings.begin(), phase.warnings.end());

  const InputKernelGrid F = stage("input-kernel", [&] { return marchenko::input_kernel_grid(phase, config.grid); });
  KernelDiagonal K = stage("marchenko", [&] { return marchenko::solve_kernel(F, config.keep_rows); });
  report.min_rcond = K.min_rcond;
  const auto Q = marchenko::transformed_potential(K, config.smooth);
  report.reconstruction = stage("backtransform", [&] {
    return marchenko::backtransform(K.x, Q, config.setup, config.r_report_min_fraction);
  });
  report.phase = std::move(phase);
  if (config.keep_rows) report.kernel = std::move(K);

  report.metrics = compute_metrics(report.reconstruction, config);
  report.metrics.roundtrip_delta_err = stage("roundtrip", [&] { return roundtrip_check(report, config); });
  return report;
}

std::vector<double> roundtrip_check(const RunReport& report, const RunConfig& config) {
  const auto& rec = report.reconstruction;
  if (rec.x.empty()) throw Error(ErrorKind::InvalidConfig, "report has no reconstruction");
  const PhaseShiftSet reference = report.shifts ? *report.shifts : input_shifts(config);
  // Tabulate over the whole x grid so the interior below the report floor
  // is represented too.
  std::vector<double> r;
  std::vector<double> q;
  const double k2 = config.setup.k * config.setup.k;
  for (std::size_t i = rec.x.size(); i-- > 0;) {
    const double ri = config.setup.a * std::exp(-rec.x[i]);
    r.push_back(ri);
    q.push_back(rec.Q[i] / (ri * ri) + k2);
  }
  r.back() = config.setup.a;
  const PotentialSpec table = PotentialSpec::tabulated(std::move(r), std::move(q), config.setup.a);
  const PhaseShiftSet again =
      forward::phase_shift_set(table, config.setup, reference.l_max(), config.forward);
  std::vector<double> diff(reference.deltas.size());
  for (std::size_t l = 0; l < diff.size(); ++l) diff[l] = again.deltas[l] - reference.deltas[l];
  return diff;
}

}  // namespace pipeline
}  // namespace invscat
