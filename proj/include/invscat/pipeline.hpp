#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invscat/forward.hpp"
#include "invscat/jost.hpp"
#include "invscat/marchenko.hpp"
#include "invscat/mfunction.hpp"
#include "invscat/potentials.hpp"

namespace invscat {

enum class Mode { ExactM, ExactDelta, PhaseShifts, ForwardOnly };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct RunConfig {
  /// True potential; optional only in phase-shifts mode with supplied shifts.
  std::optional<PotentialSpec> potential;
  ProblemSetup setup;
  Mode mode = Mode::ExactM;
  int l_max = 10;
  /// Defaults to 60 in the exact modes and 40 in phase-shifts mode.
  std::optional<double> kappa_max;
  marchenko::GridSpec grid;
  bool smooth = false;
  /// User-supplied shifts override the forward solver.
  std::optional<PhaseShiftSet> shifts;
  /// Per-shift uncertainty of supplied shifts (radians).
  std::vector<double> shift_sigma;
  forward::Options forward;
  InterpolationOptions interpolation;
  double r_report_min_fraction = marchenko::kReportFloor;
  /// Bound-state terms in the input kernel; only 0 is supported.
  int bound_states = 0;
  bool keep_rows = false;

  double effective_kappa_max() const;
  void validate() const;
};

struct Metrics {
  bool has_truth = false;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double max_abs_err = 0.0;
  /// Root mean square of q_rec - q_true over the window nodes.
  double l2_err = 0.0;
  double q_at_rmin = 0.0;
  std::vector<double> roundtrip_delta_err;
};

struct RunReport {
  ReconstructedPotential reconstruction;
  std::optional<PhaseShiftSet> shifts;
  std::optional<PhaseFunctionGrid> phase;
  std::optional<KernelDiagonal> kernel;
  Metrics metrics;
  std::vector<std::string> warnings;
  std::string m_description;
  double kappa_max = 0.0;
  double min_rcond = 1.0;
};

namespace pipeline {

RunReport run(const RunConfig& config);

/// Phase shifts of the tabulated reconstruction minus the input shifts.
std::vector<double> roundtrip_check(const RunReport& report, const RunConfig& config);

/// Whether r belongs to the error window of `config` (excluding the
/// neighborhood of a step).
bool in_error_window(double r, const RunConfig& config);

/// Phase shifts used as input in phase-shifts mode.
PhaseShiftSet input_shifts(const RunConfig& config);

}  // namespace pipeline
}  // namespace invscat
