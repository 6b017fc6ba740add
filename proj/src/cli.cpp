#include "invscat/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "invscat/error.hpp"
#include "invscat/forward.hpp"
#include "invscat/io.hpp"
#include "invscat/pipeline.hpp"

namespace invscat::cli {
namespace {

struct PotentialFlags {
  std::string kind;
  double q0 = 0.0, q1 = 0.0, q2 = 0.0, r0 = 0.0, A = 0.0;
  std::string table;
  double a = 1.0, k = 1.0;
  CLI::Option* o_q0 = nullptr;
  CLI::Option* o_q1 = nullptr;
  CLI::Option* o_q2 = nullptr;
  CLI::Option* o_r0 = nullptr;
  CLI::Option* o_A = nullptr;
  CLI::Option* o_table = nullptr;
  CLI::Option* o_kind = nullptr;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_potential_flags(CLI::App* cmd, PotentialFlags& f, bool potential_required) {
  f.o_kind = cmd->add_option("--potential", f.kind, "constant | step | coulomb | table")
                 ->check(CLI::IsMember({"constant", "step", "coulomb", "table"}));
  if (potential_required) f.o_kind->required();
  f.o_q0 = cmd->add_option("--q0", f.q0, "constant potential strength");
  f.o_q1 = cmd->add_option("--q1", f.q1, "step: inner strength (r < r0)");
  f.o_q2 = cmd->add_option("--q2", f.q2, "step: outer strength (r0 <= r <= a)");
  f.o_r0 = cmd->add_option("--r0", f.r0, "step radius");
  f.o_A = cmd->add_option("--A", f.A, "shifted Coulomb strength");
  f.o_table = cmd->add_option("--table", f.table, "tabulated potential file ('r q' rows)");
  cmd->add_option("--a", f.a, "support radius")->required();
  cmd->add_option("--k", f.k, "wavenumber")->required();
}

std::optional<PotentialSpec> build_potential(const PotentialFlags& f) {
  struct Use {
    CLI::Option* opt;
    const char* name;
    bool wanted;
  };
  const std::vector<Use> uses{
      {f.o_q0, "--q0", f.kind == "constant"},
      {f.o_q1, "--q1", f.kind == "step"},
      {f.o_q2, "--q2", f.kind == "step"},
      {f.o_r0, "--r0", f.kind == "step"},
      {f.o_A, "--A", f.kind == "coulomb"},
      {f.o_table, "--table", f.kind == "table"},
  };
  for (const auto& u : uses) {
    const bool given = u.opt->count() > 0;
    if (u.wanted && !given) throw UsageError(std::string(u.name) + " is required for --potential " + f.kind);
    if (!u.wanted && given) {
      throw UsageError(std::string(u.name) + " does not apply to " +
                       (f.kind.empty() ? std::string("a run without --potential") : "--potential " + f.kind));
    }
  }
  if (!(f.a > 0.0) || !std::isfinite(f.a)) throw UsageError("--a must be > 0");
  if (!(f.k > 0.0) || !std::isfinite(f.k)) throw UsageError("--k must be > 0");
  if (f.kind.empty()) return std::nullopt;
  try {
    if (f.kind == "constant") return PotentialSpec::constant(f.q0, f.a);
    if (f.kind == "step") return PotentialSpec::step(f.q1, f.q2, f.r0, f.a);
    if (f.kind == "coulomb") return PotentialSpec::shifted_coulomb(f.A, f.a);
    const auto t = io::read_potential_table(f.table);
    return PotentialSpec::tabulated(t.r, t.q, f.a);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

SeriesOrder parse_series_order(const std::string& text) {
  if (text == "auto") return SeriesOrder::automatic();
  if (text == "full") return SeriesOrder::full();
  std::size_t used = 0;
  int n = -1;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n < 0) throw UsageError("--series-order must be auto, full or a non-negative integer");
  return SeriesOrder::fixed(n);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid printing "-0.000000".
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_file_atomic(path, text);
  }
}

int exit_for_stage(const StageError& e) {
  if (e.stage() == "config") return kUsage;
  return kInversionFailure;
}

struct InvertFlags {
  std::string mode = "exact-m";
  int l_max = 10;
  std::string shifts;
  double kappa_max = 0.0;
  double h = 0.02;
  double x_max = 8.0;
  std::string smooth = "off";
  std::string out;
  std::string series_order = "auto";
  std::string kernel = "derived";
  int steps = 4000;
  CLI::Option* o_kappa = nullptr;
  CLI::Option* o_lmax = nullptr;
};

int cmd_forward(const PotentialFlags& pf, int l_max, int steps, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  const auto q = build_potential(pf);
  if (!q) throw UsageError("--potential is required");
  if (l_max < 0 || l_max > 100) throw UsageError("--lmax must lie in [0, 100]");
  const ProblemSetup setup{pf.a, pf.k};
  forward::Options opts;
  opts.steps = steps;
  PhaseShiftSet set;
  try {
    set = forward::phase_shift_set(*q, setup, l_max, opts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidConfig) throw UsageError(e.what());
    err << "error: forward: " << e.what() << '\n';
    return kForwardFailure;
  }
  std::ostringstream text;
  text << "# potential=" << q->name() << " k=" << io::format_g9(pf.k) << '\n';
  text << "# l delta_l\n";
  for (int l = 0; l <= l_max; ++l) text << l << ' ' << fixed6(set.deltas[static_cast<std::size_t>(l)]) << '\n';
  emit(out_path, text.str(), out);
  return kOk;
}

int cmd_invert(const PotentialFlags& pf, const InvertFlags& f, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.potential = build_potential(pf);
  cfg.setup = {pf.a, pf.k};
  try {
    cfg.mode = parse_mode(f.mode);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (cfg.mode == Mode::ForwardOnly) throw UsageError("use the forward subcommand for phase shifts");
  cfg.l_max = f.l_max;
  if (f.o_kappa->count()) cfg.kappa_max = f.kappa_max;
  cfg.grid = {f.h, f.x_max};
  cfg.smooth = f.smooth == "on";
  cfg.forward.steps = f.steps;
  cfg.interpolation.order = parse_series_order(f.series_order);
  cfg.interpolation.kernel = f.kernel == "derived" ? InterpolationKernel::Derived : InterpolationKernel::AsPrinted;
  if (!f.shifts.empty()) {
    if (cfg.mode != Mode::PhaseShifts) throw UsageError("--shifts applies only to --mode phase-shifts");
    io::ShiftTable t;
    try {
      t = io::read_shift_file(f.shifts);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (f.o_lmax->count() && f.l_max != static_cast<int>(t.deltas.size()) - 1) {
      throw UsageError("--lmax disagrees with the number of rows in --shifts");
    }
    cfg.shifts = PhaseShiftSet{pf.k, pf.a, t.deltas};
    cfg.shift_sigma = t.sigma;
    cfg.l_max = static_cast<int>(t.deltas.size()) - 1;
  }

  RunReport rep;
  try {
    rep = pipeline::run(cfg);
  } catch (const StageError& e) {
    const int code = exit_for_stage(e);
    if (code == kUsage) throw UsageError(e.what());
    err << "error: stage " << e.what() << '\n';
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInversionFailure;
  }

  io::CsvDocument doc;
  doc.config = {
      {"potential", cfg.potential ? cfg.potential->name() : "unknown"},
      {"mode", to_string(cfg.mode)},
      {"a", io::format_g9(cfg.setup.a)},
      {"k", io::format_g9(cfg.setup.k)},
      {"lmax", std::to_string(cfg.l_max)},
      {"kappa_max", io::format_g9(rep.kappa_max)},
      {"h", io::format_g9(cfg.grid.h)},
      {"xmax", io::format_g9(cfg.grid.x_max)},
      {"smooth", cfg.smooth ? "on" : "off"},
      {"r_min", io::format_g9(cfg.setup.a * cfg.r_report_min_fraction)},
      {"steps", std::to_string(cfg.forward.steps)},
      {"shifts", f.shifts.empty() ? "solver" : "file"},
      {"series_order", f.series_order},
      {"kernel", f.kernel},
      {"m", rep.m_description.empty() ? "none" : rep.m_description},
  };
  doc.warnings = rep.warnings;
  const auto& rec = rep.reconstruction;
  for (std::size_t i = 0; i < rec.r.size(); ++i) {
    io::CsvRow row{rec.r[i], std::nullopt, rec.q[i]};
    if (cfg.potential) row.q_true = eval_q(*cfg.potential, rec.r[i]);
    doc.rows.push_back(row);
  }
  std::ostringstream csv;
  io::write_csv(csv, doc);

  std::ostringstream metrics;
  const auto& m = rep.metrics;
  if (m.has_truth) {
    metrics << "max_abs_err=" << io::format_g9(m.max_abs_err) << '\n';
    metrics << "l2_err=" << io::format_g9(m.l2_err) << '\n';
  }
  metrics << "window=" << io::format_g9(m.window_lo) << ':' << io::format_g9(m.window_hi) << '\n';
  metrics << "q_at_rmin=" << io::format_g9(m.q_at_rmin) << '\n';
  for (std::size_t l = 0; l < m.roundtrip_delta_err.size(); ++l) {
    metrics << "roundtrip_delta_err_" << l << '=' << io::format_g9(m.roundtrip_delta_err[l]) << '\n';
  }
  metrics << "min_rcond=" << io::format_g9(rep.min_rcond) << '\n';

  if (f.out.empty()) {
    out << csv.str();
    err << metrics.str();
  } else {
    io::write_file_atomic(f.out, csv.str());
    out << metrics.str();
  }
  for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
  return kOk;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, std::ostream& out) {
  io::CsvDocument a;
  io::CsvDocument b;
  try {
    a = io::read_csv(path_a);
    b = io::read_csv(path_b);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (a.rows.size() < 2 || b.rows.size() < 2) throw UsageError("each file needs at least two rows");
  const double lo = std::max(a.rows.front().r, b.rows.front().r);
  const double hi = std::min(a.rows.back().r, b.rows.back().r);
  if (!(hi > lo)) throw UsageError("the two reconstructions do not overlap in r");

  // Interpolate b linearly onto the nodes of a inside the overlap.
  double max_d = 0.0;
  double sum2 = 0.0;
  std::size_t n = 0;
  std::size_t j = 0;
  for (const auto& row : a.rows) {
    if (row.r < lo || row.r > hi) continue;
    while (j + 2 < b.rows.size() && b.rows[j + 1].r < row.r) ++j;
    const auto& p = b.rows[j];
    const auto& q = b.rows[j + 1];
    const double t = (row.r - p.r) / (q.r - p.r);
    const double v = (1.0 - t) * p.q_rec + t * q.q_rec;
    const double d = std::abs(row.q_rec - v);
    max_d = std::max(max_d, d);
    sum2 += d * d;
    ++n;
  }
  out << "max=" << io::format_g9(max_d) << '\n';
  out << "L2=" << io::format_g9(n ? std::sqrt(sum2 / static_cast<double>(n)) : 0.0) << '\n';
  out << "overlap=" << io::format_g9(lo) << ':' << io::format_g9(hi) << '\n';
  out << "points=" << n << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-energy inverse scattering: forward phase shifts and potential reconstruction", "invscat"};
  app.require_subcommand(1);
  // -h would clash with the grid-spacing flag --h.
  app.set_help_flag("--help", "print help and exit");

  PotentialFlags fwd_pot;
  int fwd_lmax = 10;
  int fwd_steps = 4000;
  std::string fwd_out;
  auto* fwd = app.add_subcommand("forward", "phase shifts delta_l of a potential");
  add_potential_flags(fwd, fwd_pot, true);
  fwd->add_option("--lmax", fwd_lmax, "highest partial wave");
  fwd->add_option("--steps", fwd_steps, "RK4 steps of the interior integration")->check(CLI::Range(16, 10000000));
  fwd->add_option("--out", fwd_out, "write the table here instead of standard output");

  PotentialFlags inv_pot;
  InvertFlags inv;
  auto* invc = app.add_subcommand("invert", "reconstruct q(r) from exact data or phase shifts");
  add_potential_flags(invc, inv_pot, false);
  invc->add_option("--mode", inv.mode, "exact-m | exact-delta | phase-shifts")
      ->check(CLI::IsMember({"exact-m", "exact-delta", "phase-shifts"}));
  inv.o_lmax = invc->add_option("--lmax", inv.l_max, "highest partial wave used");
  invc->add_option("--shifts", inv.shifts, "phase-shift file ('l delta' rows)");
  inv.o_kappa = invc->add_option("--kappa-max", inv.kappa_max, "end of the kappa grid (default 60, 40 for phase-shifts)");
  invc->add_option("--h", inv.h, "Marchenko grid spacing");
  invc->add_option("--xmax", inv.x_max, "Marchenko truncation point");
  invc->add_option("--smooth", inv.smooth, "smooth the recovered Q(x)")->check(CLI::IsMember({"on", "off"}));
  invc->add_option("--series-order", inv.series_order, "interpolation terms: auto | full | N");
  invc->add_option("--kernel", inv.kernel, "interpolation kernel: derived | as-printed")
      ->check(CLI::IsMember({"derived", "as-printed"}));
  invc->add_option("--steps", inv.steps, "RK4 steps of the forward solver")->check(CLI::Range(16, 10000000));
  invc->add_option("--out", inv.out, "CSV output file (standard output if omitted)");

  std::string cmp_a;
  std::string cmp_b;
  auto* cmp = app.add_subcommand("compare", "difference between two reconstruction CSV files");
  cmp->add_option("first", cmp_a, "CSV file")->required();
  cmp->add_option("second", cmp_b, "CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fwd->parsed()) return cmd_forward(fwd_pot, fwd_lmax, fwd_steps, fwd_out, out, err);
    if (invc->parsed()) return cmd_invert(inv_pot, inv, out, err);
    return cmd_compare(cmp_a, cmp_b, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return fwd->parsed() ? kForwardFailure : kInversionFailure;
  }
}

}  // namespace invscat::cli
