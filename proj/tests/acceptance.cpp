// Acceptance checks. Prints one PASS/FAIL line per criterion.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "invscat/error.hpp"
#include "invscat/forward.hpp"
#include "invscat/io.hpp"
#include "invscat/jost.hpp"
#include "invscat/marchenko.hpp"
#include "invscat/mfunction.hpp"
#include "invscat/pipeline.hpp"
#include "invscat/threads.hpp"
#include "oracles.hpp"

using namespace invscat;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] ";
    }
    detail << what << "; ";
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig make_config(const PotentialSpec& q, double k, Mode mode, int l_max = 10) {
  RunConfig c;
  c.potential = q;
  c.setup = {q.a(), k};
  c.mode = mode;
  c.l_max = l_max;
  return c;
}

// Max |q_rec - q_true| on [0.02a, 0.95a]; relative to |q_true| when
// `relative`, with the neighborhood of a step removed.
double window_error(const RunReport& rep, const RunConfig& cfg, bool relative) {
  const double a = cfg.setup.a;
  const auto& rec = rep.reconstruction;
  double r0 = -1.0;
  if (const auto* s = std::get_if<potential::Step>(&cfg.potential->variant())) r0 = s->r0;
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.r.size(); ++i) {
    const double r = rec.r[i];
    if (r < 0.02 * a || r > 0.95 * a) continue;
    if (r0 > 0.0 && std::abs(r - r0) < 0.1 * a) continue;
    const double truth = eval_q(*cfg.potential, r);
    double e = std::abs(rec.q[i] - truth);
    if (relative) e /= std::abs(truth);
    worst = std::max(worst, e);
  }
  return worst;
}

// q_rec at the node nearest to r.
double q_near(const RunReport& rep, double r) {
  const auto& rec = rep.reconstruction;
  std::size_t best = 0;
  for (std::size_t i = 1; i < rec.r.size(); ++i) {
    if (std::abs(rec.r[i] - r) < std::abs(rec.r[best] - r)) best = i;
  }
  return rec.q[best];
}

std::string to_csv(const RunReport& rep, const RunConfig& cfg) {
  io::CsvDocument doc;
  doc.config = {{"mode", to_string(cfg.mode)}};
  doc.warnings = rep.warnings;
  for (std::size_t i = 0; i < rep.reconstruction.r.size(); ++i) {
    doc.rows.push_back({rep.reconstruction.r[i], eval_q(*cfg.potential, rep.reconstruction.r[i]),
                        rep.reconstruction.q[i]});
  }
  std::ostringstream os;
  io::write_csv(os, doc);
  return os.str();
}

const auto kCoulomb = PotentialSpec::shifted_coulomb(1.0, 2.0);
const auto kConstA = PotentialSpec::constant(0.5, 0.75);
const auto kConstB = PotentialSpec::constant(1.2, 1.0);
const auto kStep = PotentialSpec::step(1.25, 1.125, 1.0, 2.0);

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s08 = forward::phase_shift_set(kCoulomb, {2.0, 0.8}, 1);
  const auto s10 = forward::phase_shift_set(kCoulomb, {2.0, 1.0}, 3);
  const std::vector<double> ref08{-0.2991, -0.0317};
  const std::vector<double> ref10{-0.3481, -0.0538, -0.0046, -0.0002};
  double worst = 0.0;
  for (std::size_t l = 0; l < ref08.size(); ++l) worst = std::max(worst, std::abs(s08.deltas[l] - ref08[l]));
  for (std::size_t l = 0; l < ref10.size(); ++l) worst = std::max(worst, std::abs(s10.deltas[l] - ref10[l]));
  o.require(worst <= 5e-4, "max |delta - table| = " + fmt(worst));
  const double t = seconds_since(t0);
  o.require(t <= 5.0, "runtime " + fmt(t) + " s");
}

void criterion2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto [a, k] : {std::pair{0.75, 1.0}, std::pair{1.0, 1.0}, std::pair{2.0, 1.0}}) {
    for (int l = 0; l <= 10; ++l) {
      const double lambda = -(l + 0.5) * (l + 0.5);
      const double m0 = mfunction::m_from_phase_shift(0.0, l, {a, k});
      const double ref = mfunction::analytic_m_constant(a * a * k * k, lambda).real();
      worst = std::max(worst, std::abs(m0 - ref) / std::abs(ref));
    }
  }
  o.require(worst <= 1e-9, "max relative difference " + fmt(worst));
  const double t = seconds_since(t0);
  o.require(t <= 1.0, "runtime " + fmt(t) + " s");
}

void criterion3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  auto sup = [](const MRepresentation& m) {
    const auto d = jost::phase_from_dispersion(m);
    const auto e = jost::analytic_phase_grid(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.kappa.size(); ++i) {
      if (d.kappa[i] >= 0.1 && d.kappa[i] <= 20.0) worst = std::max(worst, std::abs(d.delta[i] - e.delta[i]));
    }
    return worst;
  };
  const double ec = sup(MRepresentation::analytic_constant(0.28125));
  o.require(ec <= 5e-3, "constant sup error " + fmt(ec));
  const TransformedPotential Q(kStep, {2.0, 1.0});
  const double es = sup(MRepresentation::analytic_step(*Q.s1(), *Q.s2(), *Q.x0()));
  o.require(es <= 1e-2, "step sup error " + fmt(es));
  const double t = seconds_since(t0);
  o.require(t <= 30.0, "runtime " + fmt(t) + " s");
}

void criterion4(Outcome& o) {
  struct Case {
    const PotentialSpec* q;
    double tol;
    bool relative;
    const char* name;
  };
  const Case cases[] = {{&kConstA, 0.01, false, "q0=0.5"}, {&kConstB, 0.025, false, "q0=1.2"},
                        {&kStep, 0.03, true, "step"}};
  for (const auto& c : cases) {
    for (Mode mode : {Mode::ExactM, Mode::ExactDelta}) {
      const auto cfg = make_config(*c.q, 1.0, mode);
      const auto t0 = std::chrono::steady_clock::now();
      const auto rep = pipeline::run(cfg);
      const double t = seconds_since(t0);
      const double e = window_error(rep, cfg, c.relative);
      o.require(e <= c.tol && t <= 60.0, std::string(c.name) + " " + to_string(mode) + (c.relative ? " rel " : " ") +
                                             "err " + fmt(e) + " (" + fmt(t) + " s)");
    }
  }
}

void criterion5(Outcome& o) {
  for (const auto* q : {&kConstA, &kConstB}) {
    const double q0 = std::get<potential::Constant>(q->variant()).q0;
    for (Mode mode : {Mode::ExactM, Mode::ExactDelta}) {
      const auto cfg = make_config(*q, 1.0, mode);
      const auto rep = pipeline::run(cfg);
      const double r = q->a() * std::exp(-6.0);
      const double e = std::abs(q_near(rep, r) - q0);
      o.require(e <= 0.05, "q0=" + fmt(q0) + " " + to_string(mode) + " |q(a e^-6) - q0| = " + fmt(e));
    }
  }
}

InputKernelGrid tabulate(const std::function<double(double)>& F, double h, double x_max) {
  const marchenko::GridSpec g{h, x_max};
  InputKernelGrid out{h, x_max, std::vector<double>(2 * g.nodes() - 1)};
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] = F(out.z(j));
  return out;
}

void criterion6(Outcome& o) {
  const auto K0 = marchenko::solve_kernel(tabulate([](double) { return 0.0; }, 0.02, 8.0), true);
  bool zero = true;
  for (double v : K0.diag) zero = zero && v == 0.0;
  for (const auto& row : K0.rows) {
    for (double v : row) zero = zero && v == 0.0;
  }
  o.require(zero, std::string("F = 0 gives K = 0: ") + (zero ? "exact" : "no"));

  const auto F = tabulate([](double z) { return 1e-2 * (std::exp(-1.3 * z) + 0.5 * std::cos(2.0 * z) * std::exp(-z * z)); },
                          0.05, 4.0);
  const auto K = marchenko::solve_kernel(F);
  const auto ref = oracle::neumann_diagonal(F.values, F.h, K.x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(K.diag[i] - ref[i]));
  o.require(worst <= 1e-10, "Neumann difference " + fmt(worst));

  const double c = 0.8, b = 1.3, X = 4.0;
  auto err = [&](double h) {
    const auto Ks = marchenko::solve_kernel(tabulate([&](double z) { return c * std::exp(-b * z); }, h, X));
    double e = 0.0;
    for (std::size_t i = 0; i < Ks.x.size(); ++i) {
      e = std::max(e, std::abs(Ks.diag[i] - oracle::separable_diagonal(c, b, Ks.x[i], X)));
    }
    return e;
  };
  double prev = err(0.08);
  double min_factor = 1e300;
  for (double h : {0.04, 0.02, 0.01}) {
    const double e = err(h);
    if (e > 1e-12) min_factor = std::min(min_factor, prev / e);
    prev = e;
  }
  o.require(min_factor >= 3.0, "refinement factor per halving >= " + fmt(min_factor));
}

void criterion7(Outcome& o) {
  auto cfg = make_config(kConstA, 1.0, Mode::ExactDelta);
  cfg.keep_rows = true;
  const auto rep = pipeline::run(cfg);
  const auto& K = *rep.kernel;
  const auto w = marchenko::wavefunction_check(K, rep.reconstruction.Q, 1.0);
  o.require(w.residual <= 1e-3, "relative ODE residual " + fmt(w.residual));
  const double tol = 10.0 * K.h * K.h;
  o.require(std::abs(w.y0) <= tol, "|y(0)| = " + fmt(std::abs(w.y0)) + " vs grid tolerance " + fmt(tol));
}

void criterion8(Outcome& o) {
  struct Run {
    PotentialSpec q;
    double k;
    int l_max;
    const char* name;
  };
  const Run runs[] = {{kConstA, 1.0, 10, "constant q0=0.5"},
                      {kConstB, 1.0, 10, "constant q0=1.2"},
                      {kStep, 1.0, 20, "step"},
                      {kCoulomb, 0.8, 1, "coulomb k=0.8"},
                      {kCoulomb, 1.0, 3, "coulomb k=1"}};
  for (const auto& r : runs) {
    bool done = true;
    std::string why;
    try {
      pipeline::run(make_config(r.q, r.k, Mode::PhaseShifts, r.l_max));
    } catch (const Error& e) {
      done = false;
      why = std::string(": ") + e.what();
    }
    o.require(done, std::string("(a) ") + r.name + (done ? " completes" : " failed" + why));
  }

  double err[3];
  const Mode modes[] = {Mode::ExactM, Mode::ExactDelta, Mode::PhaseShifts};
  for (int i = 0; i < 3; ++i) {
    const auto cfg = make_config(kConstA, 1.0, modes[i]);
    err[i] = window_error(pipeline::run(cfg), cfg, false);
  }
  o.require(err[0] <= err[1] + 5e-3 && std::max(err[0], err[1]) <= err[2],
            "(b) errors exact-m " + fmt(err[0]) + ", exact-delta " + fmt(err[1]) + ", phase-shifts " + fmt(err[2]));

  MSamples free;
  for (int l = 0; l <= 10; ++l) free.values.push_back(-(l + 0.5));
  free.sigma.assign(free.values.size(), 0.0);
  const auto m = MRepresentation::interpolated(free);
  bool exact = true;
  for (Complex lambda : {Complex(-3.0, 0.5), Complex(0.7, 0.0), Complex(25.0, 2.0)}) {
    exact = exact && m.eval(lambda) == Complex(0.0, 1.0) * mfunction::sqrt_upper(lambda);
  }
  o.require(exact, std::string("(c) free data ") + (exact ? "reproduce i sqrt(lambda) exactly" : "do not"));

  const auto cfg = make_config(kConstB, 1.0, Mode::PhaseShifts, 10);
  const auto rep = pipeline::run(cfg);
  bool sign = true;
  for (std::size_t i = 0; i < rep.reconstruction.r.size(); ++i) {
    const double r = rep.reconstruction.r[i];
    if (r >= 0.02 && r <= 0.9) sign = sign && rep.reconstruction.q[i] > 0.0;
  }
  const double e3 = std::abs(q_near(rep, std::exp(-3.0)) - 1.2);
  o.require(sign && e3 <= 0.6, std::string("(d) sign ") + (sign ? "correct" : "wrong") + ", |q(a e^-3) - q0| = " +
                                   fmt(e3));
}

void criterion9(Outcome& o) {
  struct Case {
    PotentialSpec q;
    Mode mode;
  };
  for (const auto& c : {Case{kConstA, Mode::ExactM}, Case{kStep, Mode::ExactDelta}, Case{kConstB, Mode::PhaseShifts}}) {
    const auto cfg = make_config(c.q, 1.0, c.mode);
    std::vector<std::string> out;
    for (unsigned threads : {1u, 4u, 4u}) {
      set_worker_threads(threads);
      out.push_back(to_csv(pipeline::run(cfg), cfg));
    }
    set_worker_threads(0);
    const bool same = out[0] == out[1] && out[1] == out[2];
    o.require(same, std::string(to_string(c.mode)) + " CSV " + (same ? "bit-identical" : "differs") +
                        " across 1/4/4 worker threads");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<void(Outcome&)>> checks{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (int n = 1; n <= 9; ++n) {
    if (only && n != only) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      checks[static_cast<std::size_t>(n - 1)](o);
    } catch (const std::exception& e) {
      o.require(false, std::string("error: ") + e.what());
    }
    std::string detail = o.detail.str();
    if (detail.size() >= 2) detail.resize(detail.size() - 2);
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << detail << ") ["
              << fmt(seconds_since(t0)) << " s]\n";
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
