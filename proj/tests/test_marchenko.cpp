#include <doctest.h>

#include <cmath>
#include <random>

#include "invscat/error.hpp"
#include "invscat/marchenko.hpp"
#include "oracles.hpp"

using namespace invscat;

namespace {

InputKernelGrid tabulate(const std::function<double(double)>& F, double h, double x_max) {
  const marchenko::GridSpec g{h, x_max};
  InputKernelGrid out{h, x_max, std::vector<double>(2 * g.nodes() - 1)};
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] = F(out.z(j));
  return out;
}

double separable_error(double h) {
  const double c = 0.8, b = 1.3, X = 4.0;
  const auto K = marchenko::solve_kernel(tabulate([&](double z) { return c * std::exp(-b * z); }, h, X));
  double worst = 0.0;
  for (std::size_t i = 0; i < K.x.size(); ++i) {
    worst = std::max(worst, std::abs(K.diag[i] - oracle::separable_diagonal(c, b, K.x[i], X)));
  }
  return worst;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK(marchenko::GridSpec{0.02, 8.0}.nodes() == 401);
  CHECK_THROWS_AS((marchenko::GridSpec{0.0, 8.0}.validate()), Error);
  CHECK_THROWS_AS((marchenko::GridSpec{0.5, 0.2}.validate()), Error);
}

TEST_CASE("zero input kernel gives a zero transformation kernel") {
  const auto K = marchenko::solve_kernel(tabulate([](double) { return 0.0; }, 0.05, 3.0), true);
  for (double v : K.diag) CHECK(v == 0.0);
  for (const auto& row : K.rows) {
    for (double v : row) CHECK(v == 0.0);
  }
  for (double q : marchenko::transformed_potential(K)) CHECK(q == 0.0);
}

TEST_CASE("Nystrom solution equals the Neumann series for small kernels") {
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c1 = u(rng), c2 = u(rng), b1 = 1.0 + std::abs(u(rng)), w = 3.0 * std::abs(u(rng));
  auto base = [&](double z) { return c1 * std::exp(-b1 * z) + c2 * std::cos(w * z) * std::exp(-z * z); };
  for (double eps : {1e-2, 1e-1}) {
    const auto F = tabulate([&](double z) { return eps * base(z); }, 0.05, 3.0);
    const auto K = marchenko::solve_kernel(F);
    const auto ref = oracle::neumann_diagonal(F.values, F.h, K.x.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(K.diag[i] - ref[i]) <= 1e-10);
  }
}

TEST_CASE("separable kernel converges at second order") {
  double prev = separable_error(0.08);
  for (double h : {0.04, 0.02, 0.01}) {
    const double e = separable_error(h);
    CHECK(prev / e >= 3.0);
    prev = e;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("derivative of a smooth diagonal") {
  KernelDiagonal K;
  K.h = 0.05;
  for (int i = 0; i <= 80; ++i) {
    const double x = i * K.h;
    K.x.push_back(x);
    K.diag.push_back(std::sin(x) + 0.3 * x * x);
  }
  const auto Q = marchenko::transformed_potential(K);
  for (std::size_t i = 0; i < Q.size(); ++i) {
    CHECK(Q[i] == doctest::Approx(-2.0 * (std::cos(K.x[i]) + 0.6 * K.x[i])).epsilon(1e-5).scale(1.0));
  }
  const auto Qs = marchenko::transformed_potential(K, true);
  CHECK(Qs[40] == doctest::Approx(Q[40]).epsilon(1e-3));
}

TEST_CASE("input kernel agrees with a brute-force Fourier integral") {
  const double s = 0.28125;
  const auto phase = jost::analytic_phase_grid(MRepresentation::analytic_constant(s));
  const marchenko::InputKernel F(phase);
  auto delta = [s](double k) { return -std::arg(oracle::jost_value_exponential(s, k)); };
  for (double z : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(std::abs(F(z) - oracle::fourier_kernel(delta, z, 2000.0, 1000000)) < 1e-6);
  }
  CHECK(marchenko::input_kernel(phase, 1.0) == F(1.0));
}

TEST_CASE("two-layer input kernel agrees with a brute-force Fourier integral") {
  // The jump at x0 leaves oscillating 1/kappa^2 terms in the phase that the
  // smooth tail model beyond kappa_max does not carry.
  const double si = -1.0, so = -0.5, x0 = std::log(2.0);
  const auto phase = jost::analytic_phase_grid(MRepresentation::analytic_step(si, so, x0));
  const marchenko::InputKernel F(phase);
  auto delta = [&](double k) { return -std::arg(oracle::jost_value_two_layer(si, so, x0, k)); };
  for (double z : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(std::abs(F(z) - oracle::fourier_kernel(delta, z, 1000.0, 500000)) < 2e-5);
  }
}

TEST_CASE("free phase gives a vanishing input kernel") {
  PhaseFunctionGrid g;
  g.kappa = jost::kappa_grid({});
  g.delta.assign(g.kappa.size(), 0.0);
  const auto F = marchenko::input_kernel_grid(g, {0.05, 2.0});
  for (double v : F.values) CHECK(v == 0.0);
}

TEST_CASE("backtransform keeps radii above the report floor") {
  std::vector<double> x, Q;
  for (int i = 0; i <= 400; ++i) {
    x.push_back(i * 0.02);
    Q.push_back(-0.28125 * std::exp(-2.0 * x.back()));
  }
  const ProblemSetup setup{0.75, 1.0};
  const auto rec = marchenko::backtransform(x, Q, setup);
  REQUIRE(!rec.r.empty());
  CHECK(rec.r.front() >= setup.a * marchenko::kReportFloor * (1 - 1e-12));
  CHECK(rec.r.back() == doctest::Approx(setup.a));
  for (std::size_t i = 1; i < rec.r.size(); ++i) CHECK(rec.r[i] > rec.r[i - 1]);
  for (double q : rec.q) CHECK(q == doctest::Approx(0.5));
}

TEST_CASE("wavefunction check needs stored rows") {
  const auto F = tabulate([](double z) { return 0.1 * std::exp(-z); }, 0.05, 3.0);
  const auto K = marchenko::solve_kernel(F);
  const auto Q = marchenko::transformed_potential(K);
  CHECK_THROWS_AS(marchenko::wavefunction_check(K, Q, 1.0), Error);
  const auto Kr = marchenko::solve_kernel(F, true);
  const auto w = marchenko::wavefunction_check(Kr, marchenko::transformed_potential(Kr), 1.0);
  CHECK(w.y.size() == Kr.x.size());
  CHECK_THROWS_AS(marchenko::wavefunction_check(Kr, Q, -1.0), Error);
}

TEST_CASE("singular systems are reported") {
  // Constant F = -1/X: the first row is I - (1/X) 1 w^T with sum w = X.
  const double X = 1.0;
  const auto F = tabulate([X](double) { return -1.0 / X; }, 0.125, X);
  try {
    marchenko::solve_kernel(F);
    FAIL("expected SingularSystem");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularSystem);
  }
}
