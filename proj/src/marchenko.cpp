#include "invscat/marchenko.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "invscat/error.hpp"
#include "numerics.hpp"

namespace invscat::marchenko {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> trapezoid_weights(std::size_t m, double h) {
  std::vector<double> w(m, h);
  if (m == 1) {
    w[0] = 0.0;
  } else {
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
  }
  return w;
}

}  // namespace

std::size_t GridSpec::nodes() const { return static_cast<std::size_t>(std::lround(x_max / h)) + 1; }

void GridSpec::validate() const {
  if (!(h > 0.0) || !(x_max > 0.0) || !std::isfinite(h) || !std::isfinite(x_max)) {
    throw Error(ErrorKind::InvalidConfig, "Marchenko grid needs h > 0 and x_max > 0");
  }
  const double n = x_max / h;
  if (std::abs(n - std::round(n)) > 1e-9 * n) throw Error(ErrorKind::InvalidConfig, "x_max must be a multiple of h");
  if (std::round(n) < 8) throw Error(ErrorKind::InvalidConfig, "Marchenko grid needs at least 9 nodes");
}

InputKernel::InputKernel(const PhaseFunctionGrid& phase) : kappa_max_(phase.kappa_max()) {
  if (phase.kappa.size() != phase.delta.size() || phase.kappa.size() < 3) {
    throw Error(ErrorKind::InvalidConfig, "phase grid is malformed");
  }
  std::vector<double> k{0.0};
  std::vector<double> d{0.0};
  k.insert(k.end(), phase.kappa.begin(), phase.kappa.end());
  d.insert(d.end(), phase.delta.begin(), phase.delta.end());
  const numerics::CubicSpline spline(std::move(k), std::move(d));

  const auto quad = numerics::gauss_legendre_panels(0.0, kappa_max_, 0.25, 20);
  nodes_ = quad.nodes;
  weights_ = quad.weights;
  one_minus_cos_.resize(nodes_.size());
  sin2_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double delta = spline(nodes_[i]);
    one_minus_cos_[i] = 2.0 * std::sin(delta) * std::sin(delta);
    sin2_[i] = std::sin(2.0 * delta);
  }
  // sin 2D ~ b1/k + b3/k^3, 1 - cos 2D ~ c2/k^2 for D ~ a1/k + a3/k^3.
  b1_ = 2.0 * phase.a1;
  b3_ = 2.0 * phase.a3 - 4.0 / 3.0 * phase.a1 * phase.a1 * phase.a1;
  c2_ = 2.0 * phase.a1 * phase.a1;
}

InputKernel::Parts InputKernel::parts(double z) const {
  if (!(z >= 0.0)) throw Error(ErrorKind::Domain, "input kernel needs z >= 0");
  Parts p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double kz = nodes_[i] * z;
    const double f = one_minus_cos_[i] * std::cos(kz) + sin2_[i] * std::sin(kz);
    p.head += weights_[i] * f;
    p.head_abs += weights_[i] * std::abs(f);
  }
  const double K = kappa_max_;
  const double Kz = K * z;
  // int_K^inf sin(kz)/k, cos(kz)/k^2, sin(kz)/k^3 dk; at z = 0 these are the
  // limits from above.
  const double i1 = kPi / 2.0 - numerics::sine_integral(Kz);
  const double ic2 = std::cos(Kz) / K - z * i1;
  const double is3 = std::sin(Kz) / (2.0 * K * K) + 0.5 * z * ic2;
  p.tail = b1_ * i1 + b3_ * is3 + c2_ * ic2;
  return p;
}

double InputKernel::operator()(double z) const {
  const Parts p = parts(z);
  return (p.head + p.tail) / kPi;
}

double InputKernel::tail_ratio(double z) const {
  const Parts p = parts(z);
  if (p.tail == 0.0) return 0.0;
  return std::abs(p.tail) / p.head_abs;
}

double input_kernel(const PhaseFunctionGrid& phase, double z) { return InputKernel(phase)(z); }

InputKernelGrid input_kernel_grid(const PhaseFunctionGrid& phase, const GridSpec& grid) {
  grid.validate();
  const InputKernel F(phase);
  const std::size_t n = grid.nodes();
  InputKernelGrid out{grid.h, grid.x_max, std::vector<double>(2 * n - 1)};
  std::vector<double> ratio(out.values.size(), 0.0);
  // Below one tail oscillation the closed-form tail legitimately dominates.
  const double z_check = 2.0 * kPi / phase.kappa_max();
  numerics::parallel_for(out.values.size(), [&](std::size_t j) {
    const double z = out.z(j);
    out.values[j] = F(z);
    if (z >= z_check) ratio[j] = F.tail_ratio(z);
  });
  const auto worst = std::max_element(ratio.begin(), ratio.end());
  if (*worst > 0.1) {
    std::ostringstream os;
    os << "input-kernel tail estimate is " << *worst << " of the head integral at z = "
       << out.z(static_cast<std::size_t>(worst - ratio.begin()));
    throw Error(ErrorKind::TailDivergence, os.str());
  }
  return out;
}

KernelDiagonal solve_kernel(const InputKernelGrid& F, bool want_rows) {
  const GridSpec grid{F.h, F.x_max};
  grid.validate();
  const std::size_t n = grid.nodes();
  if (F.values.size() < 2 * n - 1) throw Error(ErrorKind::InvalidConfig, "input kernel grid too short");

  KernelDiagonal out;
  out.h = F.h;
  out.x.resize(n);
  out.diag.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = static_cast<double>(i) * F.h;
  if (want_rows) out.rows.resize(n);
  std::vector<double> rcond(n, 1.0);

  numerics::parallel_for(n, [&](std::size_t i) {
    const std::size_t m = n - i;
    const auto w = trapezoid_weights(m, F.h);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t t = 0; t < m; ++t) {
        A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) = w[t] * F.values[2 * i + j + t];
      }
      A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += 1.0;
      rhs(static_cast<Eigen::Index>(j)) = -F.values[2 * i + j];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    rcond[i] = lu.rcond();
    if (!(rcond[i] >= 1e-12)) return;
    const Eigen::VectorXd K = lu.solve(rhs);
    out.diag[i] = K(0);
    if (want_rows) out.rows[i].assign(K.data(), K.data() + K.size());
  });

  out.min_rcond = *std::min_element(rcond.begin(), rcond.end());
  if (!(out.min_rcond >= 1e-12)) {
    std::ostringstream os;
    os << "Nystrom system is singular (reciprocal condition " << out.min_rcond << ")";
    throw Error(ErrorKind::SingularSystem, os.str());
  }
  return out;
}

std::vector<double> transformed_potential(const KernelDiagonal& K, bool smooth) {
  const auto& f = K.diag;
  const std::size_t n = f.size();
  if (n < 5) throw Error(ErrorKind::InvalidConfig, "need at least five diagonal samples");
  const double h = K.h;
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
    d[i] = (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4]) / (12.0 * h);
  }
  for (std::size_t i : {n - 1, n - 2}) {
    d[i] = (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4]) / (12.0 * h);
  }
  std::vector<double> Q(n);
  for (std::size_t i = 0; i < n; ++i) Q[i] = -2.0 * d[i];
  if (smooth) {
    std::vector<double> s = Q;
    for (std::size_t i = 2; i + 2 < n; ++i) {
      s[i] = (-3.0 * Q[i - 2] + 12.0 * Q[i - 1] + 17.0 * Q[i] + 12.0 * Q[i + 1] - 3.0 * Q[i + 2]) / 35.0;
    }
    Q = std::move(s);
  }
  return Q;
}

ReconstructedPotential backtransform(const std::vector<double>& x, const std::vector<double>& Q,
                                     const ProblemSetup& setup, double r_min_fraction) {
  setup.validate();
  if (x.size() != Q.size()) throw Error(ErrorKind::InvalidConfig, "x and Q sizes differ");
  ReconstructedPotential out;
  out.x = x;
  out.Q = Q;
  const double k2 = setup.k * setup.k;
  for (std::size_t idx = x.size(); idx-- > 0;) {
    const double r = setup.a * std::exp(-x[idx]);
    if (r < setup.a * r_min_fraction * (1.0 - 1e-12)) continue;
    out.r.push_back(r);
    out.q.push_back(Q[idx] / (r * r) + k2);
  }
  return out;
}

WavefunctionCheck wavefunction_check(const KernelDiagonal& K, const std::vector<double>& Q, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Domain, "wavefunction check needs lambda > 0");
  const std::size_t n = K.diag.size();
  if (K.rows.size() != n) throw Error(ErrorKind::RowsMissing, "kernel rows were not stored");
  if (Q.size() != n) throw Error(ErrorKind::InvalidConfig, "Q samples do not match the kernel grid");
  const double kap = std::sqrt(lambda);
  const double h = K.h;
  WavefunctionCheck out;
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = K.rows[i];
    const auto w = trapezoid_weights(row.size(), h);
    double integral = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) integral += w[j] * row[j] * std::sin(kap * K.x[i + j]);
    out.y[i] = (std::sin(kap * K.x[i]) + integral) / kap;
  }
  out.y0 = out.y[0];
  double scale = 0.0;
  for (double v : out.y) scale = std::max(scale, lambda * std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ypp = (out.y[i + 1] - 2.0 * out.y[i] + out.y[i - 1]) / (h * h);
    worst = std::max(worst, std::abs(-ypp + Q[i] * out.y[i] - lambda * out.y[i]));
  }
  out.residual = scale > 0.0 ? worst / scale : worst;
  return out;
}

}  // namespace invscat::marchenko
