#include "numerics.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>
#include <gsl/gsl_spline.h>

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "invscat/error.hpp"
#include "invscat/threads.hpp"

namespace invscat {
namespace {
std::atomic<unsigned> g_workers{0};
}  // namespace

void set_worker_threads(unsigned n) { g_workers.store(n); }

unsigned worker_threads() {
  const unsigned n = g_workers.load();
  return n ? n : std::max(1u, std::thread::hardware_concurrency());
}
}  // namespace invscat

namespace invscat::numerics {

Quadrature gauss_legendre_panels(double lo, double hi, double panel_width, int order) {
  Quadrature q;
  if (!(hi > lo)) return q;
  if (!(panel_width > 0.0) || order < 1) throw Error(ErrorKind::InvalidConfig, "bad quadrature parameters");
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width - 1e-9)));
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
  if (!table) throw Error(ErrorKind::InvalidConfig, "cannot allocate Gauss-Legendre table");
  const double width = (hi - lo) / panels;
  q.nodes.reserve(static_cast<std::size_t>(panels * order));
  q.weights.reserve(static_cast<std::size_t>(panels * order));
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double b = (p + 1 == panels) ? hi : a + width;
    for (int i = 0; i < order; ++i) {
      double xi = 0.0;
      double wi = 0.0;
      gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &xi, &wi, table);
      q.nodes.push_back(xi);
      q.weights.push_back(wi);
    }
  }
  gsl_integration_glfixed_table_free(table);
  return q;
}

void append(Quadrature& into, const Quadrature& extra) {
  into.nodes.insert(into.nodes.end(), extra.nodes.begin(), extra.nodes.end());
  into.weights.insert(into.weights.end(), extra.weights.begin(), extra.weights.end());
}

struct CubicSpline::Impl {
  gsl_spline* spline = nullptr;
  ~Impl() {
    if (spline) gsl_spline_free(spline);
  }
};

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), impl_(std::make_unique<Impl>()) {
  if (x_.size() != y_.size() || x_.size() < 3) throw Error(ErrorKind::InvalidConfig, "spline needs >= 3 points");
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) throw Error(ErrorKind::InvalidConfig, "spline abscissae must increase");
  }
  impl_->spline = gsl_spline_alloc(gsl_interp_cspline, x_.size());
  gsl_spline_init(impl_->spline, x_.data(), y_.data(), x_.size());
}

CubicSpline::~CubicSpline() = default;

double CubicSpline::operator()(double x) const {
  // The GSL accelerator is not thread safe; evaluate without one.
  const double xc = std::clamp(x, x_.front(), x_.back());
  return gsl_spline_eval(impl_->spline, xc, nullptr);
}

double sine_integral(double x) { return gsl_sf_Si(x); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Keep the failure with the lowest index so errors do not depend on timing.
  std::exception_ptr first;
  std::size_t first_index = n;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < first_index) {
            first_index = i;
            first = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& design, const std::vector<double>& y) {
  const Eigen::Index rows = static_cast<Eigen::Index>(y.size());
  const Eigen::Index cols = design.empty() ? 0 : static_cast<Eigen::Index>(design.front().size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = design[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return std::vector<double>(c.data(), c.data() + c.size());
}

}  // namespace invscat::numerics
