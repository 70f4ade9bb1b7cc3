#include "fjmm/kernels.hpp"

#include <atomic>
#include <cassert>

namespace fjmm::kernels {

namespace {

#ifdef FJMM_HAVE_OPENMP
std::atomic<Backend> g_backend{Backend::kParallel};
#else
std::atomic<Backend> g_backend{Backend::kSerial};
#endif

// Below this many rows the fork/join overhead dominates.
constexpr Eigen::Index kParallelMinRows = 64;

inline double row_dot(const Matrix& a, Eigen::Index i, const Vector& x) {
  const double* row = a.data() + i * a.cols();
  const double* xv = x.data();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) acc += row[j] * xv[j];
  return acc;
}

}  // namespace

Backend default_backend() noexcept { return g_backend.load(std::memory_order_relaxed); }

void set_default_backend(Backend backend) noexcept {
  g_backend.store(backend, std::memory_order_relaxed);
}

bool parallel_available() noexcept {
#ifdef FJMM_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

void gemv_serial(const Matrix& a, const Vector& x, Vector& y) {
  assert(a.cols() == x.size());
  y.resize(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) y[i] = row_dot(a, i, x);
}

void gemv_parallel(const Matrix& a, const Vector& x, Vector& y) {
  assert(a.cols() == x.size());
  y.resize(a.rows());
  const Eigen::Index n = a.rows();
#ifdef FJMM_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (n >= kParallelMinRows)
#endif
  for (Eigen::Index i = 0; i < n; ++i) y[i] = row_dot(a, i, x);
}

void gemv(const Matrix& a, const Vector& x, Vector& y) {
  if (default_backend() == Backend::kParallel) {
    gemv_parallel(a, x, y);
  } else {
    gemv_serial(a, x, y);
  }
}

void lagged_sum_serial(std::span<const Matrix> as, std::span<const Vector> xs,
                       const Vector& c, Vector& y) {
  assert(as.size() == xs.size());
  y.resize(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < as.size(); ++k) acc += row_dot(as[k], i, xs[k]);
    y[i] = acc + c[i];
  }
}

void lagged_sum_parallel(std::span<const Matrix> as, std::span<const Vector> xs,
                         const Vector& c, Vector& y) {
  assert(as.size() == xs.size());
  y.resize(c.size());
  const Eigen::Index n = c.size();
#ifdef FJMM_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (n >= kParallelMinRows)
#endif
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < as.size(); ++k) acc += row_dot(as[k], i, xs[k]);
    y[i] = acc + c[i];
  }
}

void lagged_sum(std::span<const Matrix> as, std::span<const Vector> xs, const Vector& c,
                Vector& y) {
  if (default_backend() == Backend::kParallel) {
    lagged_sum_parallel(as, xs, c, y);
  } else {
    lagged_sum_serial(as, xs, c, y);
  }
}

}  // namespace fjmm::kernels
