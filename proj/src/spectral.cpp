#include "fjmm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fjmm/errors.hpp"
#include "fjmm/kernels.hpp"

namespace fjmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_nonnegative_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidParameter("spectral radius requires a non-empty square matrix");
  }
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidParameter("spectral radius requires a finite nonnegative matrix");
    }
  }
}

// max_i (Mx)_i / x_i; +inf if some x_i = 0 has (Mx)_i > 0.
double upper_bound(const Vector& x, const Vector& mx) {
  double hi = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      hi = std::max(hi, mx[i] / x[i]);
    } else if (mx[i] > 0.0) {
      return kInf;
    }
  }
  return hi;
}

// Lower bound from x restricted to its dominant support. Sorting x
// descending, S is cut at the largest ratio between consecutive values; the
// dropped tail contributes at most rowsum_i * max_{j not in S} x_j to (Mx)_i.
double lower_bound(const Vector& x, const Vector& mx, const Vector& row_sums,
                   std::vector<int>& order) {
  const auto n = static_cast<int>(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });

  auto bound_for_prefix = [&](int count, double tail) {
    double lo = kInf;
    for (int k = 0; k < count; ++k) {
      const int i = order[k];
      lo = std::min(lo, (mx[i] - row_sums[i] * tail) / x[i]);
    }
    return lo;
  };

  int cut = n;
  double best_gap = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double a = x[order[k]];
    const double b = x[order[k + 1]];
    if (a <= 0.0) break;
    const double gap = b > 0.0 ? a / b : kInf;
    if (gap > best_gap) {
      best_gap = gap;
      cut = k + 1;
    }
  }
  // Entries equal to zero never enter a prefix with a positive divisor.
  int positive = n;
  while (positive > 0 && !(x[order[positive - 1]] > 0.0)) --positive;

  double lo = bound_for_prefix(positive, positive < n ? x[order[positive]] : 0.0);
  if (cut < positive) lo = std::max(lo, bound_for_prefix(cut, x[order[cut]]));
  return lo;
}

}  // namespace

double spectral_radius_dense(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidParameter("spectral radius requires a non-empty square matrix");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(m), false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("dense eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

// Strongly connected components of the support graph of m (iterative Tarjan).
std::vector<std::vector<int>> strong_components(const Matrix& m) {
  const auto n = static_cast<int>(m.rows());
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<int> next(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  std::vector<int> call;
  std::vector<std::vector<int>> out;
  int counter = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back(root);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      const int v = call.back();
      int& j = next[v];
      while (j < n && !(m(v, j) > 0.0)) ++j;
      if (j < n) {
        const int w = j++;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

// Power iteration on M / r + I (r the largest row sum) for irreducible M.
RadiusEstimate perron_irreducible(const Matrix& m, const PowerIterationOptions& options) {
  const auto n = static_cast<int>(m.rows());
  const Vector row_sums = m.rowwise().sum();
  const double scale_shift = row_sums.maxCoeff();

  Vector x = Vector::Ones(n);
  Vector mx(n);
  std::vector<int> order(static_cast<std::size_t>(n));

  double lower = 0.0;
  double upper = kInf;
  double width_at_window_start = kInf;
  long iter = 0;
  for (; iter < options.max_iter; ++iter) {
    kernels::gemv(m, x, mx);
    upper = std::min(upper, upper_bound(x, mx));
    lower = std::max(lower, lower_bound(x, mx, row_sums, order));
    if (upper - lower <= options.tol) {
      RadiusEstimate est;
      est.lower = lower;
      est.upper = std::max(upper, lower);
      est.value = 0.5 * (est.lower + est.upper);
      est.iterations = iter + 1;
      return est;
    }
    if (options.stall_window > 0 && (iter + 1) % options.stall_window == 0) {
      const double width = upper - lower;
      if (width > 0.5 * width_at_window_start) break;
      width_at_window_start = width;
    }
    x += mx / scale_shift;
    const double scale = x.maxCoeff();
    if (!(scale > 0.0) || !std::isfinite(scale)) break;
    x /= scale;
  }

  if (options.dense_fallback) {
    const double dense = spectral_radius_dense(m);
    if (dense >= lower - options.tol && dense <= upper + options.tol) {
      RadiusEstimate est;
      est.value = dense;
      est.lower = lower;
      est.upper = upper;
      est.iterations = iter;
      est.method = RadiusMethod::kDenseFallback;
      return est;
    }
  }
  throw AccuracyError(lower, upper, iter);
}

}  // namespace

RadiusEstimate perron_root(const Matrix& m, const PowerIterationOptions& options) {
  check_nonnegative_square(m);
  const std::vector<std::vector<int>> comps = strong_components(m);
  if (comps.size() == 1 && m.rows() > 1) return perron_irreducible(m, options);

  // rho(M) is the largest Perron root over the diagonal blocks of the
  // strong components; a singleton block contributes its diagonal entry.
  RadiusEstimate best;
  for (const auto& comp : comps) {
    const auto k = static_cast<int>(comp.size());
    if (k == 1) {
      const double d = m(comp[0], comp[0]);
      if (d > best.value) {
        best.upper = std::max(best.upper, d);
        best.lower = std::max(best.lower, d);
        best.value = d;
      }
      continue;
    }
    Matrix block(k, k);
    double max_row = 0.0;
    for (int a = 0; a < k; ++a) {
      double row = 0.0;
      for (int b = 0; b < k; ++b) {
        block(a, b) = m(comp[a], comp[b]);
        row += block(a, b);
      }
      max_row = std::max(max_row, row);
    }
    if (max_row <= best.lower) continue;
    const RadiusEstimate est = perron_irreducible(block, options);
    best.iterations += est.iterations;
    best.lower = std::max(best.lower, est.lower);
    best.upper = std::max(best.upper, est.upper);
    if (est.value > best.value) {
      best.value = est.value;
      best.method = est.method;
    }
  }
  best.value = std::clamp(best.value, best.lower, best.upper);
  return best;
}

double spectral_radius(const Matrix& m, double tol, long max_iter) {
  PowerIterationOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return perron_root(m, options).value;
}

AugmentedSystem augmented(const FJMMModel& model) {
  const int n = model.size();
  const int depth = model.depth();
  const auto& scaled = model.scaled_lags();
  AugmentedSystem sys;
  sys.depth = depth;
  sys.nodes = n;
  sys.matrix = Matrix::Zero(n * depth, n * depth);
  sys.offset = Vector::Zero(n * depth);
  // Shift blocks: block row k picks up x from block k + 1.
  for (int k = 0; k + 1 < depth; ++k) {
    sys.matrix.block(k * n, (k + 1) * n, n, n).setIdentity();
  }
  // Last block row: block column k multiplies x(t - L + 1 + k), i.e. lag L - k.
  const int last = (depth - 1) * n;
  for (int k = 0; k < depth; ++k) {
    sys.matrix.block(last, k * n, n, n) = scaled[static_cast<std::size_t>(depth - 1 - k)];
  }
  sys.offset.tail(n) = model.offset();
  return sys;
}

Matrix comparison_matrix(const FJMMModel& model) { return model.comparison_matrix(); }

StabilityReport stability_report(const FJMMModel& model, const PowerIterationOptions& options) {
  StabilityReport report;
  report.depth = model.depth();
  report.rho_comparison = perron_root(model.comparison_matrix(), options).value;
  report.rho_augmented = perron_root(augmented(model).matrix, options).value;
  report.stubborn_set = model.susceptibility().stubborn_set();
  report.globally_reachable = globally_reachable(model.family().sum(), report.stubborn_set);

  auto decided = [](double rho) { return std::abs(rho - 1.0) > kMarginalBand; };
  report.criteria_agree = true;
  for (double rho : {report.rho_comparison, report.rho_augmented}) {
    if (decided(rho) && (rho < 1.0) != report.globally_reachable) report.criteria_agree = false;
  }
  if (report.depth <= 2 || !decided(report.rho_augmented)) {
    report.stable = report.globally_reachable;
  } else {
    report.stable = report.rho_augmented < 1.0;
  }
  return report;
}

bool single_matrix_sufficient(const StochasticMatrix& w, const StochasticMatrix& w_tilde,
                              const SusceptibilityProfile& lambda, const MemoryWeights& beta) {
  if (!beta.interior()) {
    throw InvalidParameter("the single-matrix test requires every beta_i strictly inside (0, 1)");
  }
  const auto lam = lambda.values().asDiagonal();
  const Matrix lw = lam * w.matrix();
  const Matrix lwt = lam * w_tilde.matrix();
  return spectral_radius(lw) < 1.0 - kMarginalBand || spectral_radius(lwt) < 1.0 - kMarginalBand;
}

namespace {

void check_open_unit(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    throw InvalidParameter(std::string(name) + " must lie strictly inside (0, 1)");
  }
}

}  // namespace

double closed_form_rho_homogeneous(double sigma, double beta0) {
  check_open_unit(sigma, "sigma");
  check_open_unit(beta0, "beta0");
  const double a = sigma * (1.0 - beta0);
  return 0.5 * (a + std::sqrt(a * a + 4.0 * sigma * beta0));
}

double closed_form_rho_alternate(double sigma, double beta0) {
  check_open_unit(sigma, "sigma");
  check_open_unit(beta0, "beta0");
  const double a = 1.0 - beta0;
  return 0.5 * (sigma * a + std::sqrt(sigma * a * a + 4.0 * beta0));
}

RateGap rate_gap_check(const FJMMModel& model, const PowerIterationOptions& options) {
  if (model.depth() != 2) throw InvalidParameter("rate gap check is defined for L = 2");
  const RadiusEstimate aug = perron_root(augmented(model).matrix, options);
  const RadiusEstimate cmp = perron_root(model.comparison_matrix(), options);
  RateGap gap;
  gap.rho_augmented = aug.value;
  gap.rho_comparison = cmp.value;
  // Both radii are only known up to their brackets; the inequality fails
  // only when the brackets prove it does.
  gap.holds = aug.upper >= cmp.lower - 1e-12;
  return gap;
}

double homogeneous_comparison_rho(double sigma, const StochasticMatrix& w_hat) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw InvalidParameter("sigma must lie in [0, 1]");
  return spectral_radius(sigma * w_hat.matrix());
}

}  // namespace fjmm
