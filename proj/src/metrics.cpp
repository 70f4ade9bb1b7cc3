#include "fjmm/metrics.hpp"

#include <cmath>

#include "fjmm/errors.hpp"

namespace fjmm {

PolarizationReport polarization_index(const Vector& x) {
  PolarizationReport report;
  report.reference = x;
  if (x.size() == 0) return report;
  report.mean = x.mean();
  const Vector centered = x.array() - report.mean;
  report.index = centered.squaredNorm() / static_cast<double>(x.size());
  return report;
}

std::vector<double> mean_trajectory(const Trajectory& trajectory) {
  std::vector<double> means;
  means.reserve(trajectory.states().size());
  for (const auto& x : trajectory.states()) means.push_back(x.mean());
  return means;
}

namespace {

std::vector<double> errors_from_zero(const Trajectory& trajectory, const Vector& x_bar) {
  if (x_bar.size() != trajectory.nodes()) throw InvalidState("equilibrium has the wrong length");
  std::vector<double> errors;
  for (int t = 0; t <= trajectory.horizon(); ++t) {
    errors.push_back((trajectory.at(t) - x_bar).lpNorm<Eigen::Infinity>());
  }
  return errors;
}

}  // namespace

ConvergenceTime convergence_time(const Trajectory& trajectory, const Vector& x_bar, double tol) {
  const auto errors = errors_from_zero(trajectory, x_bar);
  ConvergenceTime result;
  result.final_error = errors.back();
  if (result.final_error > tol) return result;
  int t = static_cast<int>(errors.size()) - 1;
  while (t > 0 && errors[static_cast<std::size_t>(t - 1)] <= tol) --t;
  result.steps = t;
  return result;
}

ConvergenceDiagnostics convergence_diagnostics(const Trajectory& trajectory, const Vector& x_bar,
                                               double tol, int window) {
  ConvergenceDiagnostics diag;
  diag.time = convergence_time(trajectory, x_bar, tol);
  const auto errors = errors_from_zero(trajectory, x_bar);
  // Skip steps already at rounding level; their ratios are noise.
  const double floor = 1e-14;
  double log_sum = 0.0;
  int used = 0;
  for (int k = static_cast<int>(errors.size()) - 1; k > 0 && used < window; --k) {
    const double prev = errors[static_cast<std::size_t>(k - 1)];
    const double cur = errors[static_cast<std::size_t>(k)];
    if (prev <= floor || cur <= floor) continue;
    log_sum += std::log(cur / prev);
    ++used;
  }
  if (used > 0) diag.estimated_rate = std::exp(log_sum / used);
  return diag;
}

}  // namespace fjmm
