#pragma once

#include <optional>
#include <vector>

#include "fjmm/dynamics.hpp"
#include "fjmm/types.hpp"

namespace fjmm {

/// P = (x - x*)'(x - x*) / n with x* the mean opinion.
struct PolarizationReport {
  double index = 0.0;
  double mean = 0.0;
  Vector reference;
};

PolarizationReport polarization_index(const Vector& x);

/// Mean opinion at every stored time, history included.
std::vector<double> mean_trajectory(const Trajectory& trajectory);

struct ConvergenceTime {
  /// First t >= 0 after which ||x(t) - x_bar||_inf <= tol holds for every
  /// remaining stored step; empty when the final state is still outside tol.
  std::optional<int> steps;
  double final_error = 0.0;

  bool converged() const noexcept { return steps.has_value(); }
};

ConvergenceTime convergence_time(const Trajectory& trajectory, const Vector& x_bar, double tol);

/// Geometric mean of successive error ratios ||x(t+1) - x_bar|| / ||x(t) - x_bar||
/// over the last `window` steps. Diagnostic only.
struct ConvergenceDiagnostics {
  ConvergenceTime time;
  std::optional<double> estimated_rate;
};

ConvergenceDiagnostics convergence_diagnostics(const Trajectory& trajectory, const Vector& x_bar,
                                               double tol, int window = 20);

}  // namespace fjmm
