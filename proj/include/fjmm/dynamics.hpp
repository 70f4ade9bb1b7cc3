#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fjmm/model.hpp"
#include "fjmm/types.hpp"

namespace fjmm {

enum class StopReason { kHorizon, kTolerance };

/// Opinion vectors x(-L+1), ..., x(T). Index 0 holds x(-L+1).
class Trajectory {
 public:
  Trajectory(int depth, std::vector<Vector> history);

  int depth() const noexcept { return depth_; }
  int nodes() const noexcept { return static_cast<int>(states_.front().size()); }
  /// Number of stored vectors (history included).
  int size() const noexcept { return static_cast<int>(states_.size()); }
  int first_time() const noexcept { return 1 - depth_; }
  /// Last time index T.
  int horizon() const noexcept { return first_time() + size() - 1; }

  const Vector& at(int t) const;
  const Vector& final() const { return states_.back(); }
  const std::vector<Vector>& states() const noexcept { return states_; }

  StopReason stop_reason() const noexcept { return stop_; }
  void set_stop_reason(StopReason reason) noexcept { stop_ = reason; }
  void push(Vector x) { states_.push_back(std::move(x)); }

 private:
  int depth_;
  std::vector<Vector> states_;
  StopReason stop_ = StopReason::kHorizon;
};

/// x(t+1) from the last L vectors, newest first: history[0] = x(t).
/// Throws InvalidState unless history.size() == L.
Vector step(const FJMMModel& model, std::span<const Vector> history);

struct SimulationOptions {
  /// Last time index to compute. Required unless stop_tol is set.
  std::optional<int> horizon;
  /// Stop once ||x(t+1) - x(t)||_inf < stop_tol for L consecutive steps.
  std::optional<double> stop_tol;
  /// Initial history x(-L+1)..x(0), oldest first. Defaults to s repeated.
  std::optional<std::vector<Vector>> init;
};

/// Horizon used when only stop_tol is given.
inline constexpr int kDefaultMaxHorizon = 1000000;

Trajectory simulate(const FJMMModel& model, const SimulationOptions& options);

/// Memoryless comparison recursion x(t+1) = A x(t) + (I - Lambda) s with
/// A = Lambda sum_l W(l). The returned trajectory carries the same L-deep
/// history as simulate() so the two line up index for index.
Trajectory simulate_comparison(const FJMMModel& model, const SimulationOptions& options);

/// Unique fixed point x = (I - A)^-1 (I - Lambda) s. Throws InstabilityError
/// when the stubborn set is not globally reachable in the union graph, or
/// when I - A is numerically singular (reciprocal condition below sqrt(eps)).
Vector equilibrium(const FJMMModel& model);

/// (I - A)^-1 (I - Lambda); row-stochastic for stable models.
Matrix control_matrix(const FJMMModel& model);

/// m(t) = min over the window x(t-L+1..t) and s; M(t) the max. Index k of
/// each sequence corresponds to time t = k.
struct HullEnvelope {
  std::vector<double> lower;
  std::vector<double> upper;
};

inline constexpr double kHullSlack = 1e-12;

/// Throws InvariantViolation if m decreases or M increases by more than slack.
HullEnvelope hull_envelope(const Trajectory& trajectory, const Vector& innate,
                           double slack = kHullSlack);

}  // namespace fjmm
