#include "fjmm/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fjmm/errors.hpp"
#include "fjmm/kernels.hpp"
#include "fjmm/netgen.hpp"

namespace fjmm {

Trajectory::Trajectory(int depth, std::vector<Vector> history)
    : depth_(depth), states_(std::move(history)) {
  if (depth_ < 1) throw InvalidState("trajectory depth must be >= 1");
  if (static_cast<int>(states_.size()) != depth_) {
    throw InvalidState("initial history must hold exactly L = " + std::to_string(depth_) +
                       " vectors");
  }
  for (const auto& x : states_) {
    if (x.size() != states_.front().size()) throw InvalidState("history vectors differ in length");
  }
}

const Vector& Trajectory::at(int t) const {
  const int k = t - first_time();
  if (k < 0 || k >= size()) throw InvalidState("time " + std::to_string(t) + " not stored");
  return states_[static_cast<std::size_t>(k)];
}

Vector step(const FJMMModel& model, std::span<const Vector> history) {
  if (static_cast<int>(history.size()) != model.depth()) {
    throw InvalidState("step needs exactly L = " + std::to_string(model.depth()) +
                       " history vectors, got " + std::to_string(history.size()));
  }
  for (const auto& x : history) {
    if (x.size() != model.size()) throw InvalidState("history vector has the wrong length");
  }
  Vector next;
  kernels::lagged_sum(model.scaled_lags(), history, model.offset(), next);
  return next;
}

namespace {

std::vector<Vector> initial_history(const FJMMModel& model, const SimulationOptions& options) {
  if (options.init) {
    if (static_cast<int>(options.init->size()) != model.depth()) {
      throw InvalidState("initial history must hold exactly L vectors");
    }
    for (const auto& x : *options.init) {
      if (x.size() != model.size()) throw InvalidState("initial vector has the wrong length");
    }
    return *options.init;
  }
  return std::vector<Vector>(static_cast<std::size_t>(model.depth()), model.innate());
}

int resolve_horizon(const SimulationOptions& options) {
  if (options.horizon) {
    if (*options.horizon < 1) throw InvalidParameter("horizon must be >= 1");
    return *options.horizon;
  }
  if (!options.stop_tol) throw InvalidParameter("simulate needs a horizon or a stop tolerance");
  return kDefaultMaxHorizon;
}

// Shared driver: `lags` multiply the newest-first window of the trajectory.
Trajectory run(const std::vector<Matrix>& lags, const Vector& offset, int depth,
               const SimulationOptions& options, std::vector<Vector> init) {
  const int horizon = resolve_horizon(options);
  if (options.stop_tol && !(*options.stop_tol > 0.0)) {
    throw InvalidParameter("stop tolerance must be positive");
  }
  Trajectory traj(depth, std::move(init));
  const int used = static_cast<int>(lags.size());
  std::vector<Vector> window(static_cast<std::size_t>(used));
  int quiet = 0;
  for (int t = 0; t < horizon; ++t) {
    const auto& states = traj.states();
    for (int k = 0; k < used; ++k) window[k] = states[states.size() - 1 - k];
    Vector next;
    kernels::lagged_sum(lags, window, offset, next);
    if (!next.allFinite()) {
      throw NumericalFailure("non-finite opinion at t = " + std::to_string(t + 1));
    }
    const double change = (next - states.back()).lpNorm<Eigen::Infinity>();
    traj.push(std::move(next));
    if (options.stop_tol) {
      quiet = change < *options.stop_tol ? quiet + 1 : 0;
      if (quiet >= depth) {
        traj.set_stop_reason(StopReason::kTolerance);
        return traj;
      }
    }
  }
  traj.set_stop_reason(StopReason::kHorizon);
  return traj;
}

}  // namespace

Trajectory simulate(const FJMMModel& model, const SimulationOptions& options) {
  return run(model.scaled_lags(), model.offset(), model.depth(), options,
             initial_history(model, options));
}

Trajectory simulate_comparison(const FJMMModel& model, const SimulationOptions& options) {
  const std::vector<Matrix> lags{model.comparison_matrix()};
  return run(lags, model.offset(), model.depth(), options, initial_history(model, options));
}

namespace {

Eigen::PartialPivLU<Eigen::MatrixXd> factor_stable(const FJMMModel& model) {
  const NodeSet stubborn = model.susceptibility().stubborn_set();
  if (!globally_reachable(model.family().sum(), stubborn)) {
    throw InstabilityError(
        stubborn.empty()
            ? "no node has lambda < 1; the model has no unique equilibrium (see stability report)"
            : "stubborn nodes are not globally reachable; the model is not stable (see stability "
              "report)");
  }
  const int n = model.size();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - model.comparison_matrix();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const double threshold = std::sqrt(std::numeric_limits<double>::epsilon());
  const double rcond = lu.rcond();
  if (!(rcond >= threshold)) {
    std::ostringstream os;
    os << "I - A is numerically singular (reciprocal condition " << rcond
       << "); the model is at the edge of stability (see stability report)";
    throw InstabilityError(os.str());
  }
  return lu;
}

}  // namespace

Vector equilibrium(const FJMMModel& model) {
  const auto lu = factor_stable(model);
  Vector x = lu.solve(model.offset());
  const int n = model.size();
  const Vector residual = x - model.comparison_matrix() * x - model.offset();
  if (residual.lpNorm<Eigen::Infinity>() > 1e-10 * n) {
    throw NumericalFailure("equilibrium residual exceeds 1e-10 * n");
  }
  return x;
}

Matrix control_matrix(const FJMMModel& model) {
  const auto lu = factor_stable(model);
  const Eigen::MatrixXd rhs =
      (Vector::Ones(model.size()) - model.susceptibility().values()).asDiagonal();
  return lu.solve(rhs);
}

HullEnvelope hull_envelope(const Trajectory& trajectory, const Vector& innate, double slack) {
  const int depth = trajectory.depth();
  if (trajectory.size() < depth) throw InvalidState("trajectory shorter than its depth");
  if (innate.size() != trajectory.nodes()) throw InvalidState("innate vector has the wrong length");
  const double s_min = innate.minCoeff();
  const double s_max = innate.maxCoeff();
  const auto& states = trajectory.states();
  HullEnvelope env;
  // Window for time t covers stored indices t .. t + L - 1.
  for (std::size_t k = 0; k + depth <= states.size(); ++k) {
    double lo = s_min;
    double hi = s_max;
    for (int l = 0; l < depth; ++l) {
      lo = std::min(lo, states[k + l].minCoeff());
      hi = std::max(hi, states[k + l].maxCoeff());
    }
    if (!env.lower.empty()) {
      if (lo < env.lower.back() - slack || hi > env.upper.back() + slack) {
        std::ostringstream os;
        os.precision(17);
        os << "convex-hull envelope expanded at t = " << k << ": [" << env.lower.back() << ", "
           << env.upper.back() << "] -> [" << lo << ", " << hi << "]";
        throw InvariantViolation(os.str());
      }
    }
    env.lower.push_back(lo);
    env.upper.push_back(hi);
  }
  return env;
}

}  // namespace fjmm
