#pragma once

#include "fjmm/model.hpp"
#include "fjmm/types.hpp"

namespace fjmm {

// ---------------------------------------------------------------------------
// Spectral radius of nonnegative matrices
// ---------------------------------------------------------------------------

struct PowerIterationOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  /// Give up on the power iteration once the bracket has failed to halve over
  /// this many iterations (defective or nearly-degenerate Perron root).
  long stall_window = 2000;
  /// On non-convergence, try a dense eigensolver and accept its value if it
  /// falls inside the bracket.
  bool dense_fallback = true;
};

enum class RadiusMethod { kPowerIteration, kDenseFallback };

/// Certified estimate: lower <= rho(M) <= upper.
struct RadiusEstimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  long iterations = 0;
  RadiusMethod method = RadiusMethod::kPowerIteration;
};

/// Perron root of M >= 0. M is split into the strong components of its
/// support graph; singleton blocks contribute their diagonal entry exactly
/// and every irreducible block runs power iteration on M / r + I (r its
/// largest row sum) from the all-ones vector. Each iterate x > 0 yields
/// Collatz-Wielandt bounds
///   min_{i in S} (M x_S)_i / x_i <= rho(M) <= max_i (M x)_i / x_i,
/// S being the dominant support of x; iteration stops when the bracket is
/// narrower than tol. The shift makes the Perron root the unique dominant
/// eigenvalue, so periodic blocks converge too.
///
/// Throws InvalidParameter for non-square or negative input and
/// AccuracyError (with the bracket) when neither route reaches tol.
RadiusEstimate perron_root(const Matrix& m, const PowerIterationOptions& options = {});

/// perron_root(m).value.
double spectral_radius(const Matrix& m, double tol = 1e-10, long max_iter = 100000);

/// Largest eigenvalue modulus from a dense general eigensolver.
double spectral_radius_dense(const Matrix& m);

// ---------------------------------------------------------------------------
// Comparison and augmented systems
// ---------------------------------------------------------------------------

/// Stacked recursion y(t) = A_d y(t-1) + C with y(t-1) = [x(t-L+1); ...; x(t)].
/// For L = 2, A_d = [0 I; Lambda W(2)  Lambda W(1)] and C = [0; (I - Lambda) s].
struct AugmentedSystem {
  Matrix matrix;
  Vector offset;
  int depth = 1;
  int nodes = 0;
};

AugmentedSystem augmented(const FJMMModel& model);

/// Lambda sum_l W(l).
Matrix comparison_matrix(const FJMMModel& model);

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

/// Radii within this distance of 1 are too close to call numerically.
inline constexpr double kMarginalBand = 1e-9;

struct StabilityReport {
  double rho_comparison = 0.0;
  double rho_augmented = 0.0;
  NodeSet stubborn_set;  // 0-based; serialized 1-based
  bool globally_reachable = false;
  bool stable = false;
  bool criteria_agree = true;
  int depth = 2;
};

/// Evaluates the spectral and graph criteria. For L <= 2 the graph criterion
/// (stubborn set non-empty and globally reachable in the union graph of the
/// lag matrices) decides `stable`; for L > 2 the augmented radius decides and
/// reachability is advisory. Never throws on disagreement.
StabilityReport stability_report(const FJMMModel& model, const PowerIterationOptions& options = {});

/// Sufficient test for W(1) = (I - [beta]) W, W(2) = [beta] W~ with beta
/// strictly inside (0, 1): rho(Lambda W) < 1 or rho(Lambda W~) < 1.
bool single_matrix_sufficient(const StochasticMatrix& w, const StochasticMatrix& w_tilde,
                              const SusceptibilityProfile& lambda, const MemoryWeights& beta);

// ---------------------------------------------------------------------------
// Convergence rates
// ---------------------------------------------------------------------------

/// rho(A_d) for Lambda = sigma I, beta = beta0 1 and W~ in {W^2, a1 W + a2 I}:
///   (sigma (1 - beta0) + sqrt(sigma^2 (1 - beta0)^2 + 4 sigma beta0)) / 2.
/// Requires sigma, beta0 in (0, 1).
double closed_form_rho_homogeneous(double sigma, double beta0);

/// The variant with sqrt(sigma (1 - beta0)^2 + 4 beta0) under the root. It
/// does not match the eigenvalue computation; kept so sweeps can show which
/// form the numeric radius follows.
double closed_form_rho_alternate(double sigma, double beta0);

struct RateGap {
  double rho_augmented = 0.0;
  double rho_comparison = 0.0;
  bool holds = false;  // rho(A_d) >= rho(A) - 1e-12, judged on certified brackets
};

/// Memory never speeds up convergence: rho(A_d) >= rho(A). L = 2 only.
RateGap rate_gap_check(const FJMMModel& model, const PowerIterationOptions& options = {});

/// rho(sigma W^) for stochastic W^; equals sigma.
double homogeneous_comparison_rho(double sigma, const StochasticMatrix& w_hat);

}  // namespace fjmm
