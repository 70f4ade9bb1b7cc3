#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fjmm/netgen.hpp"
#include "fjmm/types.hpp"

namespace fjmm {

/// How the lagged matrix W~ is derived from W.
enum class UseCase {
  kTwoHop,      // W~ = W^2
  kTwoHopAlt,   // W~ = D^-1 W B, D = diag(W B 1)
  kInertia,     // W~ = I
  kMemory,      // W~ = W
  kBlend,       // W~ = a1 W + a2 I
  kLaggedComm,  // W1 = diag(W), W2 = W - diag(W)
};

/// CLI/config tag: two-hop, two-hop-alt, inertia, memory, blend, lagged-comm.
std::string to_string(UseCase uc);
UseCase parse_use_case(const std::string& tag);
const std::vector<std::string>& use_case_tags();

/// Per-node weight beta_i in [0, 1] placed on lagged opinions.
class MemoryWeights {
 public:
  explicit MemoryWeights(Vector beta);
  static MemoryWeights uniform(int n, double beta0);

  const Vector& values() const noexcept { return beta_; }
  int size() const noexcept { return static_cast<int>(beta_.size()); }
  /// True when every beta_i lies strictly inside (0, 1).
  bool interior() const;

 private:
  Vector beta_;
};

/// Convex pair (alpha1, alpha2) for W~ = alpha1 W + alpha2 I.
struct BlendCoefficients {
  double alpha1;
  double alpha2;

  /// Throws InvalidParameter unless both are >= 0 and sum to 1 within 1e-12.
  BlendCoefficients(double a1, double a2);
  static BlendCoefficients from_alpha1(double a1) { return {a1, 1.0 - a1}; }
};

/// Lag matrices W(1)..W(L). The constructor checks only shapes; use
/// validate_family for the admissibility condition.
class LagMatrixFamily {
 public:
  explicit LagMatrixFamily(std::vector<Matrix> lags);

  int depth() const noexcept { return static_cast<int>(lags_.size()); }
  int size() const noexcept { return static_cast<int>(lags_.front().rows()); }
  /// lag(1) multiplies x(t), lag(L) multiplies x(t-L+1).
  const Matrix& lag(int ell) const { return lags_.at(static_cast<std::size_t>(ell - 1)); }
  const std::vector<Matrix>& lags() const noexcept { return lags_; }
  Matrix sum() const;

 private:
  std::vector<Matrix> lags_;
};

struct FamilyReport {
  bool pass = false;
  double max_row_sum_deviation = 0.0;
  double min_entry = 0.0;
  // 1-based (lag, row, column) of the most negative entry, when min_entry < 0.
  std::optional<std::array<int, 3>> negative_at;
  std::string message;
};

inline constexpr double kFamilyRowSumTolerance = 1e-10;

FamilyReport validate_family(const LagMatrixFamily& family,
                             double tolerance = kFamilyRowSumTolerance);

/// The lagged matrix W~ for a use case (not defined for kLaggedComm).
Matrix lagged_matrix(UseCase uc, const StochasticMatrix& w,
                     const std::optional<BlendCoefficients>& blend = std::nullopt);

/// W(1) = (I - [beta]) W, W(2) = [beta] W~ for arbitrary stochastic W, W~.
LagMatrixFamily decomposed_pair(const StochasticMatrix& w, const StochasticMatrix& w_tilde,
                                const MemoryWeights& beta);

/// L = 2 family for a use case. beta is ignored for kLaggedComm; blend is
/// required for kBlend and rejected otherwise.
LagMatrixFamily use_case_pair(UseCase uc, const StochasticMatrix& w, const MemoryWeights& beta,
                              const std::optional<BlendCoefficients>& blend = std::nullopt);

LagMatrixFamily lagged_communication_pair(const StochasticMatrix& w);

}  // namespace fjmm
