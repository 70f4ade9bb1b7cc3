#pragma once

#include <optional>

#include "fjmm/influence.hpp"
#include "fjmm/types.hpp"

namespace fjmm {

/// Diagonal of the susceptibility matrix; lambda_i = 0 is totally stubborn.
class SusceptibilityProfile {
 public:
  explicit SusceptibilityProfile(Vector lambda);
  static SusceptibilityProfile uniform(int n, double sigma);
  /// lambda = 0 on the given nodes, 1 elsewhere.
  static SusceptibilityProfile stubborn(int n, const NodeSet& stubborn_nodes);

  const Vector& values() const noexcept { return lambda_; }
  int size() const noexcept { return static_cast<int>(lambda_.size()); }
  double operator[](int i) const { return lambda_[i]; }

  /// The common value when every lambda_i is equal.
  std::optional<double> homogeneous() const;
  /// Nodes with lambda_i < 1.
  NodeSet stubborn_set() const;

 private:
  Vector lambda_;
};

/// x(t+1) = Lambda sum_l W(l) x(t-l+1) + (I - Lambda) s. Immutable.
class FJMMModel {
 public:
  /// Throws ValidationError when the family is not admissible or dimensions
  /// disagree.
  FJMMModel(LagMatrixFamily family, SusceptibilityProfile susceptibility, Vector innate);

  /// Classical model: L = 1 with W(1) = W.
  static FJMMModel classical(const StochasticMatrix& w, SusceptibilityProfile susceptibility,
                             Vector innate);

  int size() const noexcept { return family_.size(); }
  int depth() const noexcept { return family_.depth(); }
  const LagMatrixFamily& family() const noexcept { return family_; }
  const SusceptibilityProfile& susceptibility() const noexcept { return lambda_; }
  const Vector& innate() const noexcept { return s_; }

  /// Lambda W(l), l = 1..L, in lag order.
  const std::vector<Matrix>& scaled_lags() const noexcept { return scaled_; }
  /// (I - Lambda) s.
  const Vector& offset() const noexcept { return offset_; }
  /// Lambda sum_l W(l).
  Matrix comparison_matrix() const;

 private:
  LagMatrixFamily family_;
  SusceptibilityProfile lambda_;
  Vector s_;
  std::vector<Matrix> scaled_;
  Vector offset_;
};

/// Innate opinions 0 on the first half of the nodes and 1 on the rest.
Vector polarized_opinions(int n);

}  // namespace fjmm
