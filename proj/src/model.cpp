#include "fjmm/model.hpp"

#include "fjmm/errors.hpp"

namespace fjmm {

SusceptibilityProfile::SusceptibilityProfile(Vector lambda) : lambda_(std::move(lambda)) {
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (!(lambda_[i] >= 0.0 && lambda_[i] <= 1.0)) {
      throw InvalidParameter("lambda_" + std::to_string(i + 1) + " must lie in [0, 1]");
    }
  }
}

SusceptibilityProfile SusceptibilityProfile::uniform(int n, double sigma) {
  return SusceptibilityProfile(Vector::Constant(n, sigma));
}

SusceptibilityProfile SusceptibilityProfile::stubborn(int n, const NodeSet& stubborn_nodes) {
  Vector lambda = Vector::Ones(n);
  for (int i : stubborn_nodes) {
    if (i < 0 || i >= n) throw InvalidParameter("stubborn node outside the graph");
    lambda[i] = 0.0;
  }
  return SusceptibilityProfile(std::move(lambda));
}

std::optional<double> SusceptibilityProfile::homogeneous() const {
  if (lambda_.size() == 0) return std::nullopt;
  const double first = lambda_[0];
  if ((lambda_.array() == first).all()) return first;
  return std::nullopt;
}

NodeSet SusceptibilityProfile::stubborn_set() const {
  NodeSet out;
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (lambda_[i] < 1.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

FJMMModel::FJMMModel(LagMatrixFamily family, SusceptibilityProfile susceptibility, Vector innate)
    : family_(std::move(family)), lambda_(std::move(susceptibility)), s_(std::move(innate)) {
  const int n = family_.size();
  if (lambda_.size() != n || s_.size() != n) {
    throw ValidationError("model dimensions disagree: family n=" + std::to_string(n) +
                          ", lambda n=" + std::to_string(lambda_.size()) +
                          ", s n=" + std::to_string(s_.size()));
  }
  if (!s_.allFinite()) throw ValidationError("innate opinions must be finite");
  const FamilyReport report = validate_family(family_);
  if (!report.pass) throw ValidationError("inadmissible lag family: " + report.message);

  const auto lam = lambda_.values().asDiagonal();
  scaled_.reserve(static_cast<std::size_t>(family_.depth()));
  for (const auto& m : family_.lags()) scaled_.emplace_back(lam * m);
  offset_ = (Vector::Ones(n) - lambda_.values()).cwiseProduct(s_);
}

FJMMModel FJMMModel::classical(const StochasticMatrix& w, SusceptibilityProfile susceptibility,
                               Vector innate) {
  return FJMMModel(LagMatrixFamily({w.matrix()}), std::move(susceptibility), std::move(innate));
}

Matrix FJMMModel::comparison_matrix() const {
  return lambda_.values().asDiagonal() * family_.sum();
}

Vector polarized_opinions(int n) {
  Vector s = Vector::Zero(n);
  s.tail(n - n / 2).setOnes();
  return s;
}

}  // namespace fjmm
