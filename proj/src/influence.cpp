#include "fjmm/influence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fjmm/errors.hpp"

namespace fjmm {

namespace {

const std::vector<std::pair<UseCase, std::string>>& tag_table() {
  static const std::vector<std::pair<UseCase, std::string>> kTags = {
      {UseCase::kTwoHop, "two-hop"},     {UseCase::kTwoHopAlt, "two-hop-alt"},
      {UseCase::kInertia, "inertia"},    {UseCase::kMemory, "memory"},
      {UseCase::kBlend, "blend"},        {UseCase::kLaggedComm, "lagged-comm"},
  };
  return kTags;
}

}  // namespace

std::string to_string(UseCase uc) {
  for (const auto& [value, tag] : tag_table()) {
    if (value == uc) return tag;
  }
  return "unknown";
}

UseCase parse_use_case(const std::string& tag) {
  for (const auto& [value, name] : tag_table()) {
    if (name == tag) return value;
  }
  std::string valid;
  for (const auto& name : use_case_tags()) valid += (valid.empty() ? "" : ", ") + name;
  throw InvalidParameter("unknown use case '" + tag + "' (valid: " + valid + ")");
}

const std::vector<std::string>& use_case_tags() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& entry : tag_table()) names.push_back(entry.second);
    return names;
  }();
  return kNames;
}

MemoryWeights::MemoryWeights(Vector beta) : beta_(std::move(beta)) {
  for (Eigen::Index i = 0; i < beta_.size(); ++i) {
    if (!(beta_[i] >= 0.0 && beta_[i] <= 1.0)) {
      throw InvalidParameter("beta_" + std::to_string(i + 1) + " must lie in [0, 1]");
    }
  }
}

MemoryWeights MemoryWeights::uniform(int n, double beta0) {
  return MemoryWeights(Vector::Constant(n, beta0));
}

bool MemoryWeights::interior() const {
  return (beta_.array() > 0.0).all() && (beta_.array() < 1.0).all();
}

BlendCoefficients::BlendCoefficients(double a1, double a2) : alpha1(a1), alpha2(a2) {
  if (!(a1 >= 0.0 && a2 >= 0.0) || std::abs(a1 + a2 - 1.0) > 1e-12) {
    throw InvalidParameter("blend coefficients must be nonnegative and sum to 1");
  }
}

LagMatrixFamily::LagMatrixFamily(std::vector<Matrix> lags) : lags_(std::move(lags)) {
  if (lags_.empty()) throw InvalidParameter("lag family needs depth L >= 1");
  const Eigen::Index n = lags_.front().rows();
  if (n == 0) throw InvalidParameter("lag matrices must be non-empty");
  for (const auto& m : lags_) {
    if (m.rows() != n || m.cols() != n) {
      throw InvalidParameter("lag matrices must all be square of the same size");
    }
  }
}

Matrix LagMatrixFamily::sum() const {
  Matrix total = Matrix::Zero(size(), size());
  for (const auto& m : lags_) total += m;
  return total;
}

FamilyReport validate_family(const LagMatrixFamily& family, double tolerance) {
  FamilyReport report;
  report.min_entry = std::numeric_limits<double>::infinity();
  for (int ell = 1; ell <= family.depth(); ++ell) {
    const Matrix& m = family.lag(ell);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double v = m(i, j);
        if (std::isnan(v) || v < report.min_entry) {
          report.min_entry = v;
          if (!(v >= 0.0)) {
            report.negative_at = {ell, static_cast<int>(i) + 1, static_cast<int>(j) + 1};
          }
        }
      }
    }
  }
  const Matrix total = family.sum();
  for (Eigen::Index i = 0; i < total.rows(); ++i) {
    const double dev = std::abs(total.row(i).sum() - 1.0);
    if (std::isnan(dev) || dev > report.max_row_sum_deviation) report.max_row_sum_deviation = dev;
  }
  const bool nonnegative = report.min_entry >= 0.0;
  const bool stochastic = report.max_row_sum_deviation <= tolerance;
  report.pass = nonnegative && stochastic;

  std::ostringstream os;
  os.precision(12);
  if (!nonnegative && report.negative_at) {
    const auto& [ell, i, j] = *report.negative_at;
    os << "negative entry " << report.min_entry << " in W(" << ell << ") at (" << i << ", " << j
       << "); ";
  }
  if (!stochastic) {
    os << "sum of lag matrices deviates from stochastic by " << report.max_row_sum_deviation;
  }
  if (report.pass) os << "ok";
  report.message = os.str();
  return report;
}

Matrix lagged_matrix(UseCase uc, const StochasticMatrix& w,
                     const std::optional<BlendCoefficients>& blend) {
  const Matrix& m = w.matrix();
  const int n = w.size();
  switch (uc) {
    case UseCase::kTwoHop:
      return m * m;
    case UseCase::kTwoHopAlt: {
      const Matrix b = binary_adjacency(m).matrix();
      const Matrix wb = m * b;
      const Vector d = wb.rowwise().sum();
      // W stochastic makes every row of WB positive; a zero means W is malformed.
      if (!(d.array() > 0.0).all()) {
        throw ValidationError("two-hop-alt normalizer W B 1 has a non-positive entry");
      }
      return d.cwiseInverse().asDiagonal() * wb;
    }
    case UseCase::kInertia:
      return Matrix::Identity(n, n);
    case UseCase::kMemory:
      return m;
    case UseCase::kBlend:
      if (!blend) throw InvalidParameter("use case 'blend' requires blend coefficients");
      return blend->alpha1 * m + blend->alpha2 * Matrix::Identity(n, n);
    case UseCase::kLaggedComm:
      break;
  }
  throw InvalidParameter("use case '" + to_string(uc) + "' has no lagged matrix W~");
}

LagMatrixFamily decomposed_pair(const StochasticMatrix& w, const StochasticMatrix& w_tilde,
                                const MemoryWeights& beta) {
  const int n = w.size();
  if (w_tilde.size() != n || beta.size() != n) {
    throw InvalidParameter("W, W~ and beta must have the same dimension");
  }
  const Vector& b = beta.values();
  const Vector keep = Vector::Ones(n) - b;
  std::vector<Matrix> lags;
  lags.emplace_back(keep.asDiagonal() * w.matrix());
  lags.emplace_back(b.asDiagonal() * w_tilde.matrix());
  return LagMatrixFamily(std::move(lags));
}

LagMatrixFamily use_case_pair(UseCase uc, const StochasticMatrix& w, const MemoryWeights& beta,
                              const std::optional<BlendCoefficients>& blend) {
  if (uc != UseCase::kBlend && blend) {
    throw InvalidParameter("blend coefficients are only valid with use case 'blend'");
  }
  if (uc == UseCase::kLaggedComm) return lagged_communication_pair(w);
  // W~ is stochastic for every tag; re-validate at the family tolerance since
  // W^2 and D^-1 W B accumulate rounding.
  StochasticMatrix w_tilde(lagged_matrix(uc, w, blend), kFamilyRowSumTolerance);
  return decomposed_pair(w, w_tilde, beta);
}

LagMatrixFamily lagged_communication_pair(const StochasticMatrix& w) {
  const Matrix& m = w.matrix();
  Matrix own = Matrix::Zero(m.rows(), m.cols());
  own.diagonal() = m.diagonal();
  Matrix others = m;
  others.diagonal().setZero();
  std::vector<Matrix> lags;
  lags.push_back(std::move(own));
  lags.push_back(std::move(others));
  return LagMatrixFamily(std::move(lags));
}

}  // namespace fjmm
