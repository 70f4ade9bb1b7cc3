#pragma once

// Test-only generators and oracles. Nothing here calls the code paths it is
// used to check.

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fjmm/influence.hpp"
#include "fjmm/model.hpp"
#include "fjmm/netgen.hpp"
#include "fjmm/random.hpp"

namespace fjmm::testing {

/// Largest |eigenvalue| from Eigen's dense eigensolver.
inline double dense_rho(const Matrix& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Random nonnegative n x n matrix. shape: 0 dense, 1 sparse (possibly
/// reducible), 2 block upper-triangular (reducible), 3 cyclic permutation
/// pattern with random weights (periodic).
inline Matrix random_nonnegative(Rng& rng, int n, int shape) {
  Matrix m = Matrix::Zero(n, n);
  switch (shape) {
    case 0:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.uniform();
      break;
    case 1:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (rng.bernoulli(0.2)) m(i, j) = rng.uniform();
      break;
    case 2: {
      const int cut = 1 + rng.below(std::max(1, n - 1));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if ((i < cut) == (j < cut) || (i < cut && j >= cut)) {
            if (rng.bernoulli(0.6)) m(i, j) = rng.uniform();
          }
      break;
    }
    default:
      for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = 0.1 + rng.uniform();
      break;
  }
  return m;
}

/// Random directed weighted graph in which every node has an out-arc.
inline InfluenceGraph random_digraph(Rng& rng, int n, double p) {
  InfluenceGraph g(n, true);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (rng.bernoulli(p)) g.add_edge(i, j, 0.1 + rng.uniform());
    }
    if (g.degree(i) == 0) g.add_edge(i, rng.below(n), 0.1 + rng.uniform());
  }
  return g;
}

struct RandomModelOptions {
  int min_n = 2;
  int max_n = 12;
  bool three_level_lambda = true;  // lambda in {0, 0.5, 1}; else uniform in [0, 1)
};

/// Random L = 2 model over every use-case tag.
inline FJMMModel random_model(Rng& rng, const RandomModelOptions& opt = {}) {
  const int n = opt.min_n + rng.below(opt.max_n - opt.min_n + 1);
  const double p = 0.1 + 0.5 * rng.uniform();
  const StochasticMatrix w = row_stochastic(random_digraph(rng, n, p));

  Vector lambda(n);
  // Skew toward lambda = 1 for some models so unstable ones show up.
  const double p_one = std::vector<double>{1.0 / 3.0, 0.8, 0.95}[rng.below(3)];
  for (int i = 0; i < n; ++i) {
    if (opt.three_level_lambda) {
      lambda[i] = rng.bernoulli(p_one) ? 1.0 : (rng.bernoulli(0.5) ? 0.0 : 0.5);
    } else {
      lambda[i] = rng.uniform();
    }
  }
  Vector beta(n);
  for (int i = 0; i < n; ++i) {
    const int kind = rng.below(10);
    beta[i] = kind == 0 ? 0.0 : (kind == 1 ? 1.0 : rng.uniform());
  }
  const auto& tags = use_case_tags();
  const UseCase uc = parse_use_case(tags[static_cast<std::size_t>(rng.below(static_cast<int>(tags.size())))]);
  std::optional<BlendCoefficients> blend;
  if (uc == UseCase::kBlend) blend = BlendCoefficients::from_alpha1(rng.uniform());
  Vector s(n);
  for (int i = 0; i < n; ++i) s[i] = rng.uniform();
  return FJMMModel(use_case_pair(uc, w, MemoryWeights(beta), blend),
                   SusceptibilityProfile(lambda), s);
}

/// Exact rational arithmetic for small hand-checkable systems.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }
  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend Fraction operator/(Fraction a, Fraction b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

using FracMatrix = std::vector<std::vector<Fraction>>;

/// Gauss-Jordan on an exact augmented system a x = b.
inline std::vector<Fraction> solve_exact(FracMatrix a, std::vector<Fraction> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (a[piv][c].num == 0) ++piv;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].num == 0) continue;
      const Fraction f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] = a[r][k] - f * a[c][k];
      b[r] = b[r] - f * b[c];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] = b[r] / a[r][r];
  return b;
}

inline FracMatrix frac_multiply(const FracMatrix& a, const FracMatrix& b) {
  const std::size_t n = a.size();
  FracMatrix c(n, std::vector<Fraction>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] = c[i][j] + a[i][k] * b[k][j];
  return c;
}

/// Uniform-neighbor weights of an undirected edge list on n nodes, exactly.
inline FracMatrix frac_uniform_weights(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  FracMatrix w(static_cast<std::size_t>(n), std::vector<Fraction>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j : nbrs[i]) w[i][j] = Fraction(1, static_cast<std::int64_t>(nbrs[i].size()));
  return w;
}

}  // namespace fjmm::testing
