#include <cmath>

#include "doctest.h"
#include "fjmm/errors.hpp"
#include "fjmm/experiments.hpp"
#include "fjmm/io.hpp"
#include "fjmm/spectral.hpp"
#include "support.hpp"

using namespace fjmm;

namespace {

FJMMModel barbell_two_hop(double beta0) {
  const StochasticMatrix w = row_stochastic(barbell(3));
  return FJMMModel(use_case_pair(UseCase::kTwoHop, w, MemoryWeights::uniform(6, beta0)),
                   SusceptibilityProfile::stubborn(6, {2, 3}), polarized_opinions(6));
}

/// [0 I; B A] assembled entry by entry.
Matrix companion(const Matrix& a, const Matrix& b) {
  const int n = static_cast<int>(a.rows());
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    m(i, n + i) = 1.0;
    for (int j = 0; j < n; ++j) {
      m(n + i, j) = b(i, j);
      m(n + i, n + j) = a(i, j);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("radius of simple matrices") {
  CHECK(spectral_radius(Matrix::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-12));
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(spectral_radius(swap) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_radius(Matrix::Zero(3, 3)) == doctest::Approx(0.0).epsilon(1e-12));
  Matrix nilpotent = Matrix::Zero(3, 3);
  nilpotent(0, 1) = 1.0;
  nilpotent(1, 2) = 1.0;
  CHECK(std::abs(spectral_radius(nilpotent)) <= 1e-10);
  Matrix neg = Matrix::Identity(2, 2);
  neg(0, 1) = -0.1;
  CHECK_THROWS_AS(spectral_radius(neg), InvalidParameter);
  CHECK_THROWS_AS(spectral_radius(Matrix::Zero(2, 3)), InvalidParameter);
}

TEST_CASE("power iteration agrees with a dense eigensolver") {
  Rng rng(99);
  int fallbacks = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + rng.below(30);
    const Matrix m = testing::random_nonnegative(rng, n, trial % 4);
    const RadiusEstimate est = perron_root(m);
    const double truth = testing::dense_rho(m);
    CHECK(std::abs(est.value - truth) <= 1e-9 * std::max(1.0, truth));
    CHECK(est.lower <= truth + 1e-9);
    CHECK(est.upper >= truth - 1e-9);
    if (est.method == RadiusMethod::kDenseFallback) ++fallbacks;
  }
  CHECK(fallbacks < 20);
}

TEST_CASE("dense radius helper") {
  Matrix rot(2, 2);
  rot << 0, -2, 2, 0;
  CHECK(spectral_radius_dense(rot) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("augmented matrix layout") {
  const FJMMModel m = barbell_two_hop(0.8);
  const AugmentedSystem aug = augmented(m);
  REQUIRE(aug.matrix.rows() == 12);
  const Matrix expected = companion(m.scaled_lags()[0], m.scaled_lags()[1]);
  CHECK(aug.matrix == expected);
  CHECK(aug.offset.head(6).isZero());
  CHECK(aug.offset.tail(6) == m.offset());
  CHECK(testing::dense_rho(aug.matrix) < 1.0);

  const StochasticMatrix w = row_stochastic(cycle(4));
  const FJMMModel one = FJMMModel::classical(w, SusceptibilityProfile::uniform(4, 0.5), Vector::Zero(4));
  const AugmentedSystem flat = augmented(one);
  CHECK(flat.matrix.rows() == 4);
  CHECK(flat.matrix == one.scaled_lags()[0]);
}

TEST_CASE("radius of [0 I; W 0] is the square root of rho(W)") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + rng.below(8);
    const Matrix w = 0.9 * testing::random_nonnegative(rng, n, 0);
    const Matrix c = companion(Matrix::Zero(n, n), w);
    CHECK(spectral_radius(c) == doctest::Approx(std::sqrt(testing::dense_rho(w))).epsilon(1e-9));
  }
}

TEST_CASE("depth-three augmented matrix") {
  const StochasticMatrix w = row_stochastic(cycle(5));
  const Matrix wm = w.matrix();
  const LagMatrixFamily fam({Matrix(0.5 * wm), Matrix(0.3 * wm * wm), Matrix(0.2 * Matrix::Identity(5, 5))});
  const FJMMModel m(fam, SusceptibilityProfile::uniform(5, 0.9), Vector::Ones(5));
  const AugmentedSystem aug = augmented(m);
  REQUIRE(aug.matrix.rows() == 15);
  CHECK(aug.matrix.block(0, 5, 5, 5) == Matrix::Identity(5, 5));
  CHECK(aug.matrix.block(5, 10, 5, 5) == Matrix::Identity(5, 5));
  CHECK(aug.matrix.block(10, 10, 5, 5) == m.scaled_lags()[0]);
  CHECK(aug.matrix.block(10, 0, 5, 5) == m.scaled_lags()[2]);
  const StabilityReport r = stability_report(m);
  CHECK(r.depth == 3);
  CHECK(r.stable);
  CHECK(r.rho_augmented == doctest::Approx(testing::dense_rho(aug.matrix)).epsilon(1e-9));
}

TEST_CASE("stability report of the barbell example") {
  const StabilityReport r = stability_report(barbell_two_hop(0.8));
  CHECK(r.stable);
  CHECK(r.globally_reachable);
  CHECK(r.criteria_agree);
  CHECK(r.rho_augmented < 1.0);
  CHECK(r.rho_comparison < 1.0);
  CHECK(r.stubborn_set == NodeSet{2, 3});

  const nlohmann::json j = io::to_json(r);
  CHECK(j["stubborn_set"] == nlohmann::json::array({3, 4}));
  CHECK(j["stable"] == true);
  CHECK(j.contains("rho_augmented"));
  CHECK(j.contains("criteria_agree"));
}

TEST_CASE("a model without stubborn nodes is unstable") {
  const StochasticMatrix w = row_stochastic(complete(5));
  const FJMMModel m(use_case_pair(UseCase::kMemory, w, MemoryWeights::uniform(5, 0.5)),
                    SusceptibilityProfile::uniform(5, 1.0), Vector::Zero(5));
  const StabilityReport r = stability_report(m);
  CHECK_FALSE(r.stable);
  CHECK(r.stubborn_set.empty());
  CHECK(r.rho_augmented == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spectral and graph verdicts agree on random models") {
  Rng rng(2024);
  int stable = 0;
  int unstable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const FJMMModel m = testing::random_model(rng);
    const StabilityReport r = stability_report(m);
    CHECK(r.criteria_agree);
    const double aug = testing::dense_rho(augmented(m).matrix);
    const double cmp = testing::dense_rho(comparison_matrix(m));
    if (std::abs(aug - 1.0) > 1e-7) CHECK(r.stable == (aug < 1.0));
    if (std::abs(cmp - 1.0) > 1e-7) CHECK(r.stable == (cmp < 1.0));
    (r.stable ? stable : unstable)++;
  }
  CHECK(stable > 30);
  CHECK(unstable > 30);
}

TEST_CASE("memory never speeds up convergence") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    testing::RandomModelOptions opt;
    opt.three_level_lambda = trial % 2 == 0;
    const FJMMModel m = testing::random_model(rng, opt);
    const RateGap gap = rate_gap_check(m);
    CHECK(gap.holds);
    CHECK(testing::dense_rho(augmented(m).matrix) >= testing::dense_rho(comparison_matrix(m)) - 1e-9);
  }
}

TEST_CASE("rate gap closes at beta = 0") {
  const FJMMModel m = barbell_two_hop(0.0);
  const RateGap gap = rate_gap_check(m);
  CHECK(gap.holds);
  CHECK(gap.rho_augmented == doctest::Approx(gap.rho_comparison).epsilon(1e-9));
}

TEST_CASE("recent memory is at least as slow as the classical model") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.below(10);
    const StochasticMatrix w = row_stochastic(testing::random_digraph(rng, n, 0.4));
    Vector lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = rng.uniform();
    const FJMMModel m(use_case_pair(UseCase::kMemory, w, MemoryWeights::uniform(n, rng.uniform())),
                      SusceptibilityProfile(lambda), Vector::Zero(n));
    const double classical = testing::dense_rho(lambda.asDiagonal() * w.matrix());
    CHECK(stability_report(m).rho_augmented >= classical - 1e-9);
  }
}

TEST_CASE("closed-form homogeneous rate") {
  const double sigma = 0.6;
  const double beta0 = 0.5;
  // Root of z^2 - sigma (1 - beta0) z - sigma beta0 = 0 via the companion matrix.
  Matrix c(2, 2);
  c << 0, 1, sigma * beta0, sigma * (1 - beta0);
  const double oracle = testing::dense_rho(c);
  CHECK(oracle == doctest::Approx(0.7178908345).epsilon(1e-10));
  CHECK(closed_form_rho_homogeneous(sigma, beta0) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(closed_form_rho_homogeneous(sigma, 1e-9) == doctest::Approx(sigma).epsilon(1e-6));
  CHECK(closed_form_rho_homogeneous(sigma, 1 - 1e-9) == doctest::Approx(std::sqrt(sigma)).epsilon(1e-6));
  CHECK(closed_form_rho_alternate(sigma, beta0) != doctest::Approx(oracle).epsilon(1e-6));
  CHECK_THROWS_AS(closed_form_rho_homogeneous(1.0, 0.5), InvalidParameter);
  CHECK_THROWS_AS(closed_form_rho_homogeneous(0.5, 0.0), InvalidParameter);
}

TEST_CASE("closed form matches numeric radius on several graphs") {
  for (const char* spec : {"cycle:9", "complete:7", "barbell:4"}) {
    const StochasticMatrix w = row_stochastic(GraphSpec::parse(spec, 1).build());
    const int n = w.size();
    for (double beta0 : {0.1, 0.4, 0.7, 0.9}) {
      for (const auto& [uc, blend] : std::vector<std::pair<UseCase, std::optional<BlendCoefficients>>>{
               {UseCase::kTwoHop, std::nullopt}, {UseCase::kBlend, BlendCoefficients(0.3, 0.7)}}) {
        const FJMMModel m(use_case_pair(uc, w, MemoryWeights::uniform(n, beta0), blend),
                          SusceptibilityProfile::uniform(n, 0.6), Vector::Zero(n));
        CHECK(stability_report(m).rho_augmented ==
              doctest::Approx(closed_form_rho_homogeneous(0.6, beta0)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("homogeneous comparison radius") {
  for (double sigma : {0.3, 0.6, 0.999}) {
    CHECK(homogeneous_comparison_rho(sigma, row_stochastic(cycle(6))) == doctest::Approx(sigma).epsilon(1e-12));
    CHECK(homogeneous_comparison_rho(sigma, row_stochastic(barbell(4))) == doctest::Approx(sigma).epsilon(1e-12));
  }
}

TEST_CASE("single-matrix sufficient condition") {
  const StochasticMatrix w = row_stochastic(barbell(3));
  const auto stubborn = SusceptibilityProfile::stubborn(6, {2, 3});
  const StochasticMatrix w2(w.matrix() * w.matrix());
  CHECK(single_matrix_sufficient(w, w2, stubborn, MemoryWeights::uniform(6, 0.5)));
  CHECK_THROWS_AS(single_matrix_sufficient(w, w2, stubborn, MemoryWeights::uniform(6, 1.0)), InvalidParameter);

  // Neither matrix alone reaches the stubborn node, the blend does.
  const auto inst = experiments::stabilization_instance();
  const MemoryWeights half = MemoryWeights::uniform(3, 0.5);
  CHECK_FALSE(single_matrix_sufficient(inst.w, inst.w_tilde, inst.lambda, half));
  const FJMMModel m(decomposed_pair(inst.w, inst.w_tilde, half), inst.lambda, Vector::Zero(3));
  CHECK(stability_report(m).stable);
  for (double b : {0.0, 1.0}) {
    const FJMMModel edge(decomposed_pair(inst.w, inst.w_tilde, MemoryWeights::uniform(3, b)), inst.lambda,
                         Vector::Zero(3));
    CHECK_FALSE(stability_report(edge).stable);
  }
}

TEST_CASE("acyclic support gives an exact zero radius") {
  Matrix m = Matrix::Zero(12, 12);
  for (int i = 0; i < 6; ++i) m(i, 6 + i) = 1.0;
  m(6, 1) = 0.583233;
  m(6, 5) = 0.416767;
  m(7, 3) = 0.5;
  m(10, 1) = 0.12844;
  m(10, 5) = 0.37156;
  m(11, 1) = 0.474876;
  m(11, 2) = 0.525124;
  const RadiusEstimate est = perron_root(m);
  CHECK(est.value == 0.0);
  CHECK(est.upper == 0.0);
  CHECK(est.method == RadiusMethod::kPowerIteration);
}

TEST_CASE("reducible matrix takes the largest block radius") {
  Matrix m = Matrix::Zero(5, 5);
  m(0, 1) = 0.2;
  m(1, 0) = 0.2;  // block radius 0.2
  m(2, 3) = 0.9;
  m(3, 4) = 0.9;
  m(4, 2) = 0.9;  // 3-cycle, radius 0.9
  m(1, 2) = 5.0;  // coupling between blocks does not change rho
  m(0, 0) = 0.05;
  CHECK(spectral_radius(m) == doctest::Approx(0.9).epsilon(1e-10));
  Rng rng(1);
  const Matrix tiny = 1e-6 * testing::random_nonnegative(rng, 8, 0);
  CHECK(spectral_radius(tiny) == doctest::Approx(testing::dense_rho(tiny)).epsilon(1e-9));
}
