#include <cmath>
#include <vector>

#include "doctest.h"
#include "fjmm/dynamics.hpp"
#include "fjmm/errors.hpp"
#include "support.hpp"

using namespace fjmm;
using testing::Fraction;
using testing::FracMatrix;

namespace {

const std::vector<std::pair<int, int>> kBarbell3{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}};

FJMMModel barbell_two_hop(double beta0) {
  const StochasticMatrix w = row_stochastic(barbell(3));
  return FJMMModel(use_case_pair(UseCase::kTwoHop, w, MemoryWeights::uniform(6, beta0)),
                   SusceptibilityProfile::stubborn(6, {2, 3}), polarized_opinions(6));
}

/// Exact fixed point of the barbell example with beta0 = 4/5.
std::vector<Fraction> exact_barbell_equilibrium() {
  const FracMatrix w = testing::frac_uniform_weights(6, kBarbell3);
  const FracMatrix w2 = testing::frac_multiply(w, w);
  const std::vector<int> lambda{1, 1, 0, 0, 1, 1};
  const std::vector<int> s{0, 0, 0, 1, 1, 1};
  FracMatrix a(6, std::vector<Fraction>(6));
  std::vector<Fraction> b(6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const Fraction sum = Fraction(1, 5) * w[i][j] + Fraction(4, 5) * w2[i][j];
      a[i][j] = Fraction(i == j ? 1 : 0) - Fraction(lambda[i]) * sum;
    }
    b[i] = Fraction(1 - lambda[i]) * Fraction(s[i]);
  }
  return testing::solve_exact(a, b);
}

}  // namespace

TEST_CASE("step with lambda = 0 returns innate opinions") {
  const StochasticMatrix w = row_stochastic(cycle(5));
  Vector s(5);
  s << 0.1, 0.7, 0.3, 0.9, 0.5;
  const FJMMModel m(use_case_pair(UseCase::kMemory, w, MemoryWeights::uniform(5, 0.4)),
                    SusceptibilityProfile::uniform(5, 0.0), s);
  const std::vector<Vector> hist{Vector::Constant(5, 0.2), Vector::Constant(5, 0.8)};
  CHECK(step(m, hist) == s);
}

TEST_CASE("beta = 0 step equals the classical step") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.below(10);
    const StochasticMatrix w = row_stochastic(testing::random_digraph(rng, n, 0.4));
    Vector lambda(n), s(n), x(n), xprev(n);
    for (int i = 0; i < n; ++i) {
      lambda[i] = rng.uniform();
      s[i] = rng.uniform();
      x[i] = rng.uniform();
      xprev[i] = rng.uniform();
    }
    const FJMMModel fj = FJMMModel::classical(w, SusceptibilityProfile(lambda), s);
    const FJMMModel mm(use_case_pair(UseCase::kTwoHop, w, MemoryWeights::uniform(n, 0.0)),
                       SusceptibilityProfile(lambda), s);
    const std::vector<Vector> one{x};
    const std::vector<Vector> two{x, xprev};
    CHECK(step(fj, one) == step(mm, two));
  }
}

TEST_CASE("step rejects a history of the wrong length") {
  const FJMMModel m = barbell_two_hop(0.5);
  const std::vector<Vector> one{Vector::Zero(6)};
  CHECK_THROWS_AS(step(m, one), InvalidState);
  const std::vector<Vector> wrong_size{Vector::Zero(6), Vector::Zero(5)};
  CHECK_THROWS_AS(step(m, wrong_size), InvalidState);
}

TEST_CASE("barbell equilibrium against an exact rational solve") {
  const std::vector<Fraction> exact = exact_barbell_equilibrium();
  CHECK(exact[0] == Fraction(4, 13));
  CHECK(exact[1] == Fraction(4, 13));
  CHECK(exact[2] == Fraction(0));
  CHECK(exact[3] == Fraction(1));
  CHECK(exact[4] == Fraction(9, 13));
  CHECK(exact[5] == Fraction(9, 13));
  const Vector x = equilibrium(barbell_two_hop(0.8));
  for (int i = 0; i < 6; ++i) CHECK(std::abs(x[i] - exact[i].value()) <= 1e-12);

  const StochasticMatrix w = row_stochastic(barbell(3));
  const Vector fj = equilibrium(
      FJMMModel::classical(w, SusceptibilityProfile::stubborn(6, {2, 3}), polarized_opinions(6)));
  Vector expected(6);
  expected << 0, 0, 0, 1, 1, 1;
  CHECK((fj - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("control matrix of the barbell example") {
  const Matrix v = control_matrix(barbell_two_hop(0.8));
  for (int i = 0; i < 6; ++i) {
    CHECK(v.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.row(i).minCoeff() >= -1e-12);
  }
  CHECK(v(0, 2) + v(0, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v(0, 3) == doctest::Approx(4.0 / 13.0).epsilon(1e-12));
  CHECK(std::abs(v(0, 0)) < 1e-12);
}

TEST_CASE("hull of the barbell example collapses onto [0, 1]") {
  const FJMMModel m = barbell_two_hop(0.8);
  SimulationOptions opt;
  opt.horizon = 100;
  const Trajectory traj = simulate(m, opt);
  const HullEnvelope env = hull_envelope(traj, m.innate());
  REQUIRE(env.lower.size() == 101);
  for (std::size_t k = 0; k < env.lower.size(); ++k) {
    CHECK(env.lower[k] == 0.0);
    CHECK(env.upper[k] == 1.0);
  }
}

TEST_CASE("hull envelope is monotone on random models") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const FJMMModel m = testing::random_model(rng);
    std::vector<Vector> init;
    for (int l = 0; l < m.depth(); ++l) {
      Vector v(m.size());
      for (int i = 0; i < m.size(); ++i) v[i] = 4.0 * rng.uniform() - 2.0;
      init.push_back(v);
    }
    SimulationOptions opt;
    opt.horizon = 200;
    opt.init = init;
    const Trajectory traj = simulate(m, opt);
    CHECK_NOTHROW(hull_envelope(traj, m.innate()));
  }
}

TEST_CASE("hull envelope reports a violation") {
  Trajectory traj(1, {Vector::Constant(2, 0.5)});
  traj.push(Vector::Constant(2, 0.5));
  traj.push(Vector::Constant(2, 2.0));
  CHECK_THROWS_AS(hull_envelope(traj, Vector::Constant(2, 0.5)), InvariantViolation);
}

TEST_CASE("equilibrium is a fixed point of step") {
  Rng rng(23);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const FJMMModel m = testing::random_model(rng);
    Vector x;
    try {
      x = equilibrium(m);
    } catch (const InstabilityError&) {
      continue;
    }
    const std::vector<Vector> hist(static_cast<std::size_t>(m.depth()), x);
    CHECK((step(m, hist) - x).cwiseAbs().maxCoeff() <= 1e-10);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("trajectory indexing") {
  const FJMMModel m = barbell_two_hop(0.5);
  SimulationOptions opt;
  opt.horizon = 10;
  const Trajectory traj = simulate(m, opt);
  CHECK(traj.first_time() == -1);
  CHECK(traj.horizon() == 10);
  CHECK(traj.size() == 12);
  CHECK(traj.at(-1) == m.innate());
  CHECK(traj.at(0) == m.innate());
  CHECK_THROWS(traj.at(11));
  CHECK(traj.stop_reason() == StopReason::kHorizon);
}

TEST_CASE("comparison recursion equals simulate when beta = 0") {
  const StochasticMatrix w = row_stochastic(barbell(4));
  const FJMMModel m(use_case_pair(UseCase::kTwoHop, w, MemoryWeights::uniform(8, 0.0)),
                    SusceptibilityProfile::stubborn(8, {0}), polarized_opinions(8));
  SimulationOptions opt;
  opt.horizon = 60;
  const Trajectory a = simulate(m, opt);
  const Trajectory b = simulate_comparison(m, opt);
  REQUIRE(a.size() == b.size());
  for (int t = a.first_time(); t <= a.horizon(); ++t) CHECK((a.at(t) - b.at(t)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("totally stubborn network keeps its innate opinions") {
  const StochasticMatrix w = row_stochastic(complete(4));
  Vector s(4);
  s << 0.2, 0.4, 0.6, 0.8;
  const FJMMModel m(use_case_pair(UseCase::kInertia, w, MemoryWeights::uniform(4, 0.5)),
                    SusceptibilityProfile::uniform(4, 0.0), s);
  SimulationOptions opt;
  opt.horizon = 20;
  const Trajectory traj = simulate(m, opt);
  for (const Vector& x : traj.states()) CHECK(x == s);
}

TEST_CASE("stop tolerance ends the run early") {
  const FJMMModel m = barbell_two_hop(0.8);
  SimulationOptions opt;
  opt.stop_tol = 1e-9;
  const Trajectory traj = simulate(m, opt);
  CHECK(traj.stop_reason() == StopReason::kTolerance);
  CHECK(traj.horizon() < 2000);
  CHECK((traj.final() - equilibrium(m)).cwiseAbs().maxCoeff() < 1e-7);

  opt.horizon = 5;
  const Trajectory short_run = simulate(m, opt);
  CHECK(short_run.horizon() == 5);
  CHECK(short_run.stop_reason() == StopReason::kHorizon);

  CHECK_THROWS_AS(simulate(m, SimulationOptions{}), InvalidParameter);
}

TEST_CASE("explicit initial history") {
  const FJMMModel m = barbell_two_hop(0.3);
  SimulationOptions opt;
  opt.horizon = 3;
  opt.init = std::vector<Vector>{Vector::Constant(6, 0.25), Vector::Constant(6, 0.75)};
  const Trajectory traj = simulate(m, opt);
  CHECK(traj.at(-1) == Vector::Constant(6, 0.25));
  CHECK(traj.at(0) == Vector::Constant(6, 0.75));
  const std::vector<Vector> newest_first{Vector::Constant(6, 0.75), Vector::Constant(6, 0.25)};
  CHECK(traj.at(1) == step(m, newest_first));

  opt.init = std::vector<Vector>{Vector::Constant(6, 0.25)};
  CHECK_THROWS_AS(simulate(m, opt), InvalidState);
}

TEST_CASE("unstable models have no equilibrium") {
  const StochasticMatrix w = row_stochastic(barbell(3));
  const FJMMModel open(use_case_pair(UseCase::kMemory, w, MemoryWeights::uniform(6, 0.5)),
                       SusceptibilityProfile::uniform(6, 1.0), polarized_opinions(6));
  CHECK_THROWS_AS(equilibrium(open), InstabilityError);
  CHECK_THROWS_AS(control_matrix(open), InstabilityError);
}
