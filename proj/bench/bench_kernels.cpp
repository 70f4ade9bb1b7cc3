// Serial reference kernels against their OpenMP counterparts, plus the
// end-to-end radius and simulation paths that sit on top of them.

#include <benchmark/benchmark.h>

#include <vector>

#include "fjmm/dynamics.hpp"
#include "fjmm/kernels.hpp"
#include "fjmm/netgen.hpp"
#include "fjmm/random.hpp"
#include "fjmm/spectral.hpp"

namespace {

using fjmm::Matrix;
using fjmm::Vector;
namespace kernels = fjmm::kernels;

Matrix random_matrix(int n, std::uint64_t seed) {
  fjmm::Rng rng(seed);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform();
  return m;
}

Vector random_vector(int n, std::uint64_t seed) {
  fjmm::Rng rng(seed);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform();
  return v;
}

template <auto Kernel>
void bm_gemv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix a = random_matrix(n, 1);
  const Vector x = random_vector(n, 2);
  Vector y;
  for (auto _ : state) {
    Kernel(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * n);
}

template <auto Kernel>
void bm_lagged_sum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<Matrix> as{random_matrix(n, 3), random_matrix(n, 4)};
  const std::vector<Vector> xs{random_vector(n, 5), random_vector(n, 6)};
  const Vector c = random_vector(n, 7);
  Vector y;
  for (auto _ : state) {
    Kernel(as, xs, c, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * static_cast<std::int64_t>(n) * n);
}

fjmm::FJMMModel sweep_model(int n) {
  const auto w = fjmm::row_stochastic(fjmm::watts_strogatz(n, fjmm::lattice_degree(n, 0.6), 0.7, 11));
  return fjmm::FJMMModel(
      fjmm::use_case_pair(fjmm::UseCase::kTwoHop, w, fjmm::MemoryWeights::uniform(n, 0.5)),
      fjmm::SusceptibilityProfile::uniform(n, 0.6), fjmm::polarized_opinions(n));
}

void bm_augmented_radius(benchmark::State& state) {
  kernels::set_default_backend(state.range(1) ? kernels::Backend::kParallel : kernels::Backend::kSerial);
  const fjmm::AugmentedSystem aug = fjmm::augmented(sweep_model(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(fjmm::spectral_radius(aug.matrix));
  kernels::set_default_backend(kernels::Backend::kParallel);
}

void bm_simulate(benchmark::State& state) {
  kernels::set_default_backend(state.range(1) ? kernels::Backend::kParallel : kernels::Backend::kSerial);
  const fjmm::FJMMModel model = sweep_model(static_cast<int>(state.range(0)));
  fjmm::SimulationOptions opt;
  opt.horizon = 200;
  for (auto _ : state) benchmark::DoNotOptimize(fjmm::simulate(model, opt).final().data());
  kernels::set_default_backend(kernels::Backend::kParallel);
}

}  // namespace

BENCHMARK(bm_gemv<kernels::gemv_serial>)->Name("gemv/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(bm_gemv<kernels::gemv_parallel>)->Name("gemv/parallel")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(bm_lagged_sum<kernels::lagged_sum_serial>)->Name("lagged_sum/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(bm_lagged_sum<kernels::lagged_sum_parallel>)
    ->Name("lagged_sum/parallel")
    ->RangeMultiplier(4)
    ->Range(64, 1024);
BENCHMARK(bm_augmented_radius)->ArgNames({"n", "parallel"})->ArgsProduct({{50, 200}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_simulate)->ArgNames({"n", "parallel"})->ArgsProduct({{50, 200}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
