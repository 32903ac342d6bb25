#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "copula_ot/copula_ot.h"

namespace {

using copula_ot::Distribution1D;

Distribution1D random_discrete(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> loc(-10.0, 10.0);
  std::exponential_distribution<double> mass(1.0);
  std::vector<double> atoms(n);
  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    atoms[i] = loc(rng);
    weights[i] = mass(rng) + 1e-3;
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return Distribution1D::discrete(atoms, weights);
}

void BM_Wasserstein1dDiscrete(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = random_discrete(rng, n);
  const auto g = random_discrete(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(copula_ot::wasserstein_1d(f, g, 2.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Wasserstein1dDiscrete)->RangeMultiplier(8)->Range(8, 32768)->Complexity();

void BM_Wasserstein1dNormal(benchmark::State& state) {
  const auto f = copula_ot::distributions::normal(0, 1);
  const auto g = copula_ot::distributions::normal(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(copula_ot::wasserstein_1d(f, g, 2.0));
}
BENCHMARK(BM_Wasserstein1dNormal);

void BM_SolveExact(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = random_discrete(rng, n);
  const auto g = random_discrete(rng, n);
  const copula_ot::TransportInstance inst{copula_ot::as_measure(f), copula_ot::as_measure(g), 2.0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(copula_ot::solve_exact(inst));
}
BENCHMARK(BM_SolveExact)->RangeMultiplier(2)->Range(4, 64);

void BM_DallAglio(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto plan = copula_ot::monotone_plan_1d(random_discrete(rng, n), random_discrete(rng, n));
  for (auto _ : state) benchmark::DoNotOptimize(copula_ot::dall_aglio_functional(plan, 1.5));
}
BENCHMARK(BM_DallAglio)->RangeMultiplier(4)->Range(4, 256);

void BM_ValidateCopula(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto c = copula_ot::m_copula(dim);
  for (auto _ : state) benchmark::DoNotOptimize(copula_ot::validate_copula(c, copula_ot::default_resolution(dim)));
}
BENCHMARK(BM_ValidateCopula)->DenseRange(2, 5);

}  // namespace
BENCHMARK_MAIN();
