#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "rugged/bounds.hpp"
#include "rugged/explorer.hpp"

namespace {

rugged::PrimalVec dense_vector(const rugged::SpaceSpec& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(space.head_dim());
  for (double& c : v) c = normal(rng);
  return rugged::PrimalVec(space, std::move(v));
}

void BM_GossezApply(benchmark::State& state) {
  const auto space = rugged::SpaceSpec::l1_truncation(static_cast<std::size_t>(state.range(0)));
  const auto x = dense_vector(space, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rugged::gossez_apply(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GossezApply)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

void BM_RangeBoxDistance(benchmark::State& state) {
  const auto space = rugged::SpaceSpec::l1_grid(static_cast<std::size_t>(state.range(0)));
  const auto op = rugged::OperatorSpec::fp_grid(space);
  const auto x = dense_vector(space, 2);
  const auto f = rugged::DualPoint::constant(space, -1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rugged::box_distance_sup(rugged::range_box(op, 2.0, x), f));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RangeBoxDistance)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

void BM_MOfLambda(benchmark::State& state) {
  double l = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rugged::m_of_lambda(l));
    l = l > 100.0 ? 0.01 : l * 1.01;
  }
}
BENCHMARK(BM_MOfLambda);

void BM_DistanceMinimize(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  const auto op = rugged::OperatorSpec::gossez(rugged::SpaceSpec::l1_truncation(k));
  const auto f = rugged::DualPoint::constant(op.space(), -1.0);
  rugged::SearchConfig cfg;
  cfg.head_dim = k;
  cfg.lambda = 1.0;
  cfg.restarts = 4;
  cfg.budget = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(rugged::distance_minimize(op, 1.0, f, cfg));
}
BENCHMARK(BM_DistanceMinimize)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ComboWitnessSearch(benchmark::State& state) {
  const auto op = rugged::OperatorSpec::gossez(rugged::SpaceSpec::l1_truncation(16));
  const auto f = rugged::DualPoint::constant(op.space(), -1.0);
  rugged::SearchConfig cfg;
  cfg.head_dim = 16;
  cfg.lambda = 0.5;
  cfg.restarts = 4;
  cfg.budget = 1000;
  cfg.witness_order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rugged::combo_witness_search(op, 0.5, f, cfg));
}
BENCHMARK(BM_ComboWitnessSearch)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
