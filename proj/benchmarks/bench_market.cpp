#include "mobmarket/allocation.hpp"
#include "mobmarket/generator.hpp"
#include "mobmarket/solver.hpp"

#include <benchmark/benchmark.h>

using namespace mobmarket;

namespace {

MarketInstance instance(std::size_t n, std::size_t m, std::uint64_t seed = 1) {
  GeneratorOptions g;
  g.seed = seed;
  g.travelers = n;
  g.vehicles = m;
  g.max_capacity = 4;
  g.max_vertices = 12;
  g.max_extra_edges = 12;
  g.max_route_length = 8;
  return generate_instance(g);
}

void BM_Solver(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  MarketInstance inst = instance(n, std::max<std::size_t>(1, n / 3));
  for (auto _ : state) benchmark::DoNotOptimize(solve_optimal_assignment(inst).objective);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Solver)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_LpRelaxation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  MarketInstance inst = instance(n, std::max<std::size_t>(1, n / 3));
  auto weights = objective_weights(inst, Objective::surplus);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp_relaxation(inst, weights).objective);
}
BENCHMARK(BM_LpRelaxation)->RangeMultiplier(2)->Range(4, 32);

void BM_Oracle(benchmark::State& state) {
  MarketInstance inst = instance(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_optimum(inst).objective);
}
BENCHMARK(BM_Oracle)->DenseRange(3, 7, 2);

void BM_Synthesis(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  MarketInstance inst = instance(n, std::max<std::size_t>(1, n / 3));
  Assignment a = solve_optimal_assignment(inst).assignment;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_stable_payments(inst, a).index());
}
BENCHMARK(BM_Synthesis)->RangeMultiplier(2)->Range(4, 16);

}  // namespace
BENCHMARK_MAIN();
