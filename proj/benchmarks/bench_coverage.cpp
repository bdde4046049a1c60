#include <random>

#include <benchmark/benchmark.h>

#include "oracles.hpp"
#include "searchspace/coverage.hpp"
#include "searchspace/geometry.hpp"
#include "searchspace/grid.hpp"
#include "searchspace/ingest.hpp"

using namespace searchspace;

namespace {

NodeId id(std::size_t i) { return NodeId{static_cast<std::uint32_t>(i)}; }

GridSpec board(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  return {n, {n - 2, n - 1}};
}

void BM_PathCountsLattice(benchmark::State& state) {
  const auto spec = board(state);
  const auto env = monotone_lattice_envelope(spec);
  const auto f = spec.id_of({0, 0}), g = spec.id_of(spec.target);
  for (auto _ : state) benchmark::DoNotOptimize(path_counts(env, f, g, 64));
}
BENCHMARK(BM_PathCountsLattice)->Arg(5)->Arg(8)->Arg(16)->Arg(32);

void BM_CriticalParameterLattice(benchmark::State& state) {
  const auto spec = board(state);
  const auto env = monotone_lattice_envelope(spec);
  const auto f = spec.id_of({0, 0}), g = spec.id_of(spec.target);
  for (auto _ : state) benchmark::DoNotOptimize(critical_parameter(env, f, g));
}
BENCHMARK(BM_CriticalParameterLattice)->Arg(5)->Arg(8)->Arg(16)->Arg(32);

void BM_EvalCyclicKernel(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = oracle::random_fuzzy_kernel(n, 4.0 / static_cast<double>(n), false, rng);
  const CoverageSolver solver(k, id(0), id(n - 1));
  const double p = 0.9 / spectral_radius_bounds(k).scc_upper;
  for (auto _ : state) benchmark::DoNotOptimize(solver.evaluate(p));
}
BENCHMARK(BM_EvalCyclicKernel)->Arg(50)->Arg(500)->Arg(5000);

void BM_ResolventCyclicKernel(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = oracle::random_fuzzy_kernel(n, 4.0 / static_cast<double>(n), false, rng);
  const double p = 0.9 / k.max_row_sum();
  for (auto _ : state) benchmark::DoNotOptimize(eval_resolvent(k, id(0), id(n - 1), p));
}
BENCHMARK(BM_ResolventCyclicKernel)->Arg(50)->Arg(500)->Arg(5000);

void BM_Condense(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto env = oracle::random_digraph(n, 3.0 / static_cast<double>(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(condense(env));
}
BENCHMARK(BM_Condense)->Arg(1000)->Arg(3349);

// Log of the same shape as the motivating run: 3349 states, 34651 pairs.
void BM_EtaSweep(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> node(0, 3348);
  LogAggregator agg;
  for (int i = 0; i < 34651; ++i) {
    const int f = node(rng);
    agg.add("s" + std::to_string(f), "s" + std::to_string(std::min(3348, f + 1 + node(rng) % 40)));
  }
  const auto log = std::move(agg).take();
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.05 * i);
  for (auto _ : state) benchmark::DoNotOptimize(eta_sweep(log, grid));
}
BENCHMARK(BM_EtaSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
