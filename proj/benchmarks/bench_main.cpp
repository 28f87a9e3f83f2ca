#include <benchmark/benchmark.h>

#include "qkick/fidelity.hpp"
#include "qkick/flux.hpp"
#include "qkick/graph.hpp"
#include "qkick/oracle.hpp"
#include "qkick/step_grid.hpp"

namespace {

void BM_BuildGraph(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qkick::build_graph(n).node_count());
}
BENCHMARK(BM_BuildGraph)->Arg(5)->Arg(25)->Arg(40);

void BM_PropagateSin(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto k = qkick::generator_matrices(qkick::build_graph(n));
  const auto s = qkick::sin_power_schedule(n, 6);
  const int steps = qkick::default_step_count(s);
  for (auto _ : state) benchmark::DoNotOptimize(qkick::propagate(k, s, steps).alphas.data());
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_PropagateSin)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_AnalyzeSquare(benchmark::State& state) {
  const auto s = qkick::square_schedule(25, 20.0);
  const int steps = qkick::default_step_count(s);
  for (auto _ : state) benchmark::DoNotOptimize(qkick::analyze_transfer(s, steps).peak.value);
}
BENCHMARK(BM_AnalyzeSquare)->Unit(benchmark::kMillisecond);

void BM_OracleEvolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = qkick::sin_power_schedule(n, 6);
  const auto grid = qkick::step_grid(s, qkick::default_step_count(s));
  const auto psi0 = qkick::StateVector::product(
      qkick::SiteAssignment::from_labels("+" + std::string(n - 1, '0')));
  for (auto _ : state) benchmark::DoNotOptimize(qkick::evolve_final(psi0, s, grid).norm());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_OracleEvolve)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
