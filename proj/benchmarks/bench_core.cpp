#include <benchmark/benchmark.h>

#include "pmflab/fading.hpp"
#include "pmflab/flow.hpp"
#include "pmflab/graph.hpp"
#include "pmflab/interference.hpp"
#include "pmflab/random_net.hpp"

using namespace pmflab;

static void BM_SparsestCutExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CapGraph g = CapGraph::complete(n);
  WeightVector w = WeightVector::uniform(n);
  for (auto _ : state) benchmark::DoNotOptimize(sparsest_cut_exact(g, w).sparsity);
}
BENCHMARK(BM_SparsestCutExact)->Arg(12)->Arg(16)->Arg(18);

static void BM_ConcurrentFlowLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CapGraph g = CapGraph::complete(n);
  WeightVector w = WeightVector::uniform(n);
  for (auto _ : state) benchmark::DoNotOptimize(max_concurrent_pmf(g, w).f);
}
BENCHMARK(BM_ConcurrentFlowLp)->Arg(6)->Arg(8)->Arg(10);

static void BM_ConcurrentFlowApprox(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Network net = sample_geometric(n, Region::unit_square(), 1);
  ConflictModel model = protocol_model(net, 0.4, 0.1, true);
  WeightVector w = WeightVector::uniform(n);
  SolveOptions approx{Limits{}, SolveOptions::Mode::Approx, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(max_concurrent_pmf(model.graph, w, approx).f);
}
BENCHMARK(BM_ConcurrentFlowApprox)->Arg(36)->Arg(64);

static void BM_ConflictColoring(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Network net = sample_geometric(n, Region::unit_square(), 2);
  ConflictModel model = protocol_model(net, 0.35, 0.1, true);
  for (auto _ : state) benchmark::DoNotOptimize(conflict_coloring(model).kappa_hat);
}
BENCHMARK(BM_ConflictColoring)->Arg(64)->Arg(100);

static void BM_ExpectedLogCapacity(benchmark::State& state) {
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_log_capacity(s));
    s = s < 100.0 ? s * 1.7 : 0.1;
  }
}
BENCHMARK(BM_ExpectedLogCapacity);

static void BM_BottleneckMatching(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Network net = sample_geometric(m * m, Region::unit_square(), 3);
  std::vector<Point> grid = grid_points(m);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bottleneck_matching(grid, net.points, net.region).r_star);
}
BENCHMARK(BM_BottleneckMatching)->Arg(4)->Arg(8)->Arg(10);

BENCHMARK_MAIN();
