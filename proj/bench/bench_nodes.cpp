// Serial reference vs OpenMP kernel on a Si grating-pair grid, plus the cost
// of a single grating reflection as a function of truncation.
#include <benchmark/benchmark.h>

#include "casimir/constants.hpp"
#include "casimir/engine.hpp"
#include "casimir/grating.hpp"

using namespace casimir;
using constants::nm;

namespace {

GratingSpec si_grating() {
  GratingSpec g;
  g.period = 100 * nm;
  g.gap = 50 * nm;
  g.depth = 100 * nm;
  g.bar = g.substrate = MaterialModel::silicon();
  return g;
}

NumericsSpec small_grid(int n) {
  NumericsSpec num;
  num.truncation = n;
  num.xi.nodes = 10;
  num.kz.nodes = 6;
  num.kx.nodes = 4;
  return num;
}

struct Fixture {
  explicit Fixture(int n)
      : numerics(small_grid(n)),
        scene(validate_scene(SceneSpec{si_grating(), si_grating(), 250 * nm}, numerics)),
        integrand(scene, numerics),
        grid(make_grid(scene, numerics, true)) {}
  NumericsSpec numerics;
  ValidatedScene scene;
  CasimirIntegrand integrand;
  QuadratureGrid grid;
};

void BM_NodesSerial(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_nodes_serial(f.integrand, f.grid));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.size()));
}

void BM_NodesParallel(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_nodes(f.integrand, f.grid));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.size()));
}

void BM_Reflection(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Wavevector k{1e7, 1e6, 2e6};
  const GratingSpec g = si_grating();
  for (auto _ : state) benchmark::DoNotOptimize(reflection_matrix(g, k, n));
}

}  // namespace

BENCHMARK(BM_NodesSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NodesParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Reflection)->DenseRange(2, 12, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
