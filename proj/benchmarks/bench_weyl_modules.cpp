#include <benchmark/benchmark.h>

#include "weylkit/weyl_modules.hpp"

using namespace weylkit;

namespace {

const RootSystem& g2() {
  static const RootSystem rs = root_system("G2");
  return rs;
}

Weight arg_weight(const benchmark::State& state) {
  return Weight{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
}

void BM_BuildWeylModule(benchmark::State& state) {
  const Weight lam = arg_weight(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_weyl_module(lam, 2, g2()));
  state.counters["dim"] = static_cast<double>(weyl_character(lam, g2()).total());
}
BENCHMARK(BM_BuildWeylModule)->Args({2, 0})->Args({2, 1})->Args({5, 0})->Args({2, 2})->Unit(benchmark::kMillisecond);

// Fresh workspace each iteration, so every simple character is recomputed.
void BM_SimpleCharacterCold(benchmark::State& state) {
  const Weight lam = arg_weight(state);
  for (auto _ : state) {
    Workspace ws(g2(), 2);
    benchmark::DoNotOptimize(simple_character(lam, ws));
  }
}
BENCHMARK(BM_SimpleCharacterCold)->Args({1, 1})->Args({0, 3})->Args({2, 2})->Unit(benchmark::kMillisecond);

void BM_SocleSeries(benchmark::State& state) {
  const Weight lam = arg_weight(state);
  Workspace ws(g2(), 2);
  auto m = ws.weyl_module(lam)->module_ptr();
  for (const auto& mu : saturated_below(lam, g2())) simple_character(mu, ws);
  for (auto _ : state) benchmark::DoNotOptimize(socle_series(m, ws));
}
BENCHMARK(BM_SocleSeries)->Args({3, 0})->Args({2, 1})->Args({5, 0})->Args({2, 2})->Unit(benchmark::kMillisecond);

void BM_MaximalVectors(benchmark::State& state) {
  const Weight lam = arg_weight(state);
  Workspace ws(g2(), 2);
  auto m = ws.weyl_module(lam);
  for (auto _ : state) benchmark::DoNotOptimize(maximal_vectors(m->module()));
}
BENCHMARK(BM_MaximalVectors)->Args({5, 0})->Args({2, 2})->Unit(benchmark::kMillisecond);

void BM_ExtWitness(benchmark::State& state) {
  Workspace ws(g2(), 2);
  ws.weyl_module(Weight{2, 1});
  for (auto _ : state) benchmark::DoNotOptimize(ext1_witness(Weight{2, 1}, Weight{0, 2}, ws));
}
BENCHMARK(BM_ExtWitness)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
