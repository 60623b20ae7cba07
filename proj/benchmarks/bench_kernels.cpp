#include <benchmark/benchmark.h>

#include "rskel/rskel.hpp"

using namespace rskel;

namespace {

Matrix gaussian(Index m, Index n, std::uint64_t seed) {
  RngStream r(seed);
  return gen_gaussian(m, n, r);
}

void BM_Gemm(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = gaussian(n, n, 1), b = gaussian(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gemm(a, b));
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_Gemm)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Lupp(benchmark::State& state) {
  const Matrix a = gaussian(state.range(0), state.range(1), 3);
  for (auto _ : state) benchmark::DoNotOptimize(lupp(a));
}
BENCHMARK(BM_Lupp)->Args({1000, 1000})->Args({2000, 2000})->Args({4000, 200})->Unit(benchmark::kMillisecond);

void BM_Cpqr(benchmark::State& state) {
  const Matrix a = gaussian(state.range(0), state.range(1), 4);
  for (auto _ : state) benchmark::DoNotOptimize(cpqr(a));
}
BENCHMARK(BM_Cpqr)->Args({1000, 1000})->Args({2000, 2000})->Args({200, 4000})->Unit(benchmark::kMillisecond);

void BM_Sketch(benchmark::State& state) {
  const Matrix a = gaussian(1000, 1000, 5);
  SketchSpec s;
  s.kind = static_cast<SketchKind>(state.range(0));
  s = s.sized(1000, 100);
  RngStream r(6);
  for (auto _ : state) benchmark::DoNotOptimize(apply_sketch(a, make_sketch(s, r)));
  state.SetLabel(to_string(s.kind));
}
BENCHMARK(BM_Sketch)
    ->Arg(static_cast<int>(SketchKind::Gaussian))
    ->Arg(static_cast<int>(SketchKind::Srtt))
    ->Arg(static_cast<int>(SketchKind::SparseSign))
    ->Unit(benchmark::kMillisecond);

void BM_RandLuppAdaptive(benchmark::State& state) {
  RngStream g(7);
  const FastDecay fd = gen_fast_decay(1000, 1000, 1e-16, g);
  AdaptiveOptions o;
  o.block = state.range(0);
  o.tau = 1e-8 * frobenius_norm(fd.a);
  Index rank = 0;
  for (auto _ : state) rank = rand_lupp_adaptive(fd.a, o, RngStream(8)).rank;
  state.counters["rank"] = static_cast<double>(rank);
}
BENCHMARK(BM_RandLuppAdaptive)->Arg(50)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RandCpqrAtRank(benchmark::State& state) {
  RngStream g(7);
  const FastDecay fd = gen_fast_decay(1000, 1000, 1e-16, g);
  for (auto _ : state) {
    RngStream r(9);
    benchmark::DoNotOptimize(rand_cpqr(fd.a, state.range(0), SketchSpec{}, r));
  }
}
BENCHMARK(BM_RandCpqrAtRank)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
