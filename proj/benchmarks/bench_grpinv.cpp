#include <benchmark/benchmark.h>

#include "grpinv/gen.hpp"
#include "grpinv/ginv.hpp"
#include "grpinv/harness.hpp"
#include "grpinv/random.hpp"

using namespace grpinv;

namespace {

ComplexMatrix rank_deficient(Index n) {
  const Index r = n / 2 + 1;
  const auto s = random_invertible(n, 10.0, 1);
  const auto core = random_invertible(r, 100.0, 2);
  return s * block_diagonal({core, ComplexMatrix::zero(n - r, n - r)}) * invert(s);
}

GeneratorConfig config(std::vector<Index> dims, Complex lambda) {
  GeneratorConfig cfg;
  cfg.dims = std::move(dims);
  cfg.lambda = lambda;
  cfg.seed = 7;
  return cfg;
}

void BM_GroupInverse(benchmark::State& state) {
  const auto a = rank_deficient(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(group_inverse(a));
}
BENCHMARK(BM_GroupInverse)->RangeMultiplier(2)->Range(2, 64);

void BM_GroupInverseCline(benchmark::State& state) {
  const auto a = rank_deficient(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(group_inverse_cline(a));
}
BENCHMARK(BM_GroupInverseCline)->RangeMultiplier(2)->Range(2, 16);

void BM_FormulaT24(benchmark::State& state) {
  const Index n = state.range(0);
  const auto s = gen_T24(config({n / 2, n - n / 2}, 0.5)).instance;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_formula(s));
}
BENCHMARK(BM_FormulaT24)->RangeMultiplier(2)->Range(2, 32);

void BM_FormulaT21(benchmark::State& state) {
  const Index k = state.range(0) / 4;
  const auto s = gen_T21(config({k, k, k, k}, -1.0)).instance;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_formula(s));
}
BENCHMARK(BM_FormulaT21)->RangeMultiplier(2)->Range(4, 32);

void BM_GenerateT21(benchmark::State& state) {
  const Index k = state.range(0) / 4;
  auto cfg = config({k, k, k, k}, 2.0);
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(gen_T21(cfg));
  }
}
BENCHMARK(BM_GenerateT21)->RangeMultiplier(2)->Range(4, 32);

void BM_VerifyBlockT31(benchmark::State& state) {
  const auto s = gen_T31(config({state.range(0)}, 2.0)).instance;
  for (auto _ : state) benchmark::DoNotOptimize(verify(s));
}
BENCHMARK(BM_VerifyBlockT31)->RangeMultiplier(2)->Range(1, 16);

}  // namespace

BENCHMARK_MAIN();
