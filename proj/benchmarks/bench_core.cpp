#include <benchmark/benchmark.h>

#include "hooley/congruence.hpp"
#include "hooley/delta.hpp"
#include "hooley/factor_table.hpp"
#include "hooley/powersums.hpp"

using namespace hooley;

static void BM_DeltaMeanSums(benchmark::State& state) {
  const u64 x = static_cast<u64>(state.range(0));
  MeanSumOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(delta_mean_sums(x, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x));
}
BENCHMARK(BM_DeltaMeanSums)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_DeltaReference(benchmark::State& state) {
  const u64 x = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(delta_mean_sums_reference(x));
}
BENCHMARK(BM_DeltaReference)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_BlockFactorizer(benchmark::State& state) {
  const std::size_t len = static_cast<std::size_t>(state.range(0));
  const u64 lo = 1'000'000'000;
  const auto primes = primes_up_to(isqrt(lo + len) + 1);
  BlockFactorizer bf(len);
  for (auto _ : state) {
    bf.run(lo, len, primes);
    benchmark::DoNotOptimize(bf.factors(len - 1).size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(len));
}
BENCHMARK(BM_BlockFactorizer)->Arg(1 << 12)->Arg(1 << 15);

static void BM_FactorTable(benchmark::State& state) {
  const u64 hi = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_factor_table(1, hi));
}
BENCHMARK(BM_FactorTable)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

static void BM_RhoPlusLift(benchmark::State& state) {
  const auto T = MultiPoly::parse("x1^3 + 2 x2^2 x3 - 7 x3^4 + 5");
  const u64 q = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rho_plus(T, q).value);
}
BENCHMARK(BM_RhoPlusLift)->Arg(8)->Arg(125)->Arg(243);

static void BM_RhoPlusBrute(benchmark::State& state) {
  const auto T = MultiPoly::parse("x1^3 + 2 x2^2 x3 - 7 x3^4 + 5");
  const u64 q = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rho_plus(T, q, RhoMethod::bruteforce).value);
}
BENCHMARK(BM_RhoPlusBrute)->Arg(8)->Arg(125);

static void BM_VCounts(benchmark::State& state) {
  const PowerSystem sys({1, 1, 1}, {2, 4, 4});
  const u64 x = static_cast<u64>(state.range(0));
  VCountOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(v_counts(x, sys, opts).back().V2);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x));
}
BENCHMARK(BM_VCounts)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

static void BM_RepCount(benchmark::State& state) {
  const PowerSystem sys({1, 1, 1, 1}, {2, 3, 7, 42});
  u64 n = 1'000'000;
  for (auto _ : state) benchmark::DoNotOptimize(rep_count(n++, sys));
}
BENCHMARK(BM_RepCount);
BENCHMARK_MAIN();
