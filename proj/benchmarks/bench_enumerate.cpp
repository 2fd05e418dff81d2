#include <benchmark/benchmark.h>

#include "inflogic/tags.hpp"

namespace {

using namespace inflogic;

void BM_EnumerateChoiceFunctions(benchmark::State& state) {
  const Domain d = choicefn_domain(nat_domain(), nat_domain());
  const auto limit = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(d, limit));
}
BENCHMARK(BM_EnumerateChoiceFunctions)->RangeMultiplier(4)->Range(16, 1024);

void BM_EnumerateFiniteSubsets(benchmark::State& state) {
  const Domain d = finsubsets_domain(nat_domain());
  const auto limit = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(d, limit));
}
BENCHMARK(BM_EnumerateFiniteSubsets)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace

BENCHMARK_MAIN();
