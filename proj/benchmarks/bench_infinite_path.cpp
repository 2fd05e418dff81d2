#include <benchmark/benchmark.h>

#include <string>

#include "inflogic/families.hpp"

namespace {

using namespace inflogic;

// A chain n0 -> n1 -> ... -> n{k-1} closing into a loop at the end.
TreeSpec chain(std::size_t k) {
  RegularTree t;
  for (std::size_t i = 0; i < k; ++i) t.nodes.push_back("n" + std::to_string(i));
  t.root = t.nodes.front();
  for (std::size_t i = 0; i + 1 < k; ++i) t.edges.push_back({t.nodes[i], 0, t.nodes[i + 1]});
  t.edges.push_back({t.nodes.back(), 1, t.nodes.back()});
  return TreeSpec{t};
}

void BM_InfinitePath(benchmark::State& state) {
  const TreeSpec t = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(infinite_path(t));
}
BENCHMARK(BM_InfinitePath)->RangeMultiplier(4)->Range(4, 4096);

}  // namespace

BENCHMARK_MAIN();
