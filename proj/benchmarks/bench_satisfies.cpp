#include <benchmark/benchmark.h>

#include "inflogic/families.hpp"
#include "inflogic/finite_model.hpp"
#include "inflogic/library.hpp"

namespace {

using namespace inflogic;

// psi_blocks on a finite block shadow with `range(0)` blocks.
void BM_SatisfiesPsiBlocks(benchmark::State& state) {
  const BlockConfig c{Count::finite(static_cast<std::uint64_t>(state.range(0))), {}};
  const FiniteStructure a = truncate_blocks(c, 3, 3);
  const Formula psi = psi_blocks();
  for (auto _ : state) benchmark::DoNotOptimize(satisfies(a, psi, Assignment{}));
  state.counters["elements"] = static_cast<double>(a.size());
}
BENCHMARK(BM_SatisfiesPsiBlocks)->RangeMultiplier(2)->Range(1, 8);

void BM_WeakForceFinitePsiTree(benchmark::State& state) {
  const TreeSpec t{RegularTree{{"r"}, "r", {{"r", 0, "r"}}}};
  const FiniteStructure a = truncate_to_finite(build_tree_structure(t), static_cast<std::size_t>(state.range(0)));
  const Formula psi = psi_tree();
  for (auto _ : state) benchmark::DoNotOptimize(weak_force_finite(a, psi, {}));
}
BENCHMARK(BM_WeakForceFinitePsiTree)->DenseRange(2, 8, 2);

}  // namespace

BENCHMARK_MAIN();
