#include <benchmark/benchmark.h>

#include "inflogic/families.hpp"
#include "inflogic/force.hpp"
#include "inflogic/library.hpp"

namespace {

using namespace inflogic;

void BM_ForcePsiBlocks(benchmark::State& state) {
  const Formula psi = psi_blocks();
  for (auto _ : state) benchmark::DoNotOptimize(force(psi));
}
BENCHMARK(BM_ForcePsiBlocks);

void BM_ElementaryLeaves(benchmark::State& state) {
  const ElementaryFormula e = force(psi_tree());
  const auto bound = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(elementary_leaves(e, bound, bound));
}
BENCHMARK(BM_ElementaryLeaves)->DenseRange(1, 4);

void BM_EvalElementaryPsiTree(benchmark::State& state) {
  const TreeSpec t{FiniteTree{{{}, {0}, {0, 1}, {1}, {1, 1}}}};
  const FiniteStructure a = truncate_to_finite(build_tree_structure(t), 2);
  const ElementaryFormula e = force(psi_tree());
  for (auto _ : state) benchmark::DoNotOptimize(eval_elementary(a, e, {}));
}
BENCHMARK(BM_EvalElementaryPsiTree);

}  // namespace

BENCHMARK_MAIN();
