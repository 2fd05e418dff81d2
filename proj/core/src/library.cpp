#include "inflogic/library.hpp"

#include <algorithm>

#include "inflogic/families.hpp"
#include "inflogic/parse.hpp"

namespace inflogic {

Formula NamedFormula::formula() const { return parse_formula(source, signature); }

const std::vector<NamedFormula>& builtin_formulas() {
  static const std::vector<NamedFormula> table = {
      {"psi_blocks", "every Q-root has an R-child satisfying no P_n",
       "(forall (x) (implies (atom Q x) (exists (y) (and (atom R x y) (And (n) (not (atom P_n y)))))))",
       block_signature()},
      {"psi_tree", "some element satisfies, for every i, some R_{i,j}", "(exists (x) (And (i) (Or (j) (atom R_{i,j} x))))",
       tree_signature()},
  };
  return table;
}

const NamedFormula* find_builtin(std::string_view name) {
  const auto& table = builtin_formulas();
  auto it = std::find_if(table.begin(), table.end(), [&](const NamedFormula& f) { return f.name == name; });
  return it == table.end() ? nullptr : &*it;
}

Formula psi_blocks() { return find_builtin("psi_blocks")->formula(); }
Formula psi_tree() { return find_builtin("psi_tree")->formula(); }

}  // namespace inflogic
