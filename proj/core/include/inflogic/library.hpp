#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "inflogic/formula.hpp"
#include "inflogic/signature.hpp"

namespace inflogic {

// Named sentences shipped with the toolkit.
struct NamedFormula {
  std::string name;
  std::string description;
  std::string source;
  Signature signature;

  Formula formula() const;
};

const std::vector<NamedFormula>& builtin_formulas();
const NamedFormula* find_builtin(std::string_view name);

// forall x (Q(x) -> exists y (R(x,y) and AND_n not P_n(y))): every Q-root has
// an R-child outside every P_n. True in a block structure iff no block is
// standard.
Formula psi_blocks();

// exists x AND_i OR_j R_{i,j}(x): some element sits on an infinite branch.
Formula psi_tree();

}  // namespace inflogic
