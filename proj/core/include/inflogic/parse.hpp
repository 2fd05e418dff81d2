#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inflogic/formula.hpp"
#include "inflogic/sexpr.hpp"
#include "inflogic/signature.hpp"

namespace inflogic {

// Grammar (s-expressions, `;` starts a line comment):
//
//   formula ::= (atom NAME term*) | (not formula)
//             | (and formula*) | (or formula*)
//             | (And (IDXVAR+) formula) | (Or (IDXVAR+) formula)
//             | (exists (VAR+) formula) | (forall (VAR+) formula)
//             | (implies formula formula) | (iff formula formula)
//
// NAME is a plain relation, `=`, or an indexed instance N_e / N_{e} /
// N_{e,e} where each e is a bound index variable or a natural literal.
// A term is a signature constant or a variable; variables may carry index
// expressions in braces, e.g. y_{n}.
Formula parse_formula(std::string_view text, const Signature& sig);
Formula parse_formula(const SExpr& expr, const Signature& sig);

std::string render_formula(const Formula& f);
SExpr formula_to_sexpr(const Formula& f);

// Signature read off the formula text: N_x / N_{..} names whose suffix parts
// are bound index variables or literals become families, everything else a
// plain relation. No constants are inferred.
Signature infer_signature(std::string_view text);

// Splits N_x, N_{x}, N_{x,y} and N_x,y into base and index parts. Returns
// nullopt for names without an index suffix.
struct IndexedName {
  std::string base;
  std::vector<std::string> parts;
};
std::optional<IndexedName> split_indexed_name(std::string_view name);

}  // namespace inflogic
