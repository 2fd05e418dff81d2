#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "inflogic/formula.hpp"
#include "inflogic/signature.hpp"

namespace inflogic {

inline constexpr std::size_t kDefaultBudget = 64;

enum class Truth : std::uint8_t { False, True, Unknown };

std::string to_string(Truth t);

// Three-valued result. Unknown means an infinite connective could not be
// decided within the index budget; `undecided` names the family responsible.
struct TruthValue {
  Truth value = Truth::False;
  std::optional<Formula> undecided;

  static TruthValue of(bool b) { return {b ? Truth::True : Truth::False, std::nullopt}; }
  static TruthValue unknown(Formula where) { return {Truth::Unknown, std::move(where)}; }

  bool is_true() const { return value == Truth::True; }
  bool is_false() const { return value == Truth::False; }
  bool decided() const { return value != Truth::Unknown; }

  TruthValue operator!() const {
    if (!decided()) return *this;
    return of(!is_true());
  }
  friend bool operator==(const TruthValue& a, const TruthValue& b) { return a.value == b.value; }
};

using Tuple = std::vector<std::size_t>;

// One index position of a stored table key: a literal, or nullopt for the
// uniform wildcard `*` (the table holds for every value at that position).
using IndexPattern = std::vector<std::optional<std::uint64_t>>;

// Explicit finite relational structure. Elements are named; tuples store
// element positions in insertion order.
class FiniteStructure {
 public:
  FiniteStructure() = default;
  explicit FiniteStructure(const std::vector<std::string>& universe);

  std::size_t add_element(std::string name);
  std::size_t size() const { return universe_.size(); }
  const std::vector<std::string>& universe() const { return universe_; }
  const std::string& element(std::size_t i) const { return universe_.at(i); }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t require(std::string_view name) const;  // throws EvalError

  // Adds declarations without facts, so that empty relations are known.
  void declare(const Signature& sig);
  const Signature& signature() const { return sig_; }

  // key: "Q", "P_3", "R_1,2", "R_{1,2}" or a uniform table "R_*,0".
  void add_fact(std::string_view key, const std::vector<std::string>& tuple);
  // Lets add_fact("E", {"a", "b"}) pick the element-name form.
  void add_fact(std::string_view key, std::initializer_list<std::string> tuple) {
    add_fact(key, std::vector<std::string>(tuple));
  }
  void add_fact(const std::string& relation, const Tuple& tuple);
  void add_indexed_fact(const std::string& base, const IndexPattern& pattern, const Tuple& tuple);
  void set_constant(const std::string& name, std::string_view element);

  std::optional<std::size_t> constant(std::string_view name) const;
  const std::map<std::string, std::size_t, std::less<>>& constants() const { return constants_; }

  // relation must be ground (no index variables).
  bool holds(const Symbol& relation, const Tuple& tuple) const;

  // One past the largest literal index in any nonempty indexed table, 0 if
  // none: all index values >= horizon() behave identically.
  std::uint64_t horizon() const;

  const std::map<std::string, std::set<Tuple>, std::less<>>& plain_tables() const { return plain_; }
  const std::map<std::string, std::map<IndexPattern, std::set<Tuple>>, std::less<>>& indexed_tables() const {
    return indexed_;
  }

  // Induced substructure on the named elements (in the given order).
  FiniteStructure restrict_to(const std::vector<std::string>& elements) const;

  // { "universe": [...], "relations": {"Q": [["a"]], "P_0": [...]},
  //   "constants": {"c": "a"}, "signature": {...optional...} }
  static FiniteStructure from_json(std::string_view text);
  std::string to_json() const;

  // Equal when every component matches, declarations included.
  friend bool operator==(const FiniteStructure&, const FiniteStructure&);

 private:
  void ensure_declared_plain(const std::string& name, std::size_t arity);
  void ensure_declared_family(const std::string& base, std::size_t index_arity, std::size_t arity);

  std::vector<std::string> universe_;
  std::map<std::string, std::size_t, std::less<>> index_;
  Signature sig_;
  std::map<std::string, std::set<Tuple>, std::less<>> plain_;
  std::map<std::string, std::map<IndexPattern, std::set<Tuple>>, std::less<>> indexed_;
  std::map<std::string, std::size_t, std::less<>> constants_;
};

// Variable name (variable_text) to element name.
using Assignment = std::map<std::string, std::string, std::less<>>;
// Variable name to element position; the evaluators' working form. The
// overloads taking one have no default budget, so that a braced `{}` always
// selects the Assignment form.
using Valuation = std::map<std::string, std::size_t, std::less<>>;

Valuation to_valuation(const FiniteStructure& a, const Assignment& asg);

// ---- infinite connectives over finite structures -------------------------

// Index tuples an evaluator must try for a family of the given index arity.
// When exhaustive, the points cover 0..horizon-1 plus enough values beyond
// the horizon to realize every equality pattern, which decides the family
// exactly. Otherwise they are all tuples over 0..budget-1.
struct IndexSweep {
  std::vector<std::vector<std::uint64_t>> points;
  bool exhaustive = false;
};

IndexSweep index_sweep(std::size_t index_arity, std::uint64_t horizon, std::size_t budget);

// Horizon for a family body evaluated in `a`: also accounts for index
// literals written in the formula itself.
std::uint64_t index_horizon(const FiniteStructure& a, const Formula& body);

// ---- evaluators ---------------------------------------------------------

TruthValue satisfies(const FiniteStructure& a, const Formula& f, const Assignment& asg,
                     std::size_t budget = kDefaultBudget);
TruthValue satisfies(const FiniteStructure& a, const Formula& f, const Valuation& val,
                     std::size_t budget);

// Weak forcing on a finite structure. A finite structure has no proper
// elementary extension, so the extension quantifiers of the existential and
// universal clauses range over {a} alone.
TruthValue weak_force_finite(const FiniteStructure& a, const Formula& f, const Assignment& asg,
                             std::size_t budget = kDefaultBudget);
TruthValue weak_force_finite(const FiniteStructure& a, const Formula& f, const Valuation& val,
                             std::size_t budget);

// A tuple for `vars` satisfying every member of `type` (a conjunction, or an
// infinite conjunction family). In a finite structure a finitely
// satisfiable type is realized, so this decides finite satisfiability.
struct Realization {
  TruthValue found;
  std::vector<std::string> witness;  // element names, when found is True
};

Realization type_realized(const FiniteStructure& a, const std::vector<Symbol>& vars, const Formula& type,
                          const Assignment& asg, std::size_t budget = kDefaultBudget);
Realization type_realized(const FiniteStructure& a, const std::vector<Symbol>& vars, const Formula& type,
                          const Valuation& val, std::size_t budget);

// ---- substructures ------------------------------------------------------

// Throws SignatureError when the structures declare different signatures.
bool is_substructure(const FiniteStructure& a, const FiniteStructure& b);

// a is an n-elementary substructure of b. Decided by the alternating block
// game with all elements of a as parameters. Throws PreconditionError unless
// a is a substructure of b.
bool n_elementary(const FiniteStructure& a, const FiniteStructure& b, unsigned n);

// Whether (a, xs) and (b, ys) have the same atomic type, equality and
// constants included.
bool same_atomic_type(const FiniteStructure& a, const Tuple& xs, const FiniteStructure& b, const Tuple& ys);

}  // namespace inflogic
