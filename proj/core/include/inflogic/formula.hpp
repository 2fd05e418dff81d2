#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "inflogic/signature.hpp"

namespace inflogic {

// An index position: either an index variable bound by an enclosing
// infinitary connective, or a natural-number literal.
class IndexExpr {
 public:
  static IndexExpr var(std::string name) { return IndexExpr(std::move(name)); }
  static IndexExpr lit(std::uint64_t value) { return IndexExpr(value); }

  bool is_variable() const { return std::holds_alternative<std::string>(value_); }
  const std::string& variable() const { return std::get<std::string>(value_); }
  std::uint64_t literal() const { return std::get<std::uint64_t>(value_); }
  std::string str() const;

  friend auto operator<=>(const IndexExpr&, const IndexExpr&) = default;

 private:
  explicit IndexExpr(std::string name) : value_(std::move(name)) {}
  explicit IndexExpr(std::uint64_t value) : value_(value) {}
  std::variant<std::string, std::uint64_t> value_;
};

// A possibly indexed name. Relations use it for N_{i} instances; variables
// use it for index-dependent names such as y_{n}.
struct Symbol {
  std::string base;
  std::vector<IndexExpr> indices;

  Symbol() = default;
  Symbol(std::string b) : base(std::move(b)) {}  // NOLINT(google-explicit-constructor)
  Symbol(const char* b) : base(b) {}             // NOLINT(google-explicit-constructor)
  Symbol(std::string b, std::vector<IndexExpr> idx) : base(std::move(b)), indices(std::move(idx)) {}

  bool indexed() const { return !indices.empty(); }
  bool ground() const;  // no index variables

  // P_n, P_3, R_{i,j}
  std::string relation_text() const;
  // x, y_{n}, y_{3}
  std::string variable_text() const;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };
  Kind kind = Kind::Variable;
  Symbol name;

  static Term variable(Symbol s) { return Term{Kind::Variable, std::move(s)}; }
  static Term constant(std::string c) { return Term{Kind::Constant, Symbol(std::move(c))}; }
  bool is_variable() const { return kind == Kind::Variable; }
  std::string text() const { return is_variable() ? name.variable_text() : name.base; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class Connective : std::uint8_t { And, Or };
enum class Quantifier : std::uint8_t { Exists, Forall };

inline Connective dual(Connective c) { return c == Connective::And ? Connective::Or : Connective::And; }
inline Quantifier dual(Quantifier q) { return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists; }

struct FormulaNode;

// Immutable, structurally shared formula of L_{inf,omega} over a relational
// signature. Infinite connectives are finitely presented by a template with
// one (index domain N) or two (index domain N x N) index variables.
class Formula {
 public:
  enum class Kind : std::uint8_t { Atomic, Negation, Junction, Family, Quantified };

  Formula();  // the empty conjunction (true)
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

  Kind kind() const;
  const FormulaNode& node() const { return *node_; }
  template <class T>
  const T* get_if() const;
  template <class T>
  const T& as() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  std::shared_ptr<const FormulaNode> node_;
};

struct Atomic {
  Symbol relation;  // base "=" is equality
  std::vector<Term> args;
};

struct Negation {
  Formula body;
};

// Finite conjunction / disjunction. Empty And is true, empty Or is false.
struct Junction {
  Connective op;
  std::vector<Formula> members;
};

// Infinite conjunction / disjunction over N (one index variable) or N x N.
struct Family {
  Connective op;
  std::vector<std::string> index_vars;
  Formula body;
};

struct Quantified {
  Quantifier q;
  std::vector<Symbol> vars;
  Formula body;
};

struct FormulaNode {
  std::variant<Atomic, Negation, Junction, Family, Quantified> value;
};

template <class T>
const T* Formula::get_if() const {
  return std::get_if<T>(&node_->value);
}

template <class T>
const T& Formula::as() const {
  return std::get<T>(node_->value);
}

// ---- construction -------------------------------------------------------

Formula atom(Symbol relation, std::vector<Term> args);
Formula equals(Term a, Term b);
Formula negation(Formula body);
Formula conj(std::vector<Formula> members);
Formula disj(std::vector<Formula> members);
Formula junction(Connective op, std::vector<Formula> members);
Formula big_and(std::vector<std::string> index_vars, Formula body);
Formula big_or(std::vector<std::string> index_vars, Formula body);
Formula family(Connective op, std::vector<std::string> index_vars, Formula body);
Formula exists(std::vector<Symbol> vars, Formula body);
Formula forall(std::vector<Symbol> vars, Formula body);
Formula quantified(Quantifier q, std::vector<Symbol> vars, Formula body);
Formula implies(Formula a, Formula b);  // desugars to (or (not a) b)
Formula truth();
Formula falsity();

Term var(std::string name);

// ---- analysis -----------------------------------------------------------

// Free element variables, as variable_text() of their symbols.
std::set<std::string> free_vars(const Formula& f);

// Index variables occurring free (not bound by an enclosing family).
std::set<std::string> free_index_vars(const Formula& f);

// De Morgan dual with negations pushed to atoms; negates family templates
// pointwise. The result has Negation only directly above Atomic.
Formula formal_negate(const Formula& f);

// Negation normal form: same shape guarantee as formal_negate, same meaning as f.
Formula nnf(const Formula& f);

// Minimal levels of the quantifier-alternation hierarchies. The classes are
// cumulative: an existential formula of level n is also universal of level
// n+1 and vice versa. exists/forall ignore infinite connectives; sigma/pi
// count an infinite disjunction as existential and an infinite conjunction
// as universal.
struct QuantClass {
  unsigned exists_rank = 0;
  unsigned forall_rank = 0;
  unsigned sigma_rank = 0;
  unsigned pi_rank = 0;

  friend bool operator==(const QuantClass&, const QuantClass&) = default;
};

QuantClass classify(const Formula& f);

bool is_finitary(const Formula& f);        // no infinite connectives
bool is_quantifier_free(const Formula& f);
std::size_t formula_depth(const Formula& f);
std::size_t formula_size(const Formula& f);

// Smallest set containing f that is closed under subformulas (a family
// contributes its template as one member) and under one layer of negation
// (the negation of a member of the form (not g) is g, already present).
// Order is discovery order, deterministic.
std::vector<Formula> fragment_closure(const Formula& f);

// ---- rewriting ----------------------------------------------------------

// Replace free occurrences of index variable `index_var` by `value`, both in
// relation names and in index-dependent variable names.
Formula instantiate_index(const Formula& f, std::string_view index_var, std::uint64_t value);
Formula instantiate_indices(const Formula& f, const std::map<std::string, std::uint64_t, std::less<>>& values);

// Capture-avoiding substitution of a term for a free element variable.
// Bound variables that would capture `replacement` are renamed to
// base + "_" + counter, where the counter is the first number producing a
// name unused anywhere in f or the replacement.
Formula substitute(const Formula& f, std::string_view variable, const Term& replacement);

// ---- well-formedness ----------------------------------------------------

struct Violation {
  enum class Kind : std::uint8_t {
    UnknownSymbol,
    ArityMismatch,
    IndexArityMismatch,
    UnknownConstant,
    EmptyBlock,
    RepeatedVariable,
    BadIndexBlock,
    UnboundIndexVariable,
    InfiniteFreeVariables,
  };
  Kind kind;
  std::string message;
};

std::string to_string(Violation::Kind k);

// Empty result means well-formed.
std::vector<Violation> wellformed(const Formula& f, const Signature& sig);

}  // namespace inflogic
