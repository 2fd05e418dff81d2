#include "inflogic/formula.hpp"

#include <algorithm>
#include <deque>

#include "inflogic/error.hpp"

namespace inflogic {

// ---- symbols ------------------------------------------------------------

std::string IndexExpr::str() const { return is_variable() ? variable() : std::to_string(literal()); }

bool Symbol::ground() const {
  return std::none_of(indices.begin(), indices.end(), [](const IndexExpr& e) { return e.is_variable(); });
}

namespace {

std::string join_indices(const std::vector<IndexExpr>& indices) {
  std::string out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k) out.push_back(',');
    out += indices[k].str();
  }
  return out;
}

}  // namespace

std::string Symbol::relation_text() const {
  if (indices.empty()) return base;
  if (indices.size() == 1) return base + "_" + indices.front().str();
  return base + "_{" + join_indices(indices) + "}";
}

std::string Symbol::variable_text() const {
  if (indices.empty()) return base;
  return base + "_{" + join_indices(indices) + "}";
}

// ---- formula handle -----------------------------------------------------

namespace {

Formula make(FormulaNode node) { return Formula(std::make_shared<const FormulaNode>(std::move(node))); }

}  // namespace

Formula::Formula() : node_(std::make_shared<const FormulaNode>(FormulaNode{Junction{Connective::And, {}}})) {}

Formula::Kind Formula::kind() const { return static_cast<Kind>(node_->value.index()); }

namespace {

template <class T>
std::strong_ordering compare_vectors(const std::vector<T>& a, const std::vector<T>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& va = a.node_->value;
  const auto& vb = b.node_->value;
  if (auto c = va.index() <=> vb.index(); c != 0) return c;
  return std::visit(
      [&](const auto& x) -> std::strong_ordering {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(vb);
        if constexpr (std::is_same_v<T, Atomic>) {
          if (auto c = x.relation <=> y.relation; c != 0) return c;
          return compare_vectors(x.args, y.args);
        } else if constexpr (std::is_same_v<T, Negation>) {
          return x.body <=> y.body;
        } else if constexpr (std::is_same_v<T, Junction>) {
          if (auto c = x.op <=> y.op; c != 0) return c;
          return compare_vectors(x.members, y.members);
        } else if constexpr (std::is_same_v<T, Family>) {
          if (auto c = x.op <=> y.op; c != 0) return c;
          if (auto c = compare_vectors(x.index_vars, y.index_vars); c != 0) return c;
          return x.body <=> y.body;
        } else {
          if (auto c = x.q <=> y.q; c != 0) return c;
          if (auto c = compare_vectors(x.vars, y.vars); c != 0) return c;
          return x.body <=> y.body;
        }
      },
      va);
}

bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

// ---- construction -------------------------------------------------------

Formula atom(Symbol relation, std::vector<Term> args) { return make({Atomic{std::move(relation), std::move(args)}}); }

Formula equals(Term a, Term b) { return atom(Symbol(std::string(kEquality)), {std::move(a), std::move(b)}); }

Formula negation(Formula body) { return make({Negation{std::move(body)}}); }

Formula junction(Connective op, std::vector<Formula> members) { return make({Junction{op, std::move(members)}}); }
Formula conj(std::vector<Formula> members) { return junction(Connective::And, std::move(members)); }
Formula disj(std::vector<Formula> members) { return junction(Connective::Or, std::move(members)); }

Formula family(Connective op, std::vector<std::string> index_vars, Formula body) {
  return make({Family{op, std::move(index_vars), std::move(body)}});
}
Formula big_and(std::vector<std::string> index_vars, Formula body) {
  return family(Connective::And, std::move(index_vars), std::move(body));
}
Formula big_or(std::vector<std::string> index_vars, Formula body) {
  return family(Connective::Or, std::move(index_vars), std::move(body));
}

Formula quantified(Quantifier q, std::vector<Symbol> vars, Formula body) {
  return make({Quantified{q, std::move(vars), std::move(body)}});
}
Formula exists(std::vector<Symbol> vars, Formula body) { return quantified(Quantifier::Exists, std::move(vars), std::move(body)); }
Formula forall(std::vector<Symbol> vars, Formula body) { return quantified(Quantifier::Forall, std::move(vars), std::move(body)); }

Formula implies(Formula a, Formula b) { return disj({negation(std::move(a)), std::move(b)}); }
Formula truth() { return conj({}); }
Formula falsity() { return disj({}); }

Term var(std::string name) { return Term::variable(Symbol(std::move(name))); }

// ---- free variables -----------------------------------------------------

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::map<std::string, Symbol>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          for (const Term& t : n.args) {
            if (!t.is_variable()) continue;
            std::string text = t.name.variable_text();
            if (std::find(bound.begin(), bound.end(), text) == bound.end()) out.emplace(std::move(text), t.name);
          }
        } else if constexpr (std::is_same_v<T, Negation>) {
          collect_free(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, Junction>) {
          for (const Formula& m : n.members) collect_free(m, bound, out);
        } else if constexpr (std::is_same_v<T, Family>) {
          collect_free(n.body, bound, out);
        } else {
          const std::size_t mark = bound.size();
          for (const Symbol& v : n.vars) bound.push_back(v.variable_text());
          collect_free(n.body, bound, out);
          bound.resize(mark);
        }
      },
      f.node().value);
}

std::map<std::string, Symbol> free_var_symbols(const Formula& f) {
  std::vector<std::string> bound;
  std::map<std::string, Symbol> out;
  collect_free(f, bound, out);
  return out;
}

void collect_index_vars(const Symbol& s, const std::vector<std::string>& bound, std::set<std::string>& out) {
  for (const IndexExpr& e : s.indices) {
    if (e.is_variable() && std::find(bound.begin(), bound.end(), e.variable()) == bound.end()) {
      out.insert(e.variable());
    }
  }
}

void collect_free_index(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          collect_index_vars(n.relation, bound, out);
          for (const Term& t : n.args) collect_index_vars(t.name, bound, out);
        } else if constexpr (std::is_same_v<T, Negation>) {
          collect_free_index(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, Junction>) {
          for (const Formula& m : n.members) collect_free_index(m, bound, out);
        } else if constexpr (std::is_same_v<T, Family>) {
          const std::size_t mark = bound.size();
          bound.insert(bound.end(), n.index_vars.begin(), n.index_vars.end());
          collect_free_index(n.body, bound, out);
          bound.resize(mark);
        } else {
          for (const Symbol& v : n.vars) collect_index_vars(v, bound, out);
          collect_free_index(n.body, bound, out);
        }
      },
      f.node().value);
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  for (auto& [text, sym] : free_var_symbols(f)) out.insert(text);
  return out;
}

std::set<std::string> free_index_vars(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free_index(f, bound, out);
  return out;
}

// ---- negation -----------------------------------------------------------

Formula formal_negate(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return negation(f);
        } else if constexpr (std::is_same_v<T, Negation>) {
          return nnf(n.body);
        } else if constexpr (std::is_same_v<T, Junction>) {
          std::vector<Formula> members;
          members.reserve(n.members.size());
          for (const Formula& m : n.members) members.push_back(formal_negate(m));
          return junction(dual(n.op), std::move(members));
        } else if constexpr (std::is_same_v<T, Family>) {
          return family(dual(n.op), n.index_vars, formal_negate(n.body));
        } else {
          return quantified(dual(n.q), n.vars, formal_negate(n.body));
        }
      },
      f.node().value);
}

Formula nnf(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return f;
        } else if constexpr (std::is_same_v<T, Negation>) {
          return formal_negate(n.body);
        } else if constexpr (std::is_same_v<T, Junction>) {
          std::vector<Formula> members;
          members.reserve(n.members.size());
          for (const Formula& m : n.members) members.push_back(nnf(m));
          return junction(n.op, std::move(members));
        } else if constexpr (std::is_same_v<T, Family>) {
          return family(n.op, n.index_vars, nnf(n.body));
        } else {
          return quantified(n.q, n.vars, nnf(n.body));
        }
      },
      f.node().value);
}

// ---- classification -----------------------------------------------------

namespace {

// Level of a block of quantifiers of one kind over a body with levels
// (same, other): same-kind blocks merge, opposite blocks add one.
unsigned block_level(unsigned same, unsigned other) { return std::min(std::max(1u, same), other + 1); }

}  // namespace

QuantClass classify(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> QuantClass {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return {};
        } else if constexpr (std::is_same_v<T, Negation>) {
          const QuantClass b = classify(n.body);
          return {b.forall_rank, b.exists_rank, b.pi_rank, b.sigma_rank};
        } else if constexpr (std::is_same_v<T, Junction>) {
          QuantClass out;
          for (const Formula& m : n.members) {
            const QuantClass c = classify(m);
            out.exists_rank = std::max(out.exists_rank, c.exists_rank);
            out.forall_rank = std::max(out.forall_rank, c.forall_rank);
            out.sigma_rank = std::max(out.sigma_rank, c.sigma_rank);
            out.pi_rank = std::max(out.pi_rank, c.pi_rank);
          }
          return out;
        } else if constexpr (std::is_same_v<T, Family>) {
          const QuantClass b = classify(n.body);
          QuantClass out{b.exists_rank, b.forall_rank, 0, 0};
          if (n.op == Connective::Or) {
            out.sigma_rank = block_level(b.sigma_rank, b.pi_rank);
            out.pi_rank = out.sigma_rank + 1;
          } else {
            out.pi_rank = block_level(b.pi_rank, b.sigma_rank);
            out.sigma_rank = out.pi_rank + 1;
          }
          return out;
        } else {
          const QuantClass b = classify(n.body);
          QuantClass out;
          if (n.q == Quantifier::Exists) {
            out.exists_rank = block_level(b.exists_rank, b.forall_rank);
            out.forall_rank = out.exists_rank + 1;
            out.sigma_rank = block_level(b.sigma_rank, b.pi_rank);
            out.pi_rank = out.sigma_rank + 1;
          } else {
            out.forall_rank = block_level(b.forall_rank, b.exists_rank);
            out.exists_rank = out.forall_rank + 1;
            out.pi_rank = block_level(b.pi_rank, b.sigma_rank);
            out.sigma_rank = out.pi_rank + 1;
          }
          return out;
        }
      },
      f.node().value);
}

namespace {

template <class Pred>
bool any_node(const Formula& f, Pred pred) {
  if (pred(f)) return true;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return false;
        } else if constexpr (std::is_same_v<T, Junction>) {
          return std::any_of(n.members.begin(), n.members.end(), [&](const Formula& m) { return any_node(m, pred); });
        } else {
          return any_node(n.body, pred);
        }
      },
      f.node().value);
}

}  // namespace

bool is_finitary(const Formula& f) {
  return !any_node(f, [](const Formula& g) { return g.kind() == Formula::Kind::Family; });
}

bool is_quantifier_free(const Formula& f) {
  return !any_node(f, [](const Formula& g) { return g.kind() == Formula::Kind::Quantified; });
}

std::size_t formula_depth(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return 0;
        } else if constexpr (std::is_same_v<T, Junction>) {
          std::size_t d = 0;
          for (const Formula& m : n.members) d = std::max(d, formula_depth(m));
          return d + 1;
        } else {
          return formula_depth(n.body) + 1;
        }
      },
      f.node().value);
}

std::size_t formula_size(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return 1;
        } else if constexpr (std::is_same_v<T, Junction>) {
          std::size_t s = 1;
          for (const Formula& m : n.members) s += formula_size(m);
          return s;
        } else {
          return formula_size(n.body) + 1;
        }
      },
      f.node().value);
}

// ---- fragment closure ---------------------------------------------------

namespace {

std::vector<Formula> children(const Formula& f) {
  return std::visit(
      [](const auto& n) -> std::vector<Formula> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return {};
        } else if constexpr (std::is_same_v<T, Junction>) {
          return n.members;
        } else {
          return {n.body};
        }
      },
      f.node().value);
}

}  // namespace

std::vector<Formula> fragment_closure(const Formula& f) {
  std::vector<Formula> out;
  std::set<Formula> seen;
  std::deque<Formula> queue;
  auto offer = [&](const Formula& g) {
    if (seen.insert(g).second) {
      out.push_back(g);
      queue.push_back(g);
    }
  };
  offer(f);
  while (!queue.empty()) {
    const Formula g = queue.front();
    queue.pop_front();
    for (const Formula& c : children(g)) offer(c);
    if (g.kind() != Formula::Kind::Negation) offer(negation(g));
  }
  return out;
}

// ---- rewriting ----------------------------------------------------------

namespace {

Symbol instantiate_symbol(const Symbol& s, const std::map<std::string, std::uint64_t, std::less<>>& values) {
  if (s.ground()) return s;
  Symbol out = s;
  for (IndexExpr& e : out.indices) {
    if (!e.is_variable()) continue;
    auto it = values.find(e.variable());
    if (it != values.end()) e = IndexExpr::lit(it->second);
  }
  return out;
}

Term instantiate_term(const Term& t, const std::map<std::string, std::uint64_t, std::less<>>& values) {
  return Term{t.kind, instantiate_symbol(t.name, values)};
}

}  // namespace

Formula instantiate_indices(const Formula& f, const std::map<std::string, std::uint64_t, std::less<>>& values) {
  if (values.empty()) return f;
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          std::vector<Term> args;
          args.reserve(n.args.size());
          for (const Term& t : n.args) args.push_back(instantiate_term(t, values));
          return atom(instantiate_symbol(n.relation, values), std::move(args));
        } else if constexpr (std::is_same_v<T, Negation>) {
          return negation(instantiate_indices(n.body, values));
        } else if constexpr (std::is_same_v<T, Junction>) {
          std::vector<Formula> members;
          members.reserve(n.members.size());
          for (const Formula& m : n.members) members.push_back(instantiate_indices(m, values));
          return junction(n.op, std::move(members));
        } else if constexpr (std::is_same_v<T, Family>) {
          auto inner = values;
          for (const std::string& v : n.index_vars) inner.erase(v);
          return family(n.op, n.index_vars, instantiate_indices(n.body, inner));
        } else {
          std::vector<Symbol> vars;
          vars.reserve(n.vars.size());
          for (const Symbol& v : n.vars) vars.push_back(instantiate_symbol(v, values));
          return quantified(n.q, std::move(vars), instantiate_indices(n.body, values));
        }
      },
      f.node().value);
}

Formula instantiate_index(const Formula& f, std::string_view index_var, std::uint64_t value) {
  return instantiate_indices(f, {{std::string(index_var), value}});
}

namespace {

void collect_all_names(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          for (const Term& t : n.args) out.insert(t.text());
        } else if constexpr (std::is_same_v<T, Junction>) {
          for (const Formula& m : n.members) collect_all_names(m, out);
        } else if constexpr (std::is_same_v<T, Quantified>) {
          for (const Symbol& v : n.vars) out.insert(v.variable_text());
          collect_all_names(n.body, out);
        } else {
          collect_all_names(n.body, out);
        }
      },
      f.node().value);
}

Formula substitute_in(const Formula& f, const std::string& variable, const Term& replacement,
                      std::set<std::string>& used) {
  return std::visit(
      [&](const auto& n) -> Formula {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          std::vector<Term> args = n.args;
          for (Term& t : args) {
            if (t.is_variable() && t.name.variable_text() == variable) t = replacement;
          }
          return atom(n.relation, std::move(args));
        } else if constexpr (std::is_same_v<T, Negation>) {
          return negation(substitute_in(n.body, variable, replacement, used));
        } else if constexpr (std::is_same_v<T, Junction>) {
          std::vector<Formula> members;
          members.reserve(n.members.size());
          for (const Formula& m : n.members) members.push_back(substitute_in(m, variable, replacement, used));
          return junction(n.op, std::move(members));
        } else if constexpr (std::is_same_v<T, Family>) {
          return family(n.op, n.index_vars, substitute_in(n.body, variable, replacement, used));
        } else {
          for (const Symbol& v : n.vars) {
            if (v.variable_text() == variable) return f;  // shadowed
          }
          if (!free_vars(n.body).contains(variable)) return f;
          std::vector<Symbol> vars = n.vars;
          Formula body = n.body;
          if (replacement.is_variable()) {
            const std::string target = replacement.name.variable_text();
            for (Symbol& v : vars) {
              if (v.variable_text() != target) continue;
              std::string fresh;
              for (unsigned k = 1;; ++k) {
                fresh = v.base + "_" + std::to_string(k);
                if (!used.contains(fresh)) break;
              }
              used.insert(fresh);
              body = substitute_in(body, v.variable_text(), var(fresh), used);
              v = Symbol(fresh);
            }
          }
          return quantified(n.q, std::move(vars), substitute_in(body, variable, replacement, used));
        }
      },
      f.node().value);
}

}  // namespace

Formula substitute(const Formula& f, std::string_view variable, const Term& replacement) {
  std::set<std::string> used;
  collect_all_names(f, used);
  used.insert(replacement.text());
  return substitute_in(f, std::string(variable), replacement, used);
}

// ---- well-formedness ----------------------------------------------------

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::UnknownSymbol: return "unknown-symbol";
    case Violation::Kind::ArityMismatch: return "arity-mismatch";
    case Violation::Kind::IndexArityMismatch: return "index-arity-mismatch";
    case Violation::Kind::UnknownConstant: return "unknown-constant";
    case Violation::Kind::EmptyBlock: return "empty-block";
    case Violation::Kind::RepeatedVariable: return "repeated-variable";
    case Violation::Kind::BadIndexBlock: return "bad-index-block";
    case Violation::Kind::UnboundIndexVariable: return "unbound-index-variable";
    case Violation::Kind::InfiniteFreeVariables: return "infinite-free-variables";
  }
  return "unknown";
}

namespace {

class WellformedChecker {
 public:
  explicit WellformedChecker(const Signature& sig) : sig_(sig) {}

  void check(const Formula& f) {
    std::visit([&](const auto& n) { visit(n); }, f.node().value);
  }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  void report(Violation::Kind k, std::string msg) { out_.push_back({k, std::move(msg)}); }

  void check_indices(const Symbol& s) {
    for (const IndexExpr& e : s.indices) {
      if (e.is_variable() && std::find(bound_.begin(), bound_.end(), e.variable()) == bound_.end()) {
        report(Violation::Kind::UnboundIndexVariable, "unbound index variable " + e.variable() + " in " + s.relation_text());
      }
    }
  }

  void visit(const Atomic& n) {
    const Symbol& r = n.relation;
    check_indices(r);
    for (const Term& t : n.args) {
      if (t.is_variable()) {
        check_indices(t.name);
      } else if (!sig_.has_constant(t.name.base)) {
        report(Violation::Kind::UnknownConstant, "unknown constant " + t.name.base);
      }
    }
    std::optional<unsigned> arity;
    if (r.base == kEquality && !r.indexed()) {
      arity = 2;
    } else if (!r.indexed()) {
      arity = sig_.relation_arity(r.base);
      if (!arity) report(Violation::Kind::UnknownSymbol, "unknown relation " + r.base);
    } else if (const FamilyDecl* fam = sig_.family(r.base)) {
      if (fam->index_arity != r.indices.size()) {
        report(Violation::Kind::IndexArityMismatch,
               r.relation_text() + " expects " + std::to_string(fam->index_arity) + " index(es)");
      }
      arity = fam->arity;
    } else {
      report(Violation::Kind::UnknownSymbol, "unknown indexed family " + r.base);
    }
    if (arity && *arity != n.args.size()) {
      report(Violation::Kind::ArityMismatch, r.relation_text() + " expects " + std::to_string(*arity) +
                                                 " argument(s), got " + std::to_string(n.args.size()));
    }
  }

  void visit(const Negation& n) { check(n.body); }

  void visit(const Junction& n) {
    for (const Formula& m : n.members) check(m);
  }

  void visit(const Family& n) {
    if (n.index_vars.empty() || n.index_vars.size() > 2) {
      report(Violation::Kind::BadIndexBlock, "an infinite connective binds one or two index variables");
    } else if (n.index_vars.size() == 2 && n.index_vars[0] == n.index_vars[1]) {
      report(Violation::Kind::BadIndexBlock, "repeated index variable " + n.index_vars[0]);
    }
    for (const auto& [text, sym] : free_var_symbols(n.body)) {
      for (const IndexExpr& e : sym.indices) {
        if (e.is_variable() &&
            std::find(n.index_vars.begin(), n.index_vars.end(), e.variable()) != n.index_vars.end()) {
          report(Violation::Kind::InfiniteFreeVariables,
                 "free variable " + text + " varies with index " + e.variable() + ": infinitely many free variables");
          break;
        }
      }
    }
    const std::size_t mark = bound_.size();
    bound_.insert(bound_.end(), n.index_vars.begin(), n.index_vars.end());
    check(n.body);
    bound_.resize(mark);
  }

  void visit(const Quantified& n) {
    if (n.vars.empty()) report(Violation::Kind::EmptyBlock, "empty quantifier block");
    std::set<std::string> seen;
    for (const Symbol& v : n.vars) {
      check_indices(v);
      if (!seen.insert(v.variable_text()).second) {
        report(Violation::Kind::RepeatedVariable, "variable " + v.variable_text() + " repeated in block");
      }
    }
    check(n.body);
  }

  const Signature& sig_;
  std::vector<std::string> bound_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> wellformed(const Formula& f, const Signature& sig) {
  WellformedChecker checker(sig);
  checker.check(f);
  return checker.take();
}

}  // namespace inflogic
