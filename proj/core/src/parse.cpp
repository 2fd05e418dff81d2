#include "inflogic/parse.hpp"

#include <algorithm>
#include <cctype>

#include "inflogic/error.hpp"

namespace inflogic {

std::optional<IndexedName> split_indexed_name(std::string_view name) {
  auto split_parts = [](std::string_view s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = s.find(',', start);
      parts.emplace_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return parts;
  };
  if (name.size() >= 4 && name.back() == '}') {
    const std::size_t open = name.rfind("_{");
    if (open == std::string_view::npos || open == 0) return std::nullopt;
    IndexedName out{std::string(name.substr(0, open)), split_parts(name.substr(open + 2, name.size() - open - 3))};
    return out;
  }
  const std::size_t us = name.rfind('_');
  if (us == std::string_view::npos || us == 0 || us + 1 == name.size()) return std::nullopt;
  return IndexedName{std::string(name.substr(0, us)), split_parts(name.substr(us + 1))};
}

namespace {

bool is_natural(std::string_view s) {
  return !s.empty() && s.size() <= 19 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '*' || c == '-';
  });
}

class FormulaReader {
 public:
  explicit FormulaReader(const Signature& sig) : sig_(sig) {}

  Formula read(const SExpr& e) {
    if (!e.is_list() || e.items.empty() || !e.items.front().is_atom()) fail_at(e, "expected a formula form");
    const std::string& head = e.items.front().atom;
    if (head == "atom") return read_atom(e);
    if (head == "not") {
      expect_arity(e, 1);
      return negation(read(e.items[1]));
    }
    if (head == "and" || head == "or") {
      std::vector<Formula> members;
      for (std::size_t k = 1; k < e.items.size(); ++k) members.push_back(read(e.items[k]));
      return junction(head == "and" ? Connective::And : Connective::Or, std::move(members));
    }
    if (head == "implies") {
      expect_arity(e, 2);
      return implies(read(e.items[1]), read(e.items[2]));
    }
    if (head == "iff") {
      expect_arity(e, 2);
      Formula a = read(e.items[1]);
      Formula b = read(e.items[2]);
      return conj({implies(a, b), implies(b, a)});
    }
    if (head == "And" || head == "Or") return read_family(e, head == "And" ? Connective::And : Connective::Or);
    if (head == "exists" || head == "forall") {
      return read_quantified(e, head == "exists" ? Quantifier::Exists : Quantifier::Forall);
    }
    fail_at(e.items.front(), "unknown form '" + head + "'");
  }

 private:
  static void expect_arity(const SExpr& e, std::size_t n) {
    if (e.items.size() != n + 1) {
      fail_at(e, "'" + e.items.front().atom + "' takes " + std::to_string(n) + " argument(s)");
    }
  }

  IndexExpr read_index(const SExpr& where, const std::string& part) {
    if (is_natural(part)) return IndexExpr::lit(std::stoull(part));
    if (!is_identifier(part)) fail_at(where, "malformed index '" + part + "'");
    if (std::find(index_scope_.begin(), index_scope_.end(), part) == index_scope_.end()) {
      fail_at(where, "unbound index variable " + part);
    }
    return IndexExpr::var(part);
  }

  Symbol read_variable(const SExpr& e) {
    if (!e.is_atom() || !is_identifier(e.atom.substr(0, e.atom.find('{')))) fail_at(e, "expected a variable name");
    const std::string& text = e.atom;
    if (text.back() == '}') {
      auto split = split_indexed_name(text);
      if (!split || !is_identifier(split->base)) fail_at(e, "malformed indexed variable '" + text + "'");
      Symbol s(split->base);
      for (const std::string& p : split->parts) s.indices.push_back(read_index(e, p));
      return s;
    }
    return Symbol(text);
  }

  Term read_term(const SExpr& e) {
    if (!e.is_atom()) fail_at(e, "expected a term");
    if (sig_.has_constant(e.atom)) return Term::constant(e.atom);
    return Term::variable(read_variable(e));
  }

  Formula read_atom(const SExpr& e) {
    if (e.items.size() < 2 || !e.items[1].is_atom()) fail_at(e, "'atom' needs a relation name");
    const SExpr& name_expr = e.items[1];
    const std::string& name = name_expr.atom;
    std::vector<Term> args;
    for (std::size_t k = 2; k < e.items.size(); ++k) args.push_back(read_term(e.items[k]));

    Symbol relation;
    unsigned arity = 0;
    if (name == kEquality) {
      relation = Symbol(name);
      arity = 2;
    } else if (auto plain = sig_.relation_arity(name)) {
      relation = Symbol(name);
      arity = *plain;
    } else if (auto split = split_indexed_name(name); split && sig_.family(split->base)) {
      const FamilyDecl& fam = *sig_.family(split->base);
      if (split->parts.size() != fam.index_arity) {
        fail_at(name_expr, "index arity mismatch: " + fam.base + " takes " + std::to_string(fam.index_arity) +
                               " index(es)");
      }
      relation = Symbol(split->base);
      for (const std::string& p : split->parts) relation.indices.push_back(read_index(name_expr, p));
      arity = fam.arity;
    } else {
      fail_at(name_expr, "unknown symbol " + name);
    }
    if (args.size() != arity) {
      fail_at(e, "arity mismatch: " + name + " takes " + std::to_string(arity) + " argument(s), got " +
                     std::to_string(args.size()));
    }
    return atom(std::move(relation), std::move(args));
  }

  Formula read_family(const SExpr& e, Connective op) {
    expect_arity(e, 2);
    const SExpr& block = e.items[1];
    if (!block.is_list() || block.items.empty() || block.items.size() > 2) {
      fail_at(block, "an infinite connective binds one or two index variables");
    }
    std::vector<std::string> vars;
    for (const SExpr& v : block.items) {
      if (!v.is_atom() || !is_identifier(v.atom)) fail_at(v, "expected an index variable");
      if (std::find(vars.begin(), vars.end(), v.atom) != vars.end()) fail_at(v, "repeated index variable " + v.atom);
      vars.push_back(v.atom);
    }
    const std::size_t mark = index_scope_.size();
    index_scope_.insert(index_scope_.end(), vars.begin(), vars.end());
    Formula body = read(e.items[2]);
    index_scope_.resize(mark);
    return family(op, std::move(vars), std::move(body));
  }

  Formula read_quantified(const SExpr& e, Quantifier q) {
    expect_arity(e, 2);
    const SExpr& block = e.items[1];
    if (!block.is_list()) fail_at(block, "expected a variable block");
    if (block.items.empty()) fail_at(block, "empty quantifier block");
    std::vector<Symbol> vars;
    for (const SExpr& v : block.items) {
      Symbol s = read_variable(v);
      if (sig_.has_constant(v.atom)) fail_at(v, "cannot quantify over constant " + v.atom);
      if (std::find(vars.begin(), vars.end(), s) != vars.end()) fail_at(v, "repeated variable " + v.atom);
      vars.push_back(std::move(s));
    }
    return quantified(q, std::move(vars), read(e.items[2]));
  }

  const Signature& sig_;
  std::vector<std::string> index_scope_;
};

SExpr term_sexpr(const Term& t) { return SExpr::make_atom(t.text()); }

}  // namespace

Formula parse_formula(const SExpr& expr, const Signature& sig) { return FormulaReader(sig).read(expr); }

Formula parse_formula(std::string_view text, const Signature& sig) { return parse_formula(read_sexpr(text), sig); }

SExpr formula_to_sexpr(const Formula& f) {
  return std::visit(
      [](const auto& n) -> SExpr {
        using T = std::decay_t<decltype(n)>;
        std::vector<SExpr> items;
        if constexpr (std::is_same_v<T, Atomic>) {
          items.push_back(SExpr::make_atom("atom"));
          items.push_back(SExpr::make_atom(n.relation.relation_text()));
          for (const Term& t : n.args) items.push_back(term_sexpr(t));
        } else if constexpr (std::is_same_v<T, Negation>) {
          items.push_back(SExpr::make_atom("not"));
          items.push_back(formula_to_sexpr(n.body));
        } else if constexpr (std::is_same_v<T, Junction>) {
          items.push_back(SExpr::make_atom(n.op == Connective::And ? "and" : "or"));
          for (const Formula& m : n.members) items.push_back(formula_to_sexpr(m));
        } else if constexpr (std::is_same_v<T, Family>) {
          items.push_back(SExpr::make_atom(n.op == Connective::And ? "And" : "Or"));
          std::vector<SExpr> vars;
          for (const std::string& v : n.index_vars) vars.push_back(SExpr::make_atom(v));
          items.push_back(SExpr::make_list(std::move(vars)));
          items.push_back(formula_to_sexpr(n.body));
        } else {
          items.push_back(SExpr::make_atom(n.q == Quantifier::Exists ? "exists" : "forall"));
          std::vector<SExpr> vars;
          for (const Symbol& v : n.vars) vars.push_back(SExpr::make_atom(v.variable_text()));
          items.push_back(SExpr::make_list(std::move(vars)));
          items.push_back(formula_to_sexpr(n.body));
        }
        return SExpr::make_list(std::move(items));
      },
      f.node().value);
}

std::string render_formula(const Formula& f) { return formula_to_sexpr(f).str(); }

namespace {

void infer_from(const SExpr& e, std::vector<std::string>& scope, Signature& sig) {
  if (!e.is_list() || e.items.empty()) return;
  if (e.has_head("atom") && e.items.size() >= 2 && e.items[1].is_atom()) {
    const std::string& name = e.items[1].atom;
    if (name == kEquality) return;
    const auto arity = static_cast<unsigned>(e.items.size() - 2);
    auto split = split_indexed_name(name);
    const bool indexed = split && split->parts.size() <= 2 && std::all_of(split->parts.begin(), split->parts.end(), [&](const std::string& p) {
      return is_natural(p) || std::find(scope.begin(), scope.end(), p) != scope.end();
    });
    if (indexed) {
      const auto index_arity = static_cast<unsigned>(split->parts.size());
      if (const FamilyDecl* fam = sig.family(split->base)) {
        if (fam->arity != arity || fam->index_arity != index_arity) {
          fail_at(e, "inconsistent use of family " + split->base);
        }
      } else {
        sig.add_family(split->base, index_arity, arity);
      }
    } else if (auto known = sig.relation_arity(name)) {
      if (*known != arity) fail_at(e, "inconsistent arity for " + name);
    } else {
      sig.add_relation(name, arity);
    }
    return;
  }
  if ((e.has_head("And") || e.has_head("Or")) && e.items.size() == 3 && e.items[1].is_list()) {
    const std::size_t mark = scope.size();
    for (const SExpr& v : e.items[1].items) {
      if (v.is_atom()) scope.push_back(v.atom);
    }
    infer_from(e.items[2], scope, sig);
    scope.resize(mark);
    return;
  }
  for (const SExpr& child : e.items) infer_from(child, scope, sig);
}

}  // namespace

Signature infer_signature(std::string_view text) {
  Signature sig;
  std::vector<std::string> scope;
  try {
    for (const SExpr& e : read_sexprs(text)) infer_from(e, scope, sig);
  } catch (const SignatureError& err) {
    throw SignatureError(std::string("cannot infer signature: ") + err.what());
  }
  return sig;
}

}  // namespace inflogic
