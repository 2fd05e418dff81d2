#include "inflogic/force.hpp"

#include <algorithm>

#include "inflogic/error.hpp"
#include "inflogic/parse.hpp"

namespace inflogic {

std::string to_string(ForceNode::Case c) {
  switch (c) {
    case ForceNode::Case::Atom: return "atom";
    case ForceNode::Case::Neg: return "negation";
    case ForceNode::Case::OrList: return "disjunction";
    case ForceNode::Case::AndList: return "conjunction";
    case ForceNode::Case::OrFam: return "infinite-disjunction";
    case ForceNode::Case::AndFam: return "infinite-conjunction";
    case ForceNode::Case::Exists: return "existential";
  }
  return "?";
}

namespace {

// Product of domains with one-point factors left out, so that e.g. the
// disjunction over n of an atom is indexed by n rather than by (n, unit).
class Product {
 public:
  explicit Product(std::vector<Domain> parts) : parts_(std::move(parts)) {
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      if (!is_unit(parts_[k])) kept_.push_back(k);
    }
  }

  Domain domain() const {
    if (kept_.empty()) return unit_domain();
    if (kept_.size() == 1) return parts_[kept_[0]];
    std::vector<Domain> ds;
    for (std::size_t k : kept_) ds.push_back(parts_[k]);
    return prod_domain(std::move(ds));
  }

  Tag project(const Tag& t, std::size_t i) const {
    auto rank = std::find(kept_.begin(), kept_.end(), i);
    if (rank == kept_.end()) return Tag::unit();
    if (kept_.size() == 1) return t;
    return t.items.at(static_cast<std::size_t>(rank - kept_.begin()));
  }

  Tag build(const std::vector<Tag>& components) const {
    if (kept_.empty()) return Tag::unit();
    if (kept_.size() == 1) return components[kept_[0]];
    std::vector<Tag> items;
    for (std::size_t k : kept_) items.push_back(components[k]);
    return Tag::tuple(std::move(items));
  }

 private:
  std::vector<Domain> parts_;
  std::vector<std::size_t> kept_;
};

// Choice functions from d to c, with the degenerate cases collapsed: into a
// one-point codomain there is one function; from a one-point domain a
// function is just its value.
Domain choice_domain(const Domain& d, const Domain& c) {
  if (is_unit(c)) return unit_domain();
  if (is_unit(d)) return c;
  return choicefn_domain(d, c);
}

Tag apply_choice(const Domain& d, const Domain& c, const Tag& f, const Tag& x) {
  if (is_unit(c)) return Tag::unit();
  if (is_unit(d)) return f;
  return f.apply(x);
}

Domain index_domain(const std::vector<std::string>& index_vars) {
  return index_vars.size() == 1 ? nat_domain() : natpair_domain();
}

Tag index_tag(const std::vector<std::uint64_t>& point) {
  if (point.size() == 1) return Tag::nat(point[0]);
  return Tag::tuple({Tag::nat(point[0]), Tag::nat(point[1])});
}

std::map<std::string, std::uint64_t, std::less<>> index_values(const std::vector<std::string>& vars, const Tag& t) {
  std::map<std::string, std::uint64_t, std::less<>> out;
  if (vars.size() == 1) {
    out[vars[0]] = t.value;
  } else {
    out[vars[0]] = t.items.at(0).value;
    out[vars[1]] = t.items.at(1).value;
  }
  return out;
}

using Node = ForceNode;
using NodePtr = std::shared_ptr<Node>;

ForceTree build(const Formula& f);

// Force of a negation: the negation of OR_a AND_b theta is AND_a OR_b ~theta,
// which distributes to OR over choice functions g of AND_a ~theta(a, g(a)).
ForceTree negation_node(const Formula& source, ForceTree child) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Case::Neg;
  node->source = source;
  node->outer = choice_domain(child->outer, child->inner);
  node->inner = child->outer;
  node->children = {std::move(child)};
  return node;
}

// OR_a AND_{S finite} EXISTS y AND_{b in S} theta(a, b)
ForceTree exists_node(const Formula& source, std::vector<Symbol> vars, ForceTree child) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Case::Exists;
  node->source = source;
  node->outer = child->outer;
  node->inner = finsubsets_domain(child->inner);
  node->vars = std::move(vars);
  node->children = {std::move(child)};
  return node;
}

ForceTree build(const Formula& f) {
  return std::visit(
      [&](const auto& n) -> ForceTree {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          auto node = std::make_shared<Node>();
          node->kind = Node::Case::Atom;
          node->source = f;
          node->outer = unit_domain();
          node->inner = unit_domain();
          return node;
        } else if constexpr (std::is_same_v<T, Negation>) {
          return negation_node(f, build(n.body));
        } else if constexpr (std::is_same_v<T, Junction>) {
          auto node = std::make_shared<Node>();
          node->source = f;
          std::vector<Domain> outers;
          std::vector<Domain> inners;
          for (const Formula& m : n.members) {
            node->children.push_back(build(m));
            outers.push_back(node->children.back()->outer);
            inners.push_back(node->children.back()->inner);
          }
          if (n.op == Connective::Or) {
            // union of the members' outer families; a beta aimed at another
            // member contributes the empty conjunction
            node->kind = Node::Case::OrList;
            node->outer = sum_domain(std::move(outers));
          } else {
            // OR over g choosing an alpha per member of AND_{member, beta}
            node->kind = Node::Case::AndList;
            node->outer = Product(std::move(outers)).domain();
          }
          node->inner = sum_domain(std::move(inners));
          return node;
        } else if constexpr (std::is_same_v<T, Family>) {
          auto node = std::make_shared<Node>();
          node->source = f;
          node->index_vars = n.index_vars;
          ForceTree child = build(n.body);
          const Domain index = index_domain(n.index_vars);
          if (n.op == Connective::Or) {
            node->kind = Node::Case::OrFam;
            node->outer = Product({index, child->outer}).domain();
            node->inner = child->inner;
          } else {
            node->kind = Node::Case::AndFam;
            node->outer = choice_domain(index, child->outer);
            node->inner = Product({index, child->inner}).domain();
          }
          node->children = {std::move(child)};
          return node;
        } else {
          if (n.q == Quantifier::Exists) return exists_node(f, n.vars, build(n.body));
          // forall y phi is forced as not exists y not phi
          const Formula not_body = negation(n.body);
          const Formula witness = exists(n.vars, not_body);
          return negation_node(f, exists_node(witness, n.vars, negation_node(not_body, build(n.body))));
        }
      },
      f.node().value);
}

Formula leaf_of(const ForceNode& node, const Tag& alpha, const Tag& beta) {
  switch (node.kind) {
    case Node::Case::Atom: return node.source;
    case Node::Case::Neg: {
      const ForceNode& c = *node.children[0];
      const Tag& a = beta;
      return formal_negate(leaf_of(c, a, apply_choice(c.outer, c.inner, alpha, a)));
    }
    case Node::Case::OrList: {
      if (alpha.value != beta.value) return truth();
      return leaf_of(*node.children.at(alpha.value), alpha.items.front(), beta.items.front());
    }
    case Node::Case::AndList: {
      std::vector<Domain> outers;
      for (const auto& c : node.children) outers.push_back(c->outer);
      const std::size_t i = beta.value;
      return leaf_of(*node.children.at(i), Product(std::move(outers)).project(alpha, i), beta.items.front());
    }
    case Node::Case::OrFam: {
      const ForceNode& c = *node.children[0];
      const Product p({index_domain(node.index_vars), c.outer});
      const Tag n = p.project(alpha, 0);
      return instantiate_indices(leaf_of(c, p.project(alpha, 1), beta), index_values(node.index_vars, n));
    }
    case Node::Case::AndFam: {
      const ForceNode& c = *node.children[0];
      const Domain index = index_domain(node.index_vars);
      const Product p({index, c.inner});
      const Tag n = p.project(beta, 0);
      const Tag a = apply_choice(index, c.outer, alpha, n);
      return instantiate_indices(leaf_of(c, a, p.project(beta, 1)), index_values(node.index_vars, n));
    }
    case Node::Case::Exists: {
      const ForceNode& c = *node.children[0];
      std::vector<Formula> members;
      for (const Tag& b : beta.items) members.push_back(leaf_of(c, alpha, b));
      return exists(node.vars, conj(std::move(members)));
    }
  }
  throw PreconditionError("unreachable force node");
}

}  // namespace

ElementaryFormula force(const Formula& f) { return ElementaryFormula(build(f)); }

Formula ElementaryFormula::leaf(const Tag& alpha, const Tag& beta) const {
  if (!member(outer(), alpha)) throw PreconditionError("alpha " + alpha.str() + " is outside " + render_domain(outer()));
  if (!member(inner(), beta)) throw PreconditionError("beta " + beta.str() + " is outside " + render_domain(inner()));
  return leaf_of(*root_, alpha, beta);
}

bool operator==(const ElementaryFormula& a, const ElementaryFormula& b) {
  return a.source() == b.source() && domain_equal(a.outer(), b.outer()) && domain_equal(a.inner(), b.inner());
}

std::vector<ElementaryLeaf> elementary_leaves(const ElementaryFormula& e, std::size_t outer_bound,
                                              std::size_t inner_bound) {
  if (outer_bound == 0 || inner_bound == 0) throw PreconditionError("leaf bounds must be at least 1");
  std::vector<ElementaryLeaf> out;
  const std::vector<Tag> alphas = enumerate(e.outer(), outer_bound);
  const std::vector<Tag> betas = enumerate(e.inner(), inner_bound);
  for (const Tag& a : alphas) {
    for (const Tag& b : betas) out.push_back({a, b, leaf_of(*e.tree(), a, b)});
  }
  return out;
}

std::vector<ElementaryLeaf> simplify_leaves(std::vector<ElementaryLeaf> leaves) {
  std::vector<ElementaryLeaf> out;
  for (ElementaryLeaf& l : leaves) {
    if (l.theta == truth()) continue;
    const bool repeated = std::any_of(out.begin(), out.end(), [&](const ElementaryLeaf& o) {
      return o.alpha == l.alpha && o.theta == l.theta;
    });
    if (!repeated) out.push_back(std::move(l));
  }
  return out;
}

// ---- evaluation ---------------------------------------------------------

namespace {

using IndexEnv = std::map<std::string, std::uint64_t, std::less<>>;

class ElementaryEvaluator {
 public:
  ElementaryEvaluator(const FiniteStructure& a, std::size_t budget) : a_(a), budget_(budget) {}

  ElementaryVerdict eval(const ForceNode& node, Valuation& val, const IndexEnv& idx) {
    switch (node.kind) {
      case Node::Case::Atom: {
        ElementaryVerdict v{satisfies(a_, instantiate_indices(node.source, idx), val, budget_), std::nullopt, {}};
        if (v.truth.is_true()) v.alpha = Tag::unit();
        return v;
      }
      case Node::Case::Neg: {
        // A witness here would be a choice of falsified beta for every alpha of
        // the child; it is not reported.
        ElementaryVerdict child = eval(*node.children[0], val, idx);
        return {!child.truth, std::nullopt, {}};
      }
      case Node::Case::OrList: return junction(node, val, idx, false);
      case Node::Case::AndList: return junction(node, val, idx, true);
      case Node::Case::OrFam:
      case Node::Case::AndFam: return family(node, val, idx);
      case Node::Case::Exists: return existential(node, val, idx);
    }
    throw PreconditionError("unreachable force node");
  }

 private:
  ElementaryVerdict junction(const ForceNode& node, Valuation& val, const IndexEnv& idx, bool is_and) {
    std::optional<TruthValue> pending;
    std::vector<Tag> alphas;
    bool complete = true;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      ElementaryVerdict r = eval(*node.children[i], val, idx);
      if (!r.truth.decided()) {
        if (!pending) pending = r.truth;
        continue;
      }
      if (!is_and && r.truth.is_true()) {
        ElementaryVerdict out{r.truth, std::nullopt, {}};
        if (r.alpha) out.alpha = Tag::inj(i, *r.alpha);
        return out;
      }
      if (is_and && r.truth.is_false()) return {r.truth, std::nullopt, {}};
      if (r.alpha) {
        alphas.push_back(*r.alpha);
      } else {
        complete = false;
      }
    }
    if (pending) return {*pending, std::nullopt, {}};
    ElementaryVerdict out{TruthValue::of(is_and), std::nullopt, {}};
    if (is_and && complete) {
      std::vector<Domain> outers;
      for (const auto& c : node.children) outers.push_back(c->outer);
      out.alpha = Product(std::move(outers)).build(alphas);
    }
    return out;
  }

  ElementaryVerdict family(const ForceNode& node, Valuation& val, const IndexEnv& idx) {
    const bool is_and = node.kind == Node::Case::AndFam;
    const ForceNode& child = *node.children[0];
    const Formula here = instantiate_indices(node.source, idx);
    const std::uint64_t horizon = index_horizon(a_, here.as<Family>().body);
    const IndexSweep sweep = index_sweep(node.index_vars.size(), horizon, budget_);
    std::optional<TruthValue> pending;
    std::map<std::vector<std::uint64_t>, std::optional<Tag>> alphas;
    for (const auto& point : sweep.points) {
      IndexEnv inner = idx;
      for (std::size_t k = 0; k < point.size(); ++k) inner[node.index_vars[k]] = point[k];
      ElementaryVerdict r = eval(child, val, inner);
      if (!r.truth.decided()) {
        if (!pending) pending = r.truth;
        continue;
      }
      if (!is_and && r.truth.is_true()) {
        ElementaryVerdict out{r.truth, std::nullopt, {}};
        if (r.alpha) {
          out.alpha = Product({index_domain(node.index_vars), child.outer}).build({index_tag(point), *r.alpha});
        }
        return out;
      }
      if (is_and && r.truth.is_false()) return {r.truth, std::nullopt, {}};
      alphas[point] = r.alpha;
    }
    if (pending) return {*pending, std::nullopt, {}};
    if (!sweep.exhaustive) {
      // The tables may still settle a literal template exactly.
      TruthValue direct = satisfies(a_, here, val, budget_);
      if (direct.decided()) return {direct, std::nullopt, {}};
      return {TruthValue::unknown(here), std::nullopt, {}};
    }
    ElementaryVerdict out{TruthValue::of(is_and), std::nullopt, {}};
    if (is_and) out.alpha = choice_witness(node, child, horizon, alphas);
    return out;
  }

  // g(n) = the alpha found at n, and past the horizon the alpha found at the
  // representative index (all such indices are interchangeable).
  static std::optional<Tag> choice_witness(const ForceNode& node, const ForceNode& child, std::uint64_t horizon,
                                           const std::map<std::vector<std::uint64_t>, std::optional<Tag>>& alphas) {
    const Domain index = index_domain(node.index_vars);
    if (is_unit(child.outer)) return Tag::unit();
    if (node.index_vars.size() != 1) return std::nullopt;
    auto rep = alphas.find({horizon});
    if (rep == alphas.end() || !rep->second) return std::nullopt;
    std::vector<std::pair<Tag, Tag>> entries;
    for (std::uint64_t n = 0; n < horizon; ++n) {
      auto it = alphas.find({n});
      if (it == alphas.end() || !it->second) return std::nullopt;
      entries.emplace_back(Tag::nat(n), *it->second);
    }
    return Tag::map(*rep->second, std::move(entries));
  }

  // For a fixed alpha the conjunction over finite S asks that the type
  // {theta(alpha, b) : b} be finitely satisfiable; in a finite structure it
  // is then realized. Some alpha admits a realized type iff some tuple y
  // makes the child true at y.
  ElementaryVerdict existential(const ForceNode& node, Valuation& val, const IndexEnv& idx) {
    const Formula here = instantiate_indices(node.source, idx);
    std::vector<std::string> names;
    for (const Symbol& v : here.as<Quantified>().vars) names.push_back(v.variable_text());
    std::vector<std::optional<std::size_t>> saved;
    for (const std::string& v : names) {
      auto it = val.find(v);
      saved.push_back(it == val.end() ? std::nullopt : std::optional<std::size_t>(it->second));
    }
    std::optional<TruthValue> pending;
    std::optional<ElementaryVerdict> found;
    if (a_.size() > 0) {
      std::vector<std::size_t> pick(names.size(), 0);
      for (;;) {
        for (std::size_t k = 0; k < names.size(); ++k) val[names[k]] = pick[k];
        ElementaryVerdict r = eval(*node.children[0], val, idx);
        if (r.truth.is_true()) {
          found = ElementaryVerdict{r.truth, r.alpha, {}};
          for (std::size_t e : pick) found->realized.push_back(a_.element(e));
          break;
        }
        if (!r.truth.decided() && !pending) pending = r.truth;
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == a_.size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (saved[k]) {
        val[names[k]] = *saved[k];
      } else {
        val.erase(names[k]);
      }
    }
    if (found) return *found;
    if (pending) return {*pending, std::nullopt, {}};
    return {TruthValue::of(false), std::nullopt, {}};
  }

  const FiniteStructure& a_;
  std::size_t budget_;
};

}  // namespace

ElementaryVerdict eval_elementary(const FiniteStructure& a, const ElementaryFormula& e, const Valuation& val,
                                  std::size_t budget) {
  for (const std::string& v : free_vars(e.source())) {
    if (!val.contains(v)) throw EvalError("unbound variable " + v);
  }
  Valuation work = val;
  return ElementaryEvaluator(a, budget).eval(*e.tree(), work, {});
}

ElementaryVerdict eval_elementary(const FiniteStructure& a, const ElementaryFormula& e, const Assignment& asg,
                                  std::size_t budget) {
  return eval_elementary(a, e, to_valuation(a, asg), budget);
}

// ---- text form ----------------------------------------------------------

std::string render_elementary(const ElementaryFormula& e) {
  return "(OrFam " + render_domain(e.outer()) + " (AndFam " + render_domain(e.inner()) + " (force " +
         render_formula(e.source()) + ")))";
}

ElementaryFormula parse_elementary(std::string_view text, const Signature& sig) {
  const SExpr top = read_sexpr(text);
  if (!top.has_head("OrFam") || top.items.size() != 3) fail_at(top, "expected (OrFam TAGSPEC (AndFam TAGSPEC body))");
  const SExpr& conj_part = top.items[2];
  if (!conj_part.has_head("AndFam") || conj_part.items.size() != 3) fail_at(conj_part, "expected (AndFam TAGSPEC body)");
  const SExpr& body = conj_part.items[2];
  if (!body.has_head("force") || body.items.size() != 2) fail_at(body, "expected (force FORMULA)");
  const Domain outer = parse_domain(top.items[1]);
  const Domain inner = parse_domain(conj_part.items[1]);
  ElementaryFormula e = force(parse_formula(body.items[1], sig));
  if (!domain_equal(outer, e.outer())) {
    fail_at(top.items[1], "outer family " + render_domain(outer) + " does not match " + render_domain(e.outer()));
  }
  if (!domain_equal(inner, e.inner())) {
    fail_at(conj_part.items[1], "inner family " + render_domain(inner) + " does not match " + render_domain(e.inner()));
  }
  return e;
}

}  // namespace inflogic
