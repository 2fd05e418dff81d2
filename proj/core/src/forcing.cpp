#include "inflogic/forcing.hpp"

#include <algorithm>

#include "inflogic/error.hpp"
#include "inflogic/force.hpp"
#include "inflogic/library.hpp"
#include "inflogic/parse.hpp"

namespace inflogic {

std::string to_string(Route r) {
  switch (r) {
    case Route::TreeOracle: return "tree-oracle";
    case Route::BlockOracle: return "block-oracle";
    case Route::FiniteCollapse: return "finite-collapse";
    case Route::ForceElementary: return "force-elementary";
  }
  return "?";
}

std::string ForcingVerdict::str() const {
  std::string out = to_string(truth.value) + " route=" + to_string(route);
  if (witness) out += " " + witness->kind + "=" + witness->value;
  return out;
}

namespace {

// +1: the built-in sentence, -1: its negation, 0: anything else.
int builtin_polarity(const Formula& f, const Formula& builtin) {
  if (f == builtin) return 1;
  if (const auto* n = f.get_if<Negation>(); n && n->body == builtin) return -1;
  if (f == formal_negate(builtin)) return -1;
  return 0;
}

std::optional<FiniteStructure> finite_presentation(const ForcingQuery& q) {
  if (const auto* s = std::get_if<FiniteStructure>(&q.structure)) return *s;
  if (const auto* t = std::get_if<TreeSpec>(&q.structure); t && t->is_finite()) {
    std::size_t depth = 0;
    for (const Sequence& s : std::get<FiniteTree>(t->value).nodes) depth = std::max(depth, s.size());
    FiniteStructure out = truncate_to_finite(build_tree_structure(*t), depth);
    return out;
  }
  return std::nullopt;
}

std::string tuple_text(const std::vector<Symbol>& vars, const std::vector<std::string>& elements) {
  std::string out;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (k) out += ",";
    out += vars[k].variable_text() + "=" + elements[k];
  }
  return out;
}

ForcingVerdict collapse_route(const FiniteStructure& a, const ForcingQuery& q) {
  FiniteStructure s = a;
  s.declare(infer_signature(render_formula(q.formula)));
  ForcingVerdict v;
  v.route = Route::FiniteCollapse;
  v.truth = weak_force_finite(s, q.formula, q.assignment, q.budget);
  if (const auto* ex = q.formula.get_if<Quantified>(); ex && ex->q == Quantifier::Exists && v.truth.is_true()) {
    Realization r = type_realized(s, ex->vars, conj({ex->body}), q.assignment, q.budget);
    if (r.found.is_true()) v.witness = Witness{"tuple", tuple_text(ex->vars, r.witness)};
  }
  TruthValue sat = satisfies(s, q.formula, q.assignment, q.budget);
  if (sat.decided()) v.satisfied = sat.is_true();
  return v;
}

ForcingVerdict force_route(const FiniteStructure& a, const ForcingQuery& q) {
  FiniteStructure s = a;
  s.declare(infer_signature(render_formula(q.formula)));
  ElementaryVerdict e = eval_elementary(s, force(q.formula), q.assignment, q.budget);
  ForcingVerdict v;
  v.route = Route::ForceElementary;
  v.truth = e.truth;
  if (e.truth.is_true()) {
    if (!e.realized.empty()) {
      const auto* ex = q.formula.get_if<Quantified>();
      if (ex && ex->q == Quantifier::Exists) {
        v.witness = Witness{"tuple", tuple_text(ex->vars, e.realized)};
      }
    }
    if (!v.witness && e.alpha) v.witness = Witness{"alpha", e.alpha->str()};
  }
  TruthValue sat = satisfies(s, q.formula, q.assignment, q.budget);
  if (sat.decided()) v.satisfied = sat.is_true();
  return v;
}

}  // namespace

std::vector<Route> applicable_routes(const ForcingQuery& q) {
  std::vector<Route> out;
  if (const auto* t = std::get_if<TreeSpec>(&q.structure)) {
    if (builtin_polarity(q.formula, psi_tree()) != 0) out.push_back(Route::TreeOracle);
    (void)t;
  }
  if (const auto* c = std::get_if<BlockConfig>(&q.structure)) {
    if (builtin_polarity(q.formula, psi_blocks()) != 0 && c->total_blocks().is_omega()) {
      out.push_back(Route::BlockOracle);
    }
  }
  if (finite_presentation(q)) {
    out.push_back(Route::FiniteCollapse);
    out.push_back(Route::ForceElementary);
  }
  return out;
}

ForcingVerdict run_route(const ForcingQuery& q, Route r) {
  switch (r) {
    case Route::TreeOracle: {
      const TreeSpec& t = std::get<TreeSpec>(q.structure);
      const int polarity = builtin_polarity(q.formula, psi_tree());
      if (polarity == 0) throw PreconditionError("the tree oracle answers only the built-in psi_tree");
      ForcingVerdict v;
      v.route = r;
      const auto path = infinite_path(t);
      // Either a formula or its negation is weak-forced, never both.
      v.truth = TruthValue::of(path.has_value() == (polarity > 0));
      if (path && polarity > 0) v.witness = Witness{"certificate", path->str()};
      v.satisfied = tree_satisfies_psi(t) == (polarity > 0);
      return v;
    }
    case Route::BlockOracle: {
      const BlockConfig& c = std::get<BlockConfig>(q.structure);
      const int polarity = builtin_polarity(q.formula, psi_blocks());
      if (polarity == 0) throw PreconditionError("the block oracle answers only the built-in psi_blocks");
      ForcingVerdict v;
      v.route = r;
      v.truth = TruthValue::of(block_forces_psi(c) == (polarity > 0));
      v.satisfied = block_satisfies_psi(c) == (polarity > 0);
      return v;
    }
    case Route::FiniteCollapse:
    case Route::ForceElementary: {
      auto a = finite_presentation(q);
      if (!a) throw PreconditionError("route " + to_string(r) + " needs a finite structure");
      return r == Route::FiniteCollapse ? collapse_route(*a, q) : force_route(*a, q);
    }
  }
  throw PreconditionError("unknown route");
}

ForcingVerdict weak_forces(const ForcingQuery& q) {
  const std::vector<Route> routes = applicable_routes(q);
  if (routes.empty()) {
    throw PreconditionError("no route decides this query: infinite presentations answer only their built-in sentence");
  }
  std::optional<ForcingVerdict> first;
  for (Route r : routes) {
    ForcingVerdict v = run_route(q, r);
    if (v.truth.decided()) return v;
    if (!first) first = v;
  }
  return *first;
}

AuditReport audit(const ForcingQuery& q) {
  AuditReport report;
  std::optional<Truth> seen;
  for (Route r : applicable_routes(q)) {
    ForcingVerdict v = run_route(q, r);
    if (v.truth.decided()) {
      ++report.decided;
      if (seen && *seen != v.truth.value) report.agree = false;
      seen = v.truth.value;
    }
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

}  // namespace inflogic
