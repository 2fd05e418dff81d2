#include "inflogic/finite_model.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "inflogic/error.hpp"
#include "inflogic/parse.hpp"

namespace inflogic {

using nlohmann::json;

std::string to_string(Truth t) {
  switch (t) {
    case Truth::True: return "TRUE";
    case Truth::False: return "FALSE";
    case Truth::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

// ---- structure ----------------------------------------------------------

FiniteStructure::FiniteStructure(const std::vector<std::string>& universe) {
  for (const std::string& e : universe) add_element(e);
}

std::size_t FiniteStructure::add_element(std::string name) {
  if (index_.contains(name)) throw FormatError("element '" + name + "' listed twice");
  const std::size_t pos = universe_.size();
  index_.emplace(name, pos);
  universe_.push_back(std::move(name));
  return pos;
}

std::optional<std::size_t> FiniteStructure::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteStructure::require(std::string_view name) const {
  if (auto pos = find(name)) return *pos;
  throw EvalError("'" + std::string(name) + "' is not an element of the structure");
}

void FiniteStructure::declare(const Signature& sig) { sig_ = sig_.merged(sig); }

void FiniteStructure::ensure_declared_plain(const std::string& name, std::size_t arity) {
  if (auto known = sig_.relation_arity(name)) {
    if (*known != arity) throw FormatError("relation '" + name + "' used with arity " + std::to_string(arity));
    return;
  }
  sig_.add_relation(name, static_cast<unsigned>(arity));
}

void FiniteStructure::ensure_declared_family(const std::string& base, std::size_t index_arity, std::size_t arity) {
  if (const FamilyDecl* fam = sig_.family(base)) {
    if (fam->index_arity != index_arity || fam->arity != arity) {
      throw FormatError("family '" + base + "' used inconsistently with its declaration");
    }
    return;
  }
  sig_.add_family(base, static_cast<unsigned>(index_arity), static_cast<unsigned>(arity));
}

namespace {

bool numeric(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string pattern_key(const std::string& base, const IndexPattern& p) {
  std::string out = base + "_";
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out.push_back(',');
    out += p[k] ? std::to_string(*p[k]) : "*";
  }
  return out;
}

bool pattern_matches(const IndexPattern& stored, const std::vector<std::uint64_t>& indices) {
  for (std::size_t k = 0; k < stored.size(); ++k) {
    if (stored[k] && *stored[k] != indices[k]) return false;
  }
  return true;
}

bool has_wildcard(const IndexPattern& p) {
  return std::any_of(p.begin(), p.end(), [](const auto& v) { return !v.has_value(); });
}

}  // namespace

void FiniteStructure::add_fact(std::string_view key, const std::vector<std::string>& names) {
  Tuple tuple;
  tuple.reserve(names.size());
  for (const std::string& n : names) {
    auto pos = find(n);
    if (!pos) throw FormatError("fact " + std::string(key) + " mentions unknown element '" + n + "'");
    tuple.push_back(*pos);
  }
  if (sig_.relation_arity(key)) {
    add_fact(std::string(key), tuple);
    return;
  }
  auto split = split_indexed_name(key);
  const bool indexed = split && split->parts.size() <= 2 &&
                       std::all_of(split->parts.begin(), split->parts.end(),
                                   [](const std::string& p) { return p == "*" || numeric(p); });
  if (!indexed) {
    add_fact(std::string(key), tuple);
    return;
  }
  IndexPattern pattern;
  for (const std::string& p : split->parts) {
    if (p == "*") {
      pattern.emplace_back(std::nullopt);
    } else {
      pattern.emplace_back(std::stoull(p));
    }
  }
  add_indexed_fact(split->base, pattern, tuple);
}

void FiniteStructure::add_fact(const std::string& relation, const Tuple& tuple) {
  ensure_declared_plain(relation, tuple.size());
  for (std::size_t e : tuple) {
    if (e >= size()) throw FormatError("fact " + relation + " mentions an element outside the universe");
  }
  plain_[relation].insert(tuple);
}

void FiniteStructure::add_indexed_fact(const std::string& base, const IndexPattern& pattern, const Tuple& tuple) {
  ensure_declared_family(base, pattern.size(), tuple.size());
  for (std::size_t e : tuple) {
    if (e >= size()) throw FormatError("fact " + base + " mentions an element outside the universe");
  }
  indexed_[base][pattern].insert(tuple);
}

void FiniteStructure::set_constant(const std::string& name, std::string_view element) {
  const std::size_t pos = require(element);
  if (!sig_.has_constant(name)) sig_.add_constant(name);
  constants_[name] = pos;
}

std::optional<std::size_t> FiniteStructure::constant(std::string_view name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

bool FiniteStructure::holds(const Symbol& relation, const Tuple& tuple) const {
  if (relation.base == kEquality && !relation.indexed()) {
    if (tuple.size() != 2) throw EvalError("equality takes two arguments");
    return tuple[0] == tuple[1];
  }
  if (!relation.indexed()) {
    auto arity = sig_.relation_arity(relation.base);
    if (!arity) throw EvalError("unknown relation " + relation.base);
    if (*arity != tuple.size()) throw EvalError("arity mismatch for " + relation.base);
    auto it = plain_.find(relation.base);
    return it != plain_.end() && it->second.contains(tuple);
  }
  const FamilyDecl* fam = sig_.family(relation.base);
  if (!fam) throw EvalError("unknown relation " + relation.relation_text());
  if (fam->index_arity != relation.indices.size() || fam->arity != tuple.size()) {
    throw EvalError("arity mismatch for " + relation.relation_text());
  }
  std::vector<std::uint64_t> indices;
  for (const IndexExpr& e : relation.indices) {
    if (e.is_variable()) throw EvalError("unbound index variable " + e.variable());
    indices.push_back(e.literal());
  }
  auto it = indexed_.find(relation.base);
  if (it == indexed_.end()) return false;
  IndexPattern exact(indices.begin(), indices.end());
  if (auto t = it->second.find(exact); t != it->second.end() && t->second.contains(tuple)) return true;
  for (const auto& [pattern, tuples] : it->second) {
    if (has_wildcard(pattern) && pattern_matches(pattern, indices) && tuples.contains(tuple)) return true;
  }
  return false;
}

std::uint64_t FiniteStructure::horizon() const {
  std::uint64_t h = 0;
  for (const auto& [base, tables] : indexed_) {
    for (const auto& [pattern, tuples] : tables) {
      if (tuples.empty()) continue;
      for (const auto& v : pattern) {
        if (v) h = std::max(h, *v + 1);
      }
    }
  }
  return h;
}

FiniteStructure FiniteStructure::restrict_to(const std::vector<std::string>& elements) const {
  FiniteStructure out(elements);
  out.sig_ = sig_;
  std::vector<std::optional<std::size_t>> remap(size());
  for (std::size_t k = 0; k < elements.size(); ++k) remap[require(elements[k])] = k;
  auto project = [&](const Tuple& t) -> std::optional<Tuple> {
    Tuple r;
    for (std::size_t e : t) {
      if (!remap[e]) return std::nullopt;
      r.push_back(*remap[e]);
    }
    return r;
  };
  for (const auto& [name, tuples] : plain_) {
    auto& dst = out.plain_[name];
    for (const Tuple& t : tuples) {
      if (auto r = project(t)) dst.insert(*r);
    }
  }
  for (const auto& [base, tables] : indexed_) {
    for (const auto& [pattern, tuples] : tables) {
      auto& dst = out.indexed_[base][pattern];
      for (const Tuple& t : tuples) {
        if (auto r = project(t)) dst.insert(*r);
      }
    }
  }
  for (const auto& [name, e] : constants_) {
    if (!remap[e]) throw PreconditionError("restriction drops the interpretation of constant " + name);
    out.constants_[name] = *remap[e];
  }
  return out;
}

bool operator==(const FiniteStructure& a, const FiniteStructure& b) {
  auto nonempty = [](const FiniteStructure& s) {
    std::map<std::string, std::set<std::vector<std::string>>> facts;
    auto names = [&](const Tuple& t) {
      std::vector<std::string> out;
      for (std::size_t e : t) out.push_back(s.element(e));
      return out;
    };
    for (const auto& [name, tuples] : s.plain_tables()) {
      for (const Tuple& t : tuples) facts[name].insert(names(t));
    }
    for (const auto& [base, tables] : s.indexed_tables()) {
      for (const auto& [pattern, tuples] : tables) {
        for (const Tuple& t : tuples) facts[pattern_key(base, pattern)].insert(names(t));
      }
    }
    return facts;
  };
  auto consts = [](const FiniteStructure& s) {
    std::map<std::string, std::string> out;
    for (const auto& [c, e] : s.constants()) out[c] = s.element(e);
    return out;
  };
  const std::set<std::string> ua(a.universe().begin(), a.universe().end());
  const std::set<std::string> ub(b.universe().begin(), b.universe().end());
  return ua == ub && a.signature() == b.signature() && nonempty(a) == nonempty(b) && consts(a) == consts(b);
}

// ---- JSON ---------------------------------------------------------------

FiniteStructure FiniteStructure::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("structure: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("structure: expected a JSON object");
  FiniteStructure s;
  try {
    if (!doc.contains("universe")) throw FormatError("structure: missing \"universe\"");
    for (const auto& e : doc.at("universe")) s.add_element(e.get<std::string>());
    if (doc.contains("signature")) s.declare(Signature::from_json(doc.at("signature").dump()));
    if (doc.contains("relations")) {
      for (const auto& [key, tuples] : doc.at("relations").items()) {
        if (!tuples.is_array()) throw FormatError("structure: relation " + key + " must map to a list of tuples");
        if (tuples.empty() && !s.sig_.declares(key) && !split_indexed_name(key)) {
          s.ensure_declared_plain(key, 1);  // an empty table declares a unary relation by default
        }
        for (const auto& t : tuples) {
          std::vector<std::string> names;
          if (t.is_string()) {
            names.push_back(t.get<std::string>());
          } else {
            for (const auto& e : t) names.push_back(e.get<std::string>());
          }
          s.add_fact(key, names);
        }
      }
    }
    if (doc.contains("constants")) {
      for (const auto& [name, e] : doc.at("constants").items()) s.set_constant(name, e.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("structure: ") + e.what());
  } catch (const SignatureError& e) {
    throw FormatError(std::string("structure: ") + e.what());
  }
  return s;
}

std::string FiniteStructure::to_json() const {
  json doc;
  doc["universe"] = universe_;
  json rel = json::object();
  auto names = [&](const Tuple& t) {
    json arr = json::array();
    for (std::size_t e : t) arr.push_back(universe_[e]);
    return arr;
  };
  for (const auto& [name, tuples] : plain_) {
    json arr = json::array();
    for (const Tuple& t : tuples) arr.push_back(names(t));
    rel[name] = arr;
  }
  for (const auto& [base, tables] : indexed_) {
    for (const auto& [pattern, tuples] : tables) {
      json arr = json::array();
      for (const Tuple& t : tuples) arr.push_back(names(t));
      rel[pattern_key(base, pattern)] = arr;
    }
  }
  doc["relations"] = rel;
  json consts = json::object();
  for (const auto& [name, e] : constants_) consts[name] = universe_[e];
  doc["constants"] = consts;
  doc["signature"] = json::parse(sig_.to_json());
  return doc.dump(2);
}

Valuation to_valuation(const FiniteStructure& a, const Assignment& asg) {
  Valuation val;
  for (const auto& [var, element] : asg) val.emplace(var, a.require(element));
  return val;
}

// ---- index sweeps -------------------------------------------------------

IndexSweep index_sweep(std::size_t index_arity, std::uint64_t horizon, std::size_t budget) {
  IndexSweep sweep;
  // Past the horizon only the equality pattern among the index values
  // matters, so index_arity representatives suffice.
  const std::uint64_t needed = horizon + index_arity;
  sweep.exhaustive = needed <= budget;
  const std::uint64_t width = sweep.exhaustive ? needed : budget;
  if (index_arity == 1) {
    for (std::uint64_t i = 0; i < width; ++i) sweep.points.push_back({i});
  } else {
    for (std::uint64_t s = 0; s + 1 < 2 * width; ++s) {
      for (std::uint64_t i = 0; i <= s; ++i) {
        const std::uint64_t j = s - i;
        if (i < width && j < width) sweep.points.push_back({i, j});
      }
    }
  }
  return sweep;
}

namespace {

void formula_literals(const Formula& f, std::uint64_t& h) {
  auto scan = [&](const Symbol& s) {
    for (const IndexExpr& e : s.indices) {
      if (!e.is_variable()) h = std::max(h, e.literal() + 1);
    }
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          scan(n.relation);
          for (const Term& t : n.args) scan(t.name);
        } else if constexpr (std::is_same_v<T, Junction>) {
          for (const Formula& m : n.members) formula_literals(m, h);
        } else if constexpr (std::is_same_v<T, Quantified>) {
          for (const Symbol& v : n.vars) scan(v);
          formula_literals(n.body, h);
        } else {
          formula_literals(n.body, h);
        }
      },
      f.node().value);
}

}  // namespace

std::uint64_t index_horizon(const FiniteStructure& a, const Formula& body) {
  std::uint64_t h = a.horizon();
  formula_literals(body, h);
  return h;
}

// ---- evaluation ---------------------------------------------------------

namespace {

enum class Mode { Satisfaction, WeakForcing };

class Evaluator {
 public:
  Evaluator(const FiniteStructure& a, std::size_t budget, Mode mode) : a_(a), budget_(budget), mode_(mode) {}

  TruthValue eval(const Formula& f, Valuation& val) {
    return std::visit([&](const auto& n) { return visit(f, n, val); }, f.node().value);
  }

 private:
  std::size_t term_value(const Term& t, const Valuation& val) const {
    if (!t.is_variable()) {
      if (auto c = a_.constant(t.name.base)) return *c;
      throw EvalError("constant " + t.name.base + " is not interpreted");
    }
    const std::string name = ground_variable(t.name);
    auto it = val.find(name);
    if (it == val.end()) throw EvalError("unbound variable " + name);
    return it->second;
  }

  static std::string ground_variable(const Symbol& s) {
    if (!s.ground()) throw EvalError("variable " + s.variable_text() + " depends on an unbound index variable");
    return s.variable_text();
  }

  TruthValue visit(const Formula&, const Atomic& n, Valuation& val) {
    Tuple tuple;
    tuple.reserve(n.args.size());
    for (const Term& t : n.args) tuple.push_back(term_value(t, val));
    return TruthValue::of(a_.holds(n.relation, tuple));
  }

  TruthValue visit(const Formula&, const Negation& n, Valuation& val) { return !eval(n.body, val); }

  TruthValue visit(const Formula&, const Junction& n, Valuation& val) {
    const bool is_and = n.op == Connective::And;
    std::optional<TruthValue> pending;
    for (const Formula& m : n.members) {
      TruthValue r = eval(m, val);
      if (!r.decided()) {
        if (!pending) pending = r;
      } else if (r.is_true() != is_and) {
        return r;  // a false conjunct or a true disjunct settles it
      }
    }
    return pending ? *pending : TruthValue::of(is_and);
  }

  // Fast path for Or of an atom and And of a negated atom: the tables list
  // every holding instance, so scanning them decides the family exactly.
  std::optional<TruthValue> literal_family(const Family& n, const Valuation& val) const {
    const Formula* core = &n.body;
    bool negated = false;
    if (const auto* neg = core->get_if<Negation>()) {
      core = &neg->body;
      negated = true;
    }
    const auto* at = core->get_if<Atomic>();
    if (!at || !at->relation.indexed()) return std::nullopt;
    if ((n.op == Connective::Or) == negated) return std::nullopt;
    for (const IndexExpr& e : at->relation.indices) {
      if (e.is_variable() &&
          std::find(n.index_vars.begin(), n.index_vars.end(), e.variable()) == n.index_vars.end()) {
        return std::nullopt;
      }
    }
    Tuple tuple;
    for (const Term& t : at->args) {
      if (t.is_variable() && !t.name.ground()) return std::nullopt;
      tuple.push_back(term_value(t, val));
    }
    if (!a_.signature().family(at->relation.base)) throw EvalError("unknown relation " + at->relation.relation_text());
    bool some_instance = false;
    auto tables = a_.indexed_tables().find(at->relation.base);
    if (tables != a_.indexed_tables().end()) {
      for (const auto& [pattern, tuples] : tables->second) {
        if (pattern.size() != at->relation.indices.size() || !tuples.contains(tuple)) continue;
        std::map<std::string, std::uint64_t> binding;
        bool ok = true;
        for (std::size_t k = 0; k < pattern.size() && ok; ++k) {
          const IndexExpr& e = at->relation.indices[k];
          if (!pattern[k]) continue;
          if (!e.is_variable()) {
            ok = e.literal() == *pattern[k];
          } else {
            auto [it, fresh] = binding.emplace(e.variable(), *pattern[k]);
            ok = fresh || it->second == *pattern[k];
          }
        }
        if (ok) {
          some_instance = true;
          break;
        }
      }
    }
    // Or: true iff some instance holds. And of the negation: the dual.
    return TruthValue::of(n.op == Connective::Or ? some_instance : !some_instance);
  }

  TruthValue visit(const Formula& f, const Family& n, Valuation& val) {
    if (auto quick = literal_family(n, val)) return *quick;
    const bool is_and = n.op == Connective::And;
    const IndexSweep sweep = index_sweep(n.index_vars.size(), index_horizon(a_, n.body), budget_);
    std::optional<TruthValue> pending;
    for (const auto& point : sweep.points) {
      std::map<std::string, std::uint64_t, std::less<>> values;
      for (std::size_t k = 0; k < n.index_vars.size(); ++k) values[n.index_vars[k]] = point[k];
      TruthValue r = eval(instantiate_indices(n.body, values), val);
      if (!r.decided()) {
        if (!pending) pending = r;
      } else if (r.is_true() != is_and) {
        return r;
      }
    }
    if (pending) return *pending;
    if (!sweep.exhaustive) return TruthValue::unknown(f);
    return TruthValue::of(is_and);
  }

  TruthValue visit(const Formula&, const Quantified& n, Valuation& val) {
    std::vector<std::string> names;
    for (const Symbol& v : n.vars) names.push_back(ground_variable(v));
    if (mode_ == Mode::WeakForcing) return force_quantifier(n, names, val);
    return range(a_, n.q, names, n.body, val, *this);
  }

  // Clauses (5') and (6): there is / for every elementary extension b of the
  // structure and tuple in b. The only elementary extension of a finite
  // structure is itself: any extension satisfies the same "exactly k
  // elements" sentence.
  TruthValue force_quantifier(const Quantified& n, const std::vector<std::string>& names, Valuation& val) {
    const std::vector<const FiniteStructure*> extensions{&a_};
    const bool is_exists = n.q == Quantifier::Exists;
    std::optional<TruthValue> pending;
    for (const FiniteStructure* b : extensions) {
      Evaluator inner(*b, budget_, mode_);
      TruthValue r = range(*b, n.q, names, n.body, val, inner);
      if (!r.decided()) {
        if (!pending) pending = r;
      } else if (r.is_true() == is_exists) {
        return r;
      }
    }
    return pending ? *pending : TruthValue::of(!is_exists);
  }

  static TruthValue range(const FiniteStructure& b, Quantifier q, const std::vector<std::string>& names,
                          const Formula& body, Valuation& val, Evaluator& ev) {
    const bool is_exists = q == Quantifier::Exists;
    std::vector<std::optional<std::size_t>> saved;
    for (const std::string& v : names) {
      auto it = val.find(v);
      saved.push_back(it == val.end() ? std::nullopt : std::optional<std::size_t>(it->second));
    }
    auto restore = [&] {
      for (std::size_t k = 0; k < names.size(); ++k) {
        if (saved[k]) {
          val[names[k]] = *saved[k];
        } else {
          val.erase(names[k]);
        }
      }
    };
    std::optional<TruthValue> pending;
    std::optional<TruthValue> settled;
    if (b.size() > 0) {
      std::vector<std::size_t> pick(names.size(), 0);
      for (;;) {
        for (std::size_t k = 0; k < names.size(); ++k) val[names[k]] = pick[k];
        TruthValue r = ev.eval(body, val);
        if (!r.decided()) {
          if (!pending) pending = r;
        } else if (r.is_true() == is_exists) {
          settled = r;
          break;
        }
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == b.size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
    restore();
    if (settled) return *settled;
    if (pending) return *pending;
    return TruthValue::of(!is_exists);
  }

  const FiniteStructure& a_;
  std::size_t budget_;
  Mode mode_;
};

TruthValue run(const FiniteStructure& a, const Formula& f, const Valuation& val, std::size_t budget, Mode mode) {
  for (const std::string& v : free_vars(f)) {
    if (!val.contains(v)) throw EvalError("unbound variable " + v);
  }
  for (const auto& [var, e] : val) {
    if (e >= a.size()) throw EvalError("assignment of " + var + " is outside the universe");
  }
  Valuation work = val;
  return Evaluator(a, budget, mode).eval(f, work);
}

}  // namespace

TruthValue satisfies(const FiniteStructure& a, const Formula& f, const Valuation& val, std::size_t budget) {
  return run(a, f, val, budget, Mode::Satisfaction);
}

TruthValue satisfies(const FiniteStructure& a, const Formula& f, const Assignment& asg, std::size_t budget) {
  return satisfies(a, f, to_valuation(a, asg), budget);
}

TruthValue weak_force_finite(const FiniteStructure& a, const Formula& f, const Valuation& val, std::size_t budget) {
  return run(a, f, val, budget, Mode::WeakForcing);
}

TruthValue weak_force_finite(const FiniteStructure& a, const Formula& f, const Assignment& asg, std::size_t budget) {
  return weak_force_finite(a, f, to_valuation(a, asg), budget);
}

Realization type_realized(const FiniteStructure& a, const std::vector<Symbol>& vars, const Formula& type,
                          const Valuation& val, std::size_t budget) {
  const bool is_conjunction =
      (type.kind() == Formula::Kind::Junction && type.as<Junction>().op == Connective::And) ||
      (type.kind() == Formula::Kind::Family && type.as<Family>().op == Connective::And);
  if (!is_conjunction) throw PreconditionError("a type must be a finite or infinite conjunction");
  Realization out;
  out.found = TruthValue::of(false);
  if (a.size() == 0) return out;
  Valuation work = val;
  std::vector<std::size_t> pick(vars.size(), 0);
  std::optional<TruthValue> pending;
  for (;;) {
    for (std::size_t k = 0; k < vars.size(); ++k) work[vars[k].variable_text()] = pick[k];
    TruthValue r = satisfies(a, type, work, budget);
    if (r.is_true()) {
      out.found = r;
      for (std::size_t e : pick) out.witness.push_back(a.element(e));
      return out;
    }
    if (!r.decided() && !pending) pending = r;
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == a.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  if (pending) out.found = *pending;
  return out;
}

Realization type_realized(const FiniteStructure& a, const std::vector<Symbol>& vars, const Formula& type,
                          const Assignment& asg, std::size_t budget) {
  return type_realized(a, vars, type, to_valuation(a, asg), budget);
}

// ---- substructures and the block game -----------------------------------

namespace {

std::vector<std::vector<std::uint64_t>> instance_indices(const FamilyDecl& fam, std::uint64_t horizon) {
  return index_sweep(fam.index_arity, horizon, static_cast<std::size_t>(-1)).points;
}

template <class Fn>
void for_each_tuple(std::size_t base, std::size_t length, Fn&& fn) {
  std::vector<std::size_t> pick(length, 0);
  if (base == 0 && length > 0) return;
  for (;;) {
    if (!fn(pick)) return;
    std::size_t k = 0;
    while (k < length && ++pick[k] == base) pick[k++] = 0;
    if (k == length) return;
  }
}

}  // namespace

bool is_substructure(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw SignatureError("structures have different signatures");
  std::vector<std::size_t> embed;
  for (const std::string& e : a.universe()) {
    auto pos = b.find(e);
    if (!pos) return false;
    embed.push_back(*pos);
  }
  for (const auto& [name, arity] : a.signature().relations()) {
    std::set<Tuple> mine;
    if (auto it = a.plain_tables().find(name); it != a.plain_tables().end()) {
      for (const Tuple& t : it->second) {
        Tuple m;
        for (std::size_t e : t) m.push_back(embed[e]);
        mine.insert(m);
      }
    }
    std::set<Tuple> theirs;
    if (auto it = b.plain_tables().find(name); it != b.plain_tables().end()) {
      for (const Tuple& t : it->second) {
        if (std::all_of(t.begin(), t.end(),
                        [&](std::size_t e) { return std::find(embed.begin(), embed.end(), e) != embed.end(); })) {
          theirs.insert(t);
        }
      }
    }
    if (mine != theirs) return false;
  }
  const std::uint64_t horizon = std::max(a.horizon(), b.horizon());
  for (const auto& [base, fam] : a.signature().families()) {
    for (const auto& idx : instance_indices(fam, horizon)) {
      Symbol rel(base);
      for (std::uint64_t i : idx) rel.indices.push_back(IndexExpr::lit(i));
      bool same = true;
      for_each_tuple(a.size(), fam.arity, [&](const std::vector<std::size_t>& t) {
        Tuple m;
        for (std::size_t e : t) m.push_back(embed[e]);
        same = a.holds(rel, t) == b.holds(rel, m);
        return same;
      });
      if (!same) return false;
    }
  }
  for (const auto& [name, e] : a.constants()) {
    auto theirs = b.constant(name);
    if (!theirs || *theirs != embed[e]) return false;
  }
  return true;
}

bool same_atomic_type(const FiniteStructure& a, const Tuple& xs, const FiniteStructure& b, const Tuple& ys) {
  if (xs.size() != ys.size()) return false;
  Tuple ta = xs;
  Tuple tb = ys;
  for (const auto& c : a.signature().constants()) {
    auto ca = a.constant(c);
    auto cb = b.constant(c);
    if (!ca || !cb) throw EvalError("constant " + c + " is not interpreted");
    ta.push_back(*ca);
    tb.push_back(*cb);
  }
  const std::size_t m = ta.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if ((ta[i] == ta[j]) != (tb[i] == tb[j])) return false;
    }
  }
  auto compare = [&](const Symbol& rel, std::size_t arity) {
    bool same = true;
    for_each_tuple(m, arity, [&](const std::vector<std::size_t>& pos) {
      Tuple u;
      Tuple v;
      for (std::size_t p : pos) {
        u.push_back(ta[p]);
        v.push_back(tb[p]);
      }
      same = a.holds(rel, u) == b.holds(rel, v);
      return same;
    });
    return same;
  };
  for (const auto& [name, arity] : a.signature().relations()) {
    if (!compare(Symbol(name), arity)) return false;
  }
  const std::uint64_t horizon = std::max(a.horizon(), b.horizon());
  for (const auto& [base, fam] : a.signature().families()) {
    for (const auto& idx : instance_indices(fam, horizon)) {
      Symbol rel(base);
      for (std::uint64_t i : idx) rel.indices.push_back(IndexExpr::lit(i));
      if (!compare(rel, fam.arity)) return false;
    }
  }
  return true;
}

namespace {

// Every finitary existential-level-n fact of (s, xs) holds of (t, ys). The
// spoiler's best block is the whole of s: a longer block adds nothing and
// any shorter block is a projection of it.
bool preserves(unsigned n, const FiniteStructure& s, const Tuple& xs, const FiniteStructure& t, const Tuple& ys) {
  if (n == 0) return same_atomic_type(s, xs, t, ys);
  Tuple spoiler = xs;
  for (std::size_t e = 0; e < s.size(); ++e) spoiler.push_back(e);
  bool answered = false;
  for_each_tuple(t.size(), s.size(), [&](const std::vector<std::size_t>& reply) {
    Tuple ext = ys;
    ext.insert(ext.end(), reply.begin(), reply.end());
    answered = preserves(n - 1, t, ext, s, spoiler);
    return !answered;
  });
  return answered;
}

}  // namespace

bool n_elementary(const FiniteStructure& a, const FiniteStructure& b, unsigned n) {
  if (!is_substructure(a, b)) throw PreconditionError("n_elementary: the first structure is not a substructure of the second");
  Tuple in_a;
  Tuple in_b;
  for (std::size_t e = 0; e < a.size(); ++e) {
    in_a.push_back(e);
    in_b.push_back(b.require(a.element(e)));
  }
  return preserves(n, a, in_a, b, in_b) && preserves(n, b, in_b, a, in_a);
}

}  // namespace inflogic
