#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "inflogic/borel.hpp"
#include "inflogic/error.hpp"
#include "inflogic/families.hpp"
#include "inflogic/finite_model.hpp"
#include "inflogic/force.hpp"
#include "inflogic/forcing.hpp"
#include "inflogic/formula.hpp"
#include "inflogic/library.hpp"
#include "inflogic/parse.hpp"
#include "inflogic/tags.hpp"

namespace inflogic::cli {

namespace {

// Human mode joins key=value pairs on one line and shows free text; records
// mode prints one key=value per line and drops the free text.
class Report {
 public:
  Report(std::ostream& out, bool records) : out_(out), records_(records) {}
  Report(const Report&) = delete;
  Report& operator=(const Report&) = delete;
  ~Report() { end_line(); }

  void kv(const std::string& key, const std::string& value) {
    if (records_) {
      out_ << key << "=" << value << "\n";
      return;
    }
    pending_ += (pending_.empty() ? "" : " ") + key + "=" + value;
  }
  // Records mode only.
  void rec(const std::string& key, const std::string& value) {
    if (records_) out_ << key << "=" << value << "\n";
  }
  // Human mode only.
  void text(const std::string& line) {
    if (records_) return;
    end_line();
    out_ << line << "\n";
  }
  void end_line() {
    if (!pending_.empty()) out_ << pending_ << "\n";
    pending_.clear();
  }
  bool records() const { return records_; }

 private:
  std::ostream& out_;
  bool records_;
  std::string pending_;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }
std::string tf(bool b) { return b ? "T" : "F"; }

int status_of(const TruthValue& t) { return t.decided() ? kDecided : kUnknown; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool file_exists(const std::string& path) { return static_cast<bool>(std::ifstream(path)); }

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trimmed(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trimmed(cur).empty() || !out.empty()) out.push_back(trimmed(cur));
  return out;
}

// Wraps a parser error with the file it came from.
template <class F>
auto with_source(const std::string& source, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw FormatError(source + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(source + ": " + e.what());
  }
}

// ---- shared options -----------------------------------------------------

struct FormulaInput {
  std::string formula;  // path, inline s-expression, or built-in name
  std::string builtin;
  std::string signature;  // optional signature file
};

struct LoadedFormula {
  Formula formula;
  Signature signature;
  std::string name;
};

void add_formula_options(CLI::App* sub, FormulaInput& in) {
  sub->add_option("-f,--formula", in.formula, "formula file, inline s-expression, or built-in name");
  sub->add_option("--builtin", in.builtin, "built-in formula: psi_blocks or psi_tree");
  sub->add_option("--signature", in.signature, "signature JSON file (default: inferred from the formula)");
}

std::optional<LoadedFormula> try_load_formula(const FormulaInput& in, const Signature* context) {
  std::string name = in.builtin;
  std::string text;
  std::string source;
  if (name.empty() && !in.formula.empty()) {
    if (file_exists(in.formula)) {
      text = read_file(in.formula);
      source = in.formula;
    } else if (trimmed(in.formula).starts_with("(")) {
      text = in.formula;
      source = "<formula>";
    } else if (find_builtin(in.formula) != nullptr) {
      name = in.formula;
    } else {
      throw FormatError("cannot read formula file " + in.formula);
    }
  }
  if (!name.empty()) {
    const NamedFormula* b = find_builtin(name);
    if (b == nullptr) throw PreconditionError("unknown built-in formula " + name);
    text = b->source;
    source = name;
  }
  if (text.empty()) return std::nullopt;

  Signature sig;
  if (!in.signature.empty()) {
    sig = with_source(in.signature, [&] { return Signature::from_json(read_file(in.signature)); });
  } else {
    sig = with_source(source, [&] { return infer_signature(text); });
    if (context != nullptr) sig = context->merged(sig);
  }
  Formula f = with_source(source, [&] { return parse_formula(text, sig); });
  return LoadedFormula{std::move(f), std::move(sig), source};
}

LoadedFormula load_formula(const FormulaInput& in, const Signature* context = nullptr) {
  auto f = try_load_formula(in, context);
  if (!f) throw PreconditionError("no formula given: use --formula or --builtin");
  return std::move(*f);
}

FiniteStructure load_structure(const std::string& path) {
  return with_source(path, [&] { return FiniteStructure::from_json(read_file(path)); });
}

Assignment parse_assignment(const std::vector<std::string>& items) {
  Assignment asg;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw PreconditionError("assignment " + item + " is not of the form VAR=ELEMENT");
    }
    asg[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return asg;
}

TheoryFace parse_face(const std::string& text, std::size_t size) {
  std::string body = trimmed(text);
  if (body.starts_with("{") && body.ends_with("}")) body = body.substr(1, body.size() - 2);
  TheoryFace s;
  s.member.assign(size, false);
  for (const std::string& part : split(body, ',')) {
    if (part.empty()) continue;
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw PreconditionError("face member " + part + " is not a basis position");
    }
    if (k >= size) throw PreconditionError("face member " + part + " is outside a basis of size " + std::to_string(size));
    s.member[k] = true;
  }
  return s;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? sep : "") + xs[k];
  return out;
}

void emit_truth(Report& r, const TruthValue& t) {
  r.kv("truth", to_string(t.value));
  if (!t.decided() && t.undecided) r.kv("undecided_at", render_formula(*t.undecided));
}

void emit_verdict(Report& r, const ForcingVerdict& v) {
  r.text(v.str());
  r.rec("truth", to_string(v.truth.value));
  r.rec("route", to_string(v.route));
  if (v.witness) r.rec(v.witness->kind, v.witness->value);
  if (v.satisfied) r.rec("satisfied", *v.satisfied ? "true" : "false");
}

// ---- the command line ---------------------------------------------------

struct Options {
  std::string format = "human";
  std::size_t budget = kDefaultBudget;

  FormulaInput fin;
  std::string structure;
  std::vector<std::string> assign;

  // negate
  bool nnf = false;
  // force
  std::vector<std::size_t> leaves;
  bool simplify = false;
  // eval
  std::string method = "satisfy";
  // weak-force
  std::string tree;
  std::string blocks;
  bool audit = false;
  // nelem
  std::string sub;
  std::string super;
  unsigned n = 1;
  // realize
  std::string vars;
  // tree
  std::string spec;
  bool weak_force = false;
  bool path = false;
  bool forces = false;
  bool satisfies = false;
  std::optional<std::size_t> depth;
  // block
  std::string config;
  bool alternate = false;
  std::size_t steps = 4;
  std::vector<std::size_t> truncate;
  // borel
  std::string basis;
  std::string code;
  std::string face;
  std::string xi;
  bool check = false;
};

using Handler = std::function<int(Options&, Report&)>;

int cmd_check(Options& o, Report& r) {
  LoadedFormula lf = load_formula(o.fin);
  r.kv("formula", render_formula(lf.formula));
  const std::set<std::string> vars = free_vars(lf.formula);
  std::vector<std::string> fv(vars.begin(), vars.end());
  r.kv("free_vars", "{" + join(fv, ",") + "}");
  const auto violations = wellformed(lf.formula, lf.signature);
  r.kv("wellformed", yes_no(violations.empty()));
  r.end_line();
  for (const Violation& v : violations) r.kv("violation", to_string(v.kind) + ": " + v.message);
  r.end_line();
  return violations.empty() ? kDecided : kError;
}

int cmd_classify(Options& o, Report& r) {
  LoadedFormula lf = load_formula(o.fin);
  const QuantClass c = classify(lf.formula);
  r.kv("forall_rank", std::to_string(c.forall_rank));
  r.kv("exists_rank", std::to_string(c.exists_rank));
  r.kv("sigma_rank", std::to_string(c.sigma_rank));
  r.kv("pi_rank", std::to_string(c.pi_rank));
  r.kv("finitary", yes_no(is_finitary(lf.formula)));
  r.kv("quantifier_free", yes_no(is_quantifier_free(lf.formula)));
  r.kv("depth", std::to_string(formula_depth(lf.formula)));
  r.kv("size", std::to_string(formula_size(lf.formula)));
  return kDecided;
}

int cmd_negate(Options& o, Report& r) {
  LoadedFormula lf = load_formula(o.fin);
  const Formula g = o.nnf ? nnf(formal_negate(lf.formula)) : formal_negate(lf.formula);
  r.text(render_formula(g));
  r.rec("formula", render_formula(g));
  return kDecided;
}

int cmd_fragment(Options& o, Report& r) {
  LoadedFormula lf = load_formula(o.fin);
  const auto members = fragment_closure(lf.formula);
  r.kv("size", std::to_string(members.size()));
  r.end_line();
  for (const Formula& m : members) {
    r.text(render_formula(m));
    r.rec("member", render_formula(m));
  }
  return kDecided;
}

int cmd_force(Options& o, Report& r) {
  LoadedFormula lf = load_formula(o.fin);
  const ElementaryFormula e = force(lf.formula);
  r.text(render_elementary(e));
  r.rec("elementary", render_elementary(e));
  r.kv("outer", render_domain(e.outer()));
  r.kv("inner", render_domain(e.inner()));
  r.end_line();
  if (!o.leaves.empty()) {
    auto leaves = elementary_leaves(e, o.leaves.at(0), o.leaves.at(1));
    if (o.simplify) leaves = simplify_leaves(std::move(leaves));
    r.kv("leaves", std::to_string(leaves.size()));
    r.end_line();
    for (const ElementaryLeaf& l : leaves) {
      r.text(l.alpha.str() + " " + l.beta.str() + " " + render_formula(l.theta));
      r.rec("leaf", l.alpha.str() + " " + l.beta.str() + " " + render_formula(l.theta));
    }
  }
  return kDecided;
}

int cmd_eval(Options& o, Report& r) {
  FiniteStructure a = load_structure(o.structure);
  LoadedFormula lf = load_formula(o.fin, &a.signature());
  a.declare(lf.signature);
  const Assignment asg = parse_assignment(o.assign);
  TruthValue t;
  if (o.method == "satisfy") {
    t = satisfies(a, lf.formula, asg, o.budget);
  } else if (o.method == "weak-finite") {
    t = weak_force_finite(a, lf.formula, asg, o.budget);
  } else {
    const ElementaryVerdict v = eval_elementary(a, force(lf.formula), asg, o.budget);
    t = v.truth;
    emit_truth(r, t);
    if (v.alpha) r.kv("alpha", v.alpha->str());
    if (!v.realized.empty()) r.kv("realized", join(v.realized, ","));
    return status_of(t);
  }
  emit_truth(r, t);
  return status_of(t);
}

ForcingQuery make_query(Options& o, const Formula* builtin_default) {
  const int given = int(!o.structure.empty()) + int(!o.tree.empty()) + int(!o.blocks.empty());
  if (given != 1) throw PreconditionError("give exactly one of --structure, --tree, --blocks");
  ForcingQuery q{FiniteStructure{}, truth(), parse_assignment(o.assign), o.budget};
  const Signature* context = nullptr;
  if (!o.structure.empty()) {
    q.structure = load_structure(o.structure);
    context = &std::get<FiniteStructure>(q.structure).signature();
  } else if (!o.tree.empty()) {
    q.structure = with_source(o.tree, [&] { return TreeSpec::from_json(read_file(o.tree)); });
  } else {
    q.structure = with_source(o.blocks, [&] { return BlockConfig::from_json(read_file(o.blocks)); });
  }
  Signature copy;
  if (context != nullptr) copy = *context;
  auto lf = try_load_formula(o.fin, context != nullptr ? &copy : nullptr);
  if (lf) {
    q.formula = lf->formula;
  } else if (builtin_default != nullptr && o.structure.empty()) {
    q.formula = *builtin_default;
  } else {
    throw PreconditionError("no formula given: use --formula or --builtin");
  }
  return q;
}

int cmd_weak_force(Options& o, Report& r) {
  std::optional<Formula> fallback;
  if (!o.tree.empty()) fallback = psi_tree();
  if (!o.blocks.empty()) fallback = psi_blocks();
  const ForcingQuery q = make_query(o, fallback ? &*fallback : nullptr);
  if (!o.audit) {
    const ForcingVerdict v = weak_forces(q);
    emit_verdict(r, v);
    return status_of(v.truth);
  }
  const AuditReport a = audit(q);
  for (const ForcingVerdict& v : a.verdicts) {
    r.text(v.str());
    r.rec("verdict", v.str());
  }
  r.kv("decided", std::to_string(a.decided));
  r.kv("agree", yes_no(a.agree));
  if (!a.agree) return kError;
  return a.decided > 0 ? kDecided : kUnknown;
}

int cmd_nelem(Options& o, Report& r) {
  const FiniteStructure a = load_structure(o.sub);
  const FiniteStructure b = load_structure(o.super);
  const bool sub = is_substructure(a, b);
  r.kv("substructure", yes_no(sub));
  if (sub) r.kv("n_elementary_" + std::to_string(o.n), yes_no(n_elementary(a, b, o.n)));
  return kDecided;
}

int cmd_realize(Options& o, Report& r) {
  FiniteStructure a = load_structure(o.structure);
  LoadedFormula lf = load_formula(o.fin, &a.signature());
  a.declare(lf.signature);
  std::vector<Symbol> vars;
  for (const std::string& v : split(o.vars, ',')) {
    if (v.empty()) throw PreconditionError("empty variable name in --vars");
    vars.emplace_back(v);
  }
  // A single formula is read as a one-member type.
  const bool is_type = lf.formula.get_if<Junction>() != nullptr || lf.formula.get_if<Family>() != nullptr;
  const Formula type = is_type ? lf.formula : conj({lf.formula});
  const Realization res = type_realized(a, vars, type, parse_assignment(o.assign), o.budget);
  r.kv("found", to_string(res.found.value));
  if (res.found.is_true()) r.kv("witness", join(res.witness, ","));
  return status_of(res.found);
}

int cmd_tree(Options& o, Report& r) {
  const TreeSpec t = with_source(o.spec, [&] { return TreeSpec::from_json(read_file(o.spec)); });
  if (o.weak_force) {
    const ForcingVerdict v = weak_forces(ForcingQuery{t, psi_tree(), {}, o.budget});
    emit_verdict(r, v);
    return status_of(v.truth);
  }
  if (o.depth) {
    r.text(truncate_to_finite(build_tree_structure(t), *o.depth).to_json());
    r.rec("structure", nlohmann::json::parse(truncate_to_finite(build_tree_structure(t), *o.depth).to_json()).dump());
    return kDecided;
  }
  const bool all = !o.path && !o.forces && !o.satisfies;
  if (all) r.kv("kind", t.is_finite() ? "finite" : "regular");
  if (all || o.path) {
    const auto p = infinite_path(t);
    r.kv("infinite_path", yes_no(tree_has_infinite_path(t)));
    if (p) r.kv("certificate", p->str());
  }
  if (all || o.forces) r.kv("forces_psi", yes_no(tree_forces_psi(t)));
  if (all || o.satisfies) r.kv("satisfies_psi", yes_no(tree_satisfies_psi(t)));
  return kDecided;
}

int cmd_block(Options& o, Report& r) {
  BlockConfig c = with_source(o.config, [&] { return BlockConfig::from_json(read_file(o.config)); });
  if (!o.truncate.empty()) {
    const FiniteStructure s = truncate_blocks(c, o.truncate.at(0), o.truncate.at(1));
    r.text(s.to_json());
    r.rec("structure", nlohmann::json::parse(s.to_json()).dump());
    return kDecided;
  }
  if (o.weak_force) {
    const ForcingVerdict v = weak_forces(ForcingQuery{c, psi_blocks(), {}, o.budget});
    emit_verdict(r, v);
    return status_of(v.truth);
  }
  if (!o.alternate) {
    r.kv("config", c.str());
    r.kv("satisfies_psi", yes_no(block_satisfies_psi(c)));
    if (c.total_blocks().is_omega()) r.kv("forces_psi", yes_no(block_forces_psi(c)));
    return kDecided;
  }
  std::vector<std::string> column;
  r.text("step satisfies forces config");
  for (std::size_t k = 0;; ++k) {
    const bool sat = block_satisfies_psi(c);
    const std::string forced = c.total_blocks().is_omega() ? tf(block_forces_psi(c)) : "-";
    column.push_back(tf(sat));
    r.text(std::to_string(k) + " " + tf(sat) + " " + forced + " " + c.str());
    const std::string idx = "[" + std::to_string(k) + "]";
    r.rec("satisfies" + idx, tf(sat));
    r.rec("forces" + idx, forced);
    r.rec("config" + idx, c.str());
    if (k == o.steps) break;
    c = alternate_extension(c);
  }
  r.text("truth column " + join(column, ","));
  r.rec("truth_column", join(column, ","));
  return kDecided;
}

int cmd_borel(Options& o, Report& r) {
  const std::string basis_text = read_file(o.basis);
  Signature sig;
  if (!o.fin.signature.empty()) {
    sig = with_source(o.fin.signature, [&] { return Signature::from_json(read_file(o.fin.signature)); });
  } else {
    std::vector<std::string> sources;
    try {
      for (const auto& s : nlohmann::json::parse(basis_text)) sources.push_back(s.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(o.basis + ": basis: " + e.what());
    }
    sig = with_source(o.basis, [&] { return infer_signature("(and " + join(sources, " ") + ")"); });
  }
  const SentenceBasis d = with_source(o.basis, [&] { return SentenceBasis::from_json(basis_text, sig); });

  if (!o.xi.empty()) {
    const Formula xi = xi_formula(d, parse_face(o.xi, d.size()));
    r.text(render_formula(xi));
    r.rec("xi", render_formula(xi));
    return kDecided;
  }
  if (o.code.empty()) throw PreconditionError("borel needs --code unless --xi is given");
  const BorelCode c = with_source(o.code, [&] { return BorelCode::from_json(read_file(o.code)); });
  const Formula compiled = borel_to_formula(c, d);
  r.kv("formula", render_formula(compiled));
  r.kv("depth", std::to_string(c.depth()));
  r.end_line();
  if (!o.face.empty()) {
    const TheoryFace s = parse_face(o.face, d.size());
    r.kv("face", s.str());
    r.kv("member", yes_no(borel_membership(c, s)));
    r.kv("formula_true", yes_no(evaluate_over_face(compiled, d, s)));
  }
  if (o.check) {
    if (d.size() >= 63) throw PreconditionError("basis too large to enumerate its faces");
    bool agree = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d.size()); ++mask) {
      const TheoryFace s = TheoryFace::from_mask(d.size(), mask);
      const bool m = borel_membership(c, s);
      const bool e = evaluate_over_face(compiled, d, s);
      agree = agree && m == e;
      r.text(s.str() + " member=" + yes_no(m) + " formula=" + yes_no(e));
      r.rec("face" + s.str(), yes_no(m) + "," + yes_no(e));
    }
    r.kv("agree", yes_no(agree));
    return agree ? kDecided : kError;
  }
  return kDecided;
}

int cmd_demo(Options& o, Report& r) {
  r.text("Block structures: psi = every Q-root has an R-child outside every P_n.");
  r.text("Starting from countably many standard blocks, each step makes psi flip.");
  BlockConfig c = BlockConfig::the_standard_model();
  std::vector<std::string> column;
  for (std::size_t k = 0;; ++k) {
    const bool sat = block_satisfies_psi(c);
    const bool forced = block_forces_psi(c);
    column.push_back(tf(sat));
    r.text("  step " + std::to_string(k) + ": satisfies=" + tf(sat) + " forces=" + tf(forced) + "  " + c.str());
    r.rec("block_step[" + std::to_string(k) + "]", tf(sat) + "," + tf(forced));
    if (k == o.steps) break;
    c = alternate_extension(c);
  }
  r.text("  truth column " + join(column, ",") + "; forced throughout");
  r.rec("block_truth_column", join(column, ","));

  r.text("");
  r.text("Trees: psi_tree = some x satisfies, for every i, some R_{i,j}.");
  const std::vector<std::pair<std::string, TreeSpec>> trees = {
      {"finite {[],[0],[0,1]}", TreeSpec{FiniteTree{{{}, {0}, {0, 1}}}}},
      {"self-loop r-0->r", TreeSpec{RegularTree{{"r"}, "r", {{"r", 0, "r"}}}}},
      {"stem r-1->s, s-0->s", TreeSpec{RegularTree{{"r", "s"}, "r", {{"r", 1, "s"}, {"s", 0, "s"}}}}},
      {"no cycle r-0->s", TreeSpec{RegularTree{{"r", "s"}, "r", {{"r", 0, "s"}}}}},
  };
  for (const auto& [label, t] : trees) {
    const ForcingVerdict v = weak_forces(ForcingQuery{t, psi_tree(), {}, o.budget});
    r.text("  " + label + ": forces=" + tf(v.truth.is_true()) + " satisfies=" + tf(tree_satisfies_psi(t)) + "  " +
           v.str());
    r.rec("tree[" + label + "]", tf(v.truth.is_true()) + "," + tf(tree_satisfies_psi(t)));
  }
  r.text("  forcing follows infinite paths while plain truth fails on every tree");
  return kDecided;
}

// ---- coverage -----------------------------------------------------------

const std::vector<CoverageEntry> kCoverage = {
    {"formula-core", "parse_formula", "check", ""},
    {"formula-core", "render_formula", "check", ""},
    {"formula-core", "free_vars", "check", ""},
    {"formula-core", "wellformed", "check", ""},
    {"formula-core", "formal_negate", "negate", ""},
    {"formula-core", "classify", "classify", ""},
    {"formula-core", "fragment_closure", "fragment", ""},
    {"finite-model", "satisfies", "eval", "--method satisfy"},
    {"finite-model", "weak_force_finite", "eval", "--method weak-finite"},
    {"finite-model", "is_substructure", "nelem", ""},
    {"finite-model", "n_elementary", "nelem", "--n"},
    {"finite-model", "type_realized", "realize", ""},
    {"force-transform", "force", "force", ""},
    {"force-transform", "elementary_leaves", "force", "--leaves"},
    {"force-transform", "eval_elementary", "eval", "--method elementary"},
    {"family-oracles", "build_tree_structure", "tree", "--truncate"},
    {"family-oracles", "truncate_to_finite", "tree", "--truncate"},
    {"family-oracles", "tree_has_infinite_path", "tree", "--path"},
    {"family-oracles", "tree_forces_psi", "tree", "--forces"},
    {"family-oracles", "tree_satisfies_psi", "tree", "--satisfies"},
    {"family-oracles", "block_satisfies_psi", "block", ""},
    {"family-oracles", "block_forces_psi", "block", ""},
    {"family-oracles", "alternate_extension", "block", "--alternate"},
    {"borel-compiler", "xi_formula", "borel", "--xi"},
    {"borel-compiler", "borel_to_formula", "borel", "--code"},
    {"borel-compiler", "borel_membership", "borel", "--face"},
    {"forcing-eval", "weak_forces", "weak-force", ""},
    {"forcing-eval", "audit", "weak-force", "--audit"},
    {"cli", "run", "demo", ""},
};

// ---- parser construction ------------------------------------------------

struct Cli {
  CLI::App app{"Infinitary logic toolkit: formulas, finite models, forcing.", "inflogic"};
  Options o;
  std::map<std::string, Handler> handlers;

  Cli() {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "output format: human (default) or records (key=value per line)")
        ->check(CLI::IsMember({"human", "records"}));
    app.add_option("--budget", o.budget, "index values tried per index variable (default 64 or $INFLOGIC_BUDGET)")
        ->check(CLI::PositiveNumber);

    auto* s = add("check", "parse and check a formula against its signature", cmd_check);
    add_formula_options(s, o.fin);

    s = add("classify", "quantifier and connective ranks", cmd_classify);
    add_formula_options(s, o.fin);

    s = add("negate", "formal negation", cmd_negate);
    add_formula_options(s, o.fin);
    s->add_flag("--nnf", o.nnf, "push the negation down to the atoms");

    s = add("fragment", "closure under subformulas and negation", cmd_fragment);
    add_formula_options(s, o.fin);

    s = add("force", "print the elementary formula forcing the input", cmd_force);
    add_formula_options(s, o.fin);
    s->add_option("--leaves", o.leaves, "sample OUTER INNER leaves")->expected(2);
    s->add_flag("--simplify", o.simplify, "drop trivially true and repeated leaves");

    s = add("eval", "truth in a finite structure", cmd_eval);
    add_formula_options(s, o.fin);
    s->add_option("-s,--structure", o.structure, "structure JSON file")->required();
    s->add_option("-a,--assign", o.assign, "VAR=ELEMENT, repeatable");
    s->add_option("--method", o.method, "satisfy (default), weak-finite, or elementary")
        ->check(CLI::IsMember({"satisfy", "weak-finite", "elementary"}));

    s = add("weak-force", "weak forcing verdict with route and witness", cmd_weak_force);
    add_formula_options(s, o.fin);
    auto* st = s->add_option("-s,--structure", o.structure, "finite structure JSON file");
    auto* tr = s->add_option("--tree", o.tree, "tree spec JSON file (formula defaults to psi_tree)");
    auto* bl = s->add_option("--blocks", o.blocks, "block config JSON file (formula defaults to psi_blocks)");
    st->excludes(tr)->excludes(bl);
    tr->excludes(bl);
    s->add_option("-a,--assign", o.assign, "VAR=ELEMENT, repeatable");
    s->add_flag("--audit", o.audit, "run every applicable route and compare");

    s = add("nelem", "substructure and n-elementary substructure checks", cmd_nelem);
    s->add_option("--sub", o.sub, "the smaller structure")->required();
    s->add_option("--super", o.super, "the larger structure")->required();
    s->add_option("-n,--n", o.n, "alternation level (default 1)");

    s = add("realize", "find a tuple realizing a type", cmd_realize);
    add_formula_options(s, o.fin);
    s->add_option("-s,--structure", o.structure, "structure JSON file")->required();
    s->add_option("--vars", o.vars, "comma-separated free variables of the type")->required();
    s->add_option("-a,--assign", o.assign, "VAR=ELEMENT for parameters, repeatable");

    s = add("tree", "tree structures and their infinite paths", cmd_tree);
    s->add_option("--spec", o.spec, "tree spec JSON file")->required();
    s->add_flag("--weak-force", o.weak_force, "weak forcing verdict for psi_tree");
    s->add_flag("--path", o.path, "infinite path and its certificate");
    s->add_flag("--forces", o.forces, "whether psi_tree is weak-forced");
    s->add_flag("--satisfies", o.satisfies, "whether psi_tree is true");
    s->add_option("--truncate", o.depth, "print the elements up to DEPTH as a structure");

    s = add("block", "block structures and the alternation", cmd_block);
    s->add_option("--config", o.config, "block config JSON file")->required();
    s->add_flag("--alternate", o.alternate, "iterate the alternating extension");
    s->add_option("--steps", o.steps, "number of alternation steps (default 4)");
    s->add_flag("--weak-force", o.weak_force, "weak forcing verdict for psi_blocks");
    s->add_option("--truncate", o.truncate, "CHILDREN OMEGA_AS: print a finite shadow")->expected(2);

    s = add("borel", "compile Borel codes to sentences and check them", cmd_borel);
    s->add_option("--basis", o.basis, "basis JSON file: list of sentences")->required();
    s->add_option("--code", o.code, "Borel code JSON file");
    s->add_option("--signature", o.fin.signature, "signature JSON file (default: inferred)");
    s->add_option("--face", o.face, "face as member positions, e.g. {0,2}");
    s->add_option("--xi", o.xi, "print the sentence pinning this face");
    s->add_flag("--check", o.check, "compare membership with the compiled sentence on every face");

    s = add("demo", "replay the block alternation and the tree contrast", cmd_demo);
    s->add_option("--steps", o.steps, "alternation steps (default 4)");
  }

  CLI::App* add(const std::string& name, const std::string& help, Handler h) {
    handlers[name] = std::move(h);
    return app.add_subcommand(name, help);
  }
};

std::optional<std::size_t> env_budget() {
  const char* raw = std::getenv("INFLOGIC_BUDGET");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used == std::string(raw).size() && v > 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw PreconditionError(std::string("INFLOGIC_BUDGET must be a positive integer, got ") + raw);
}

}  // namespace

const std::vector<CoverageEntry>& coverage_table() { return kCoverage; }

std::vector<std::string> subcommand_names() {
  Cli cli;
  std::vector<std::string> out;
  for (const CLI::App* s : cli.app.get_subcommands([](const CLI::App*) { return true; })) out.push_back(s->get_name());
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto cli = std::make_unique<Cli>();
  try {
    if (auto b = env_budget()) cli->o.budget = *b;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    cli->app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto chosen = cli->app.get_subcommands();
    out << (chosen.empty() ? cli->app.help() : chosen.front()->help());
    return kDecided;
  } catch (const CLI::CallForAllHelp&) {
    out << cli->app.help("", CLI::AppFormatMode::All);
    return kDecided;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto chosen = cli->app.get_subcommands();
    err << (chosen.empty() ? cli->app.help() : chosen.front()->help());
    return kError;
  }

  const std::string name = cli->app.get_subcommands().front()->get_name();
  Report report(out, cli->o.format == "records");
  try {
    return cli->handlers.at(name)(cli->o, report);
  } catch (const Error& e) {
    report.end_line();
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    report.end_line();
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace inflogic::cli
