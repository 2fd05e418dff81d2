#include "inflogic/families.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>

#include "inflogic/error.hpp"

namespace inflogic {

using nlohmann::json;

// ---- Count --------------------------------------------------------------

std::uint64_t Count::value() const {
  if (omega_) throw PreconditionError("count is omega");
  return n_;
}

std::string Count::str() const { return omega_ ? "omega" : std::to_string(n_); }

Count operator+(Count a, Count b) {
  if (a.omega_ || b.omega_) return Count::omega();
  return Count::finite(a.n_ + b.n_);
}

namespace {

Count count_from_json(const json& j, const char* what) {
  if (j.is_string() && j.get<std::string>() == "omega") return Count::omega();
  if (j.is_number_unsigned()) return Count::finite(j.get<std::uint64_t>());
  throw FormatError(std::string("block config: ") + what + " must be \"omega\" or a natural number");
}

json count_to_json(Count c) {
  if (c.is_omega()) return "omega";
  return c.value();
}

}  // namespace

// ---- blocks -------------------------------------------------------------

Count BlockConfig::nonstandard_blocks() const {
  Count n = Count::finite(0);
  for (const auto& d : nonstandard) n = n + d.blocks;
  return n;
}

Count BlockConfig::total_blocks() const { return standard + nonstandard_blocks(); }

void BlockConfig::validate() const {
  for (const auto& d : nonstandard) {
    if (d.extra.is_zero()) throw PreconditionError("a non-standard block needs at least one non-standard element");
    if (d.blocks.is_zero()) throw PreconditionError("a non-standard descriptor must cover at least one block");
  }
  if (total_blocks().is_zero()) throw PreconditionError("a block structure needs at least one block");
}

BlockConfig BlockConfig::normalized() const {
  std::vector<NonstandardBlocks> merged;
  for (const auto& d : nonstandard) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.extra == d.extra; });
    if (it == merged.end()) {
      merged.push_back(d);
    } else {
      it->blocks = it->blocks + d.blocks;
    }
  }
  std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) {
    if (x.extra.is_omega() != y.extra.is_omega()) return y.extra.is_omega();
    return !x.extra.is_omega() && x.extra.value() < y.extra.value();
  });
  return {standard, std::move(merged)};
}

bool operator==(const BlockConfig& a, const BlockConfig& b) {
  const BlockConfig x = a.normalized();
  const BlockConfig y = b.normalized();
  return x.standard == y.standard && x.nonstandard == y.nonstandard;
}

BlockConfig BlockConfig::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("block config: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("block config: expected a JSON object");
  BlockConfig c;
  c.standard = doc.contains("standard") ? count_from_json(doc.at("standard"), "\"standard\"") : Count::finite(0);
  if (doc.contains("nonstandard")) {
    if (!doc.at("nonstandard").is_array()) throw FormatError("block config: \"nonstandard\" must be a list");
    for (const auto& d : doc.at("nonstandard")) {
      if (!d.is_object() || !d.contains("extra")) throw FormatError("block config: descriptor needs \"extra\"");
      NonstandardBlocks nb;
      nb.extra = count_from_json(d.at("extra"), "\"extra\"");
      nb.blocks = d.contains("blocks") ? count_from_json(d.at("blocks"), "\"blocks\"") : Count::finite(1);
      c.nonstandard.push_back(nb);
    }
  }
  try {
    c.validate();
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("block config: ") + e.what());
  }
  return c.normalized();
}

std::string BlockConfig::to_json() const {
  json doc;
  doc["standard"] = count_to_json(standard);
  doc["nonstandard"] = json::array();
  for (const auto& d : normalized().nonstandard) {
    doc["nonstandard"].push_back({{"extra", count_to_json(d.extra)}, {"blocks", count_to_json(d.blocks)}});
  }
  return doc.dump();
}

std::string BlockConfig::str() const {
  std::string out = "standard=" + standard.str() + " nonstandard=[";
  const BlockConfig n = normalized();
  for (std::size_t k = 0; k < n.nonstandard.size(); ++k) {
    if (k) out += " ";
    out += n.nonstandard[k].blocks.str() + "(+" + n.nonstandard[k].extra.str() + ")";
  }
  return out + "]";
}

bool block_satisfies_psi(const BlockConfig& c) {
  c.validate();
  return c.standard.is_zero();
}

bool block_forces_psi(const BlockConfig& c) {
  c.validate();
  if (!c.total_blocks().is_omega()) {
    throw PreconditionError("forcing is only settled for configurations with infinitely many blocks");
  }
  return true;
}

BlockConfig alternate_extension(const BlockConfig& c) {
  c.validate();
  BlockConfig out = c;
  if (block_satisfies_psi(c)) {
    out.standard = Count::finite(1);
  } else {
    out.nonstandard.push_back({Count::finite(1), c.standard});
    out.standard = Count::finite(0);
  }
  return out.normalized();
}

Signature block_signature() {
  Signature sig;
  sig.add_relation("Q", 1).add_relation("R", 2).add_family("P", 1, 1);
  return sig;
}

FiniteStructure truncate_blocks(const BlockConfig& c, std::size_t children, std::size_t omega_as) {
  c.validate();
  auto cut = [&](Count n) { return n.is_omega() ? omega_as : static_cast<std::size_t>(n.value()); };
  FiniteStructure s;
  s.declare(block_signature());
  std::size_t block = 0;
  auto add_block = [&](std::size_t extra) {
    const std::string id = std::to_string(block++);
    const std::size_t root = s.add_element("a" + id);
    s.add_fact("Q", Tuple{root});
    for (std::size_t n = 0; n < children; ++n) {
      const std::size_t b = s.add_element("b" + id + "_" + std::to_string(n));
      s.add_fact("R", Tuple{root, b});
      s.add_indexed_fact("P", {n}, Tuple{b});
    }
    for (std::size_t m = 0; m < extra; ++m) {
      const std::size_t b = s.add_element("s" + id + "_" + std::to_string(m));
      s.add_fact("R", Tuple{root, b});
    }
  };
  for (std::size_t k = 0; k < cut(c.standard); ++k) add_block(0);
  for (const auto& d : c.normalized().nonstandard) {
    for (std::size_t k = 0; k < cut(d.blocks); ++k) add_block(cut(d.extra));
  }
  return s;
}

// ---- trees --------------------------------------------------------------

namespace {

const RegularTree& regular(const TreeSpec& t) { return std::get<RegularTree>(t.value); }

std::map<std::string, std::vector<std::pair<std::uint64_t, std::string>>> adjacency(const RegularTree& g) {
  std::map<std::string, std::vector<std::pair<std::uint64_t, std::string>>> adj;
  for (const std::string& n : g.nodes) adj[n];
  for (const TreeEdge& e : g.edges) adj[e.from].emplace_back(e.label, e.to);
  for (auto& [n, out] : adj) std::sort(out.begin(), out.end());
  return adj;
}

}  // namespace

void TreeSpec::validate() const {
  if (const auto* f = std::get_if<FiniteTree>(&value)) {
    if (!f->nodes.contains(Sequence{})) throw PreconditionError("a finite tree must contain the root []");
    for (const Sequence& s : f->nodes) {
      if (!s.empty() && !f->nodes.contains(Sequence(s.begin(), s.end() - 1))) {
        throw PreconditionError("finite tree is not prefix closed at " + sequence_name(s));
      }
    }
    return;
  }
  const RegularTree& g = regular(*this);
  std::set<std::string> names;
  for (const std::string& n : g.nodes) {
    if (!names.insert(n).second) throw PreconditionError("regular tree lists node '" + n + "' twice");
  }
  if (!names.contains(g.root)) throw PreconditionError("regular tree root '" + g.root + "' is not a node");
  std::set<std::pair<std::string, std::uint64_t>> labels;
  for (const TreeEdge& e : g.edges) {
    if (!names.contains(e.from) || !names.contains(e.to)) {
      throw PreconditionError("regular tree edge " + e.from + " -> " + e.to + " names an unknown node");
    }
    if (!labels.emplace(e.from, e.label).second) {
      throw PreconditionError("regular tree node '" + e.from + "' has two edges labelled " + std::to_string(e.label));
    }
  }
}

TreeSpec TreeSpec::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("tree spec: ") + e.what());
  }
  TreeSpec t;
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "finite") {
      FiniteTree f;
      for (const auto& s : doc.at("nodes")) f.nodes.insert(s.get<Sequence>());
      t.value = std::move(f);
    } else if (kind == "regular") {
      RegularTree g;
      g.nodes = doc.at("nodes").get<std::vector<std::string>>();
      g.root = doc.at("root").get<std::string>();
      if (doc.contains("edges")) {
        for (const auto& e : doc.at("edges")) {
          if (!e.is_array() || e.size() != 3) throw FormatError("tree spec: an edge is [from, label, to]");
          g.edges.push_back({e[0].get<std::string>(), e[1].get<std::uint64_t>(), e[2].get<std::string>()});
        }
      }
      t.value = std::move(g);
    } else {
      throw FormatError("tree spec: \"kind\" must be \"finite\" or \"regular\"");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("tree spec: ") + e.what());
  }
  try {
    t.validate();
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("tree spec: ") + e.what());
  }
  return t;
}

std::string TreeSpec::to_json() const {
  json doc;
  if (const auto* f = std::get_if<FiniteTree>(&value)) {
    doc["kind"] = "finite";
    doc["nodes"] = json::array();
    for (const Sequence& s : f->nodes) doc["nodes"].push_back(s);
  } else {
    const RegularTree& g = regular(*this);
    doc["kind"] = "regular";
    doc["nodes"] = g.nodes;
    doc["root"] = g.root;
    doc["edges"] = json::array();
    for (const TreeEdge& e : g.edges) doc["edges"].push_back(json::array({e.from, e.label, e.to}));
  }
  return doc.dump();
}

TreeStructure::TreeStructure(TreeSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

TreeStructure build_tree_structure(const TreeSpec& t) { return TreeStructure(t); }

bool TreeStructure::contains(const Sequence& s) const {
  if (const auto* f = std::get_if<FiniteTree>(&spec_.value)) return f->nodes.contains(s);
  const RegularTree& g = regular(spec_);
  std::string at = g.root;
  for (std::uint64_t label : s) {
    auto e = std::find_if(g.edges.begin(), g.edges.end(),
                          [&](const TreeEdge& x) { return x.from == at && x.label == label; });
    if (e == g.edges.end()) return false;
    at = e->to;
  }
  return true;
}

bool TreeStructure::holds(std::uint64_t i, std::uint64_t j, const Sequence& s) const {
  return i < s.size() && s[i] == j;
}

std::vector<Sequence> TreeStructure::elements_up_to(std::size_t depth) const {
  std::vector<Sequence> out;
  if (const auto* f = std::get_if<FiniteTree>(&spec_.value)) {
    for (const Sequence& s : f->nodes) {
      if (s.size() <= depth) out.push_back(s);
    }
  } else {
    const auto adj = adjacency(regular(spec_));
    std::vector<std::pair<Sequence, std::string>> frontier{{Sequence{}, regular(spec_).root}};
    while (!frontier.empty()) {
      std::vector<std::pair<Sequence, std::string>> next;
      for (auto& [s, node] : frontier) {
        out.push_back(s);
        if (s.size() == depth) continue;
        for (const auto& [label, to] : adj.at(node)) {
          Sequence t = s;
          t.push_back(label);
          next.emplace_back(std::move(t), to);
        }
      }
      frontier = std::move(next);
    }
  }
  std::sort(out.begin(), out.end(), [](const Sequence& a, const Sequence& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::string sequence_name(const Sequence& s) {
  std::string out = "[";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
  return out + "]";
}

Signature tree_signature() {
  Signature sig;
  sig.add_family("R", 2, 1);
  return sig;
}

FiniteStructure truncate_to_finite(const TreeStructure& h, std::size_t depth) {
  FiniteStructure s;
  s.declare(tree_signature());
  for (const Sequence& seq : h.elements_up_to(depth)) {
    const std::size_t e = s.add_element(sequence_name(seq));
    for (std::uint64_t i = 0; i < seq.size(); ++i) s.add_indexed_fact("R", {i, seq[i]}, Tuple{e});
  }
  return s;
}

std::string PathCertificate::str() const {
  std::string out = "[";
  if (!stem.empty()) {
    out += "stem";
    for (const std::string& n : stem) out += " " + n;
    out += " ";
  }
  out += "cycle";
  for (const std::string& n : cycle) out += " " + n;
  return out + "]";
}

std::optional<PathCertificate> infinite_path(const TreeSpec& t) {
  t.validate();
  if (t.is_finite()) return std::nullopt;
  const RegularTree& g = regular(t);
  const auto adj = adjacency(g);
  // Depth-first search for a back edge; the DFS stack is the walk so far.
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::vector<std::uint64_t> labels;  // labels[k] leads from stack[k] to stack[k + 1]
  std::optional<PathCertificate> found;
  std::function<void(const std::string&)> visit = [&](const std::string& node) {
    state[node] = 1;
    stack.push_back(node);
    for (const auto& [label, to] : adj.at(node)) {
      if (found) break;
      if (state[to] == 1) {
        const auto start = static_cast<std::size_t>(std::find(stack.begin(), stack.end(), to) - stack.begin());
        PathCertificate c;
        c.stem.assign(stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(start));
        c.stem_labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(start));
        c.cycle.assign(stack.begin() + static_cast<std::ptrdiff_t>(start), stack.end());
        c.cycle_labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(start), labels.end());
        c.cycle_labels.push_back(label);
        found = std::move(c);
      } else if (state[to] == 0) {
        labels.push_back(label);
        visit(to);
        labels.pop_back();
      }
    }
    stack.pop_back();
    state[node] = 2;
  };
  visit(g.root);
  return found;
}

bool tree_has_infinite_path(const TreeSpec& t) { return infinite_path(t).has_value(); }

bool tree_forces_psi(const TreeSpec& t) { return tree_has_infinite_path(t); }

bool tree_satisfies_psi(const TreeSpec& t) {
  t.validate();
  return false;
}

}  // namespace inflogic
