#include "inflogic/tags.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "inflogic/error.hpp"

namespace inflogic {

// ---- tags ---------------------------------------------------------------

std::strong_ordering operator<=>(const Tag& a, const Tag& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.value <=> b.value; c != 0) return c;
  return std::lexicographical_compare_three_way(a.items.begin(), a.items.end(), b.items.begin(), b.items.end());
}

bool operator==(const Tag& a, const Tag& b) { return (a <=> b) == 0; }

std::uint64_t tag_weight(const Tag& t) {
  switch (t.kind) {
    case Tag::Kind::Unit: return 0;
    case Tag::Kind::Nat: return t.value;
    case Tag::Kind::Tuple: {
      std::uint64_t w = 0;
      for (const Tag& p : t.items) w += tag_weight(p);
      return w;
    }
    case Tag::Kind::Inj: return t.value + tag_weight(t.items.front());
    case Tag::Kind::Set: {
      std::uint64_t w = 0;
      for (const Tag& p : t.items) w += 1 + tag_weight(p);
      return w;
    }
    case Tag::Kind::Map: {
      std::uint64_t w = 0;
      for (std::size_t k = 1; k + 1 < t.items.size(); k += 2) w += 1 + tag_weight(t.items[k]) + tag_weight(t.items[k + 1]);
      return w;
    }
  }
  return 0;
}

bool canonical_less(const Tag& a, const Tag& b) {
  const std::uint64_t wa = tag_weight(a);
  const std::uint64_t wb = tag_weight(b);
  if (wa != wb) return wa < wb;
  return a < b;
}

Tag Tag::set(std::vector<Tag> members) {
  std::sort(members.begin(), members.end(), canonical_less);
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return {Kind::Set, 0, std::move(members)};
}

Tag Tag::map(Tag fallback, std::vector<std::pair<Tag, Tag>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return canonical_less(x.first, y.first); });
  Tag out{Kind::Map, 0, {std::move(fallback)}};
  for (auto& [k, v] : entries) {
    if (v == out.items.front()) continue;
    if (out.items.size() > 1 && out.items[out.items.size() - 2] == k) throw PreconditionError("map tag lists a key twice");
    out.items.push_back(std::move(k));
    out.items.push_back(std::move(v));
  }
  return out;
}

const Tag& Tag::apply(const Tag& key) const {
  if (kind != Kind::Map || items.empty()) throw PreconditionError("tag " + str() + " is not a total map");
  for (std::size_t k = 1; k + 1 < items.size(); k += 2) {
    if (items[k] == key) return items[k + 1];
  }
  return items.front();
}

std::string Tag::str() const {
  switch (kind) {
    case Kind::Unit: return "u";
    case Kind::Nat: return std::to_string(value);
    case Kind::Tuple: {
      std::string out = "(";
      for (std::size_t k = 0; k < items.size(); ++k) out += (k ? " " : "") + items[k].str();
      return out + ")";
    }
    case Kind::Inj: return "#" + std::to_string(value) + ":" + items.front().str();
    case Kind::Set: {
      std::string out = "{";
      for (std::size_t k = 0; k < items.size(); ++k) out += (k ? " " : "") + items[k].str();
      return out + "}";
    }
    case Kind::Map: {
      std::string out = "[";
      for (std::size_t k = 1; k + 1 < items.size(); k += 2) out += items[k].str() + "->" + items[k + 1].str() + " ";
      return out + (items.empty() ? "empty]" : "else " + items.front().str() + "]");
    }
  }
  return "?";
}

// ---- domains ------------------------------------------------------------

namespace {

Domain make_domain(DomainNode::Kind kind, std::vector<Domain> parts = {}, std::uint64_t size = 0) {
  auto node = std::make_shared<DomainNode>();
  node->kind = kind;
  node->parts = std::move(parts);
  node->size = size;
  return node;
}

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

}  // namespace

Domain unit_domain() { return make_domain(DomainNode::Kind::Unit); }
Domain nat_domain() { return make_domain(DomainNode::Kind::Nat); }
Domain natpair_domain() { return make_domain(DomainNode::Kind::NatPair); }
Domain fin_domain(std::uint64_t k) { return make_domain(DomainNode::Kind::Fin, {}, k); }
Domain prod_domain(std::vector<Domain> parts) { return make_domain(DomainNode::Kind::Prod, std::move(parts)); }
Domain sum_domain(std::vector<Domain> parts) { return make_domain(DomainNode::Kind::Sum, std::move(parts)); }
Domain finsubsets_domain(Domain element) { return make_domain(DomainNode::Kind::FinSubsets, {std::move(element)}); }
Domain choicefn_domain(Domain from, Domain to) {
  return make_domain(DomainNode::Kind::ChoiceFn, {std::move(from), std::move(to)});
}

bool is_unit(const Domain& d) { return d->kind == DomainNode::Kind::Unit; }

bool domain_equal(const Domain& a, const Domain& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->size != b->size || a->parts.size() != b->parts.size()) return false;
  for (std::size_t k = 0; k < a->parts.size(); ++k) {
    if (!domain_equal(a->parts[k], b->parts[k])) return false;
  }
  return true;
}

std::optional<std::uint64_t> cardinality(const Domain& d) {
  using K = DomainNode::Kind;
  switch (d->kind) {
    case K::Unit: return 1;
    case K::Nat:
    case K::NatPair: return std::nullopt;
    case K::Fin: return d->size;
    case K::Prod: {
      std::uint64_t n = 1;
      bool infinite = false;
      for (const Domain& p : d->parts) {
        auto c = cardinality(p);
        if (!c) {
          infinite = true;
        } else {
          n = sat_mul(n, *c);
        }
      }
      if (n == 0) return 0;
      if (infinite) return std::nullopt;
      return n;
    }
    case K::Sum: {
      std::uint64_t n = 0;
      for (const Domain& p : d->parts) {
        auto c = cardinality(p);
        if (!c) return std::nullopt;
        n = sat_add(n, *c);
      }
      return n;
    }
    case K::FinSubsets: {
      auto c = cardinality(d->parts[0]);
      if (!c) return std::nullopt;
      return *c >= 64 ? kSaturated : (std::uint64_t{1} << *c);
    }
    case K::ChoiceFn: {
      auto from = cardinality(d->parts[0]);
      auto to = cardinality(d->parts[1]);
      if (from && *from == 0) return 1;
      if (to && *to <= 1) return *to;
      if (!from || !to) return std::nullopt;
      std::uint64_t n = 1;
      for (std::uint64_t k = 0; k < *from && n != kSaturated; ++k) n = sat_mul(n, *to);
      return n;
    }
  }
  return std::nullopt;
}

namespace {

// Members of each weight, memoized per enumeration request.
class Enumerator {
 public:
  const std::vector<Tag>& of_weight(const Domain& d, std::uint64_t w) {
    auto key = std::make_pair(d.get(), w);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<Tag> out = compute(d, w);
    std::sort(out.begin(), out.end());
    return cache_.emplace(key, std::move(out)).first->second;
  }

  // Members of weight < bound, canonical order.
  std::vector<Tag> below(const Domain& d, std::uint64_t bound) {
    std::vector<Tag> out;
    for (std::uint64_t w = 0; w < bound; ++w) {
      const auto& level = of_weight(d, w);
      out.insert(out.end(), level.begin(), level.end());
    }
    return out;
  }

  std::optional<Tag> first(const Domain& d) {
    auto card = cardinality(d);
    if (card && *card == 0) return std::nullopt;
    for (std::uint64_t w = 0;; ++w) {
      const auto& level = of_weight(d, w);
      if (!level.empty()) return level.front();
    }
  }

 private:
  std::vector<Tag> compute(const Domain& d, std::uint64_t w) {
    using K = DomainNode::Kind;
    std::vector<Tag> out;
    switch (d->kind) {
      case K::Unit:
        if (w == 0) out.push_back(Tag::unit());
        break;
      case K::Nat: out.push_back(Tag::nat(w)); break;
      case K::NatPair:
        for (std::uint64_t i = 0; i <= w; ++i) out.push_back(Tag::tuple({Tag::nat(i), Tag::nat(w - i)}));
        break;
      case K::Fin:
        if (w < d->size) out.push_back(Tag::nat(w));
        break;
      case K::Prod: {
        std::vector<Tag> prefix;
        products(d->parts, 0, w, prefix, out);
        break;
      }
      case K::Sum:
        for (std::uint64_t i = 0; i < d->parts.size() && i <= w; ++i) {
          for (const Tag& t : of_weight(d->parts[i], w - i)) out.push_back(Tag::inj(i, t));
        }
        break;
      case K::FinSubsets: {
        const std::vector<Tag> pool = below(d->parts[0], w);
        std::vector<Tag> chosen;
        subsets(pool, 0, w, chosen, out);
        break;
      }
      case K::ChoiceFn: {
        const auto fallback = first(d->parts[1]);
        if (!fallback) {
          // Only the empty function, and only when the domain is empty.
          auto from = cardinality(d->parts[0]);
          if (w == 0 && from && *from == 0) out.push_back(Tag{Tag::Kind::Map, 0, {}});
          break;
        }
        if (w == 0) {
          out.push_back(Tag::map(*fallback, {}));
          break;
        }
        const std::vector<Tag> keys = below(d->parts[0], w);
        std::vector<Tag> values = below(d->parts[1], w);
        values.erase(std::remove(values.begin(), values.end(), *fallback), values.end());
        std::vector<Tag> entries{*fallback};
        maps(keys, values, 0, w, entries, out);
        break;
      }
    }
    return out;
  }

  void products(const std::vector<Domain>& parts, std::size_t k, std::uint64_t w, std::vector<Tag>& prefix,
                std::vector<Tag>& out) {
    if (k == parts.size()) {
      if (w == 0) out.push_back(Tag::tuple(prefix));
      return;
    }
    for (std::uint64_t here = 0; here <= w; ++here) {
      const std::vector<Tag> level = of_weight(parts[k], here);
      for (const Tag& t : level) {
        prefix.push_back(t);
        products(parts, k + 1, w - here, prefix, out);
        prefix.pop_back();
      }
    }
  }

  static void subsets(const std::vector<Tag>& pool, std::size_t k, std::uint64_t w, std::vector<Tag>& chosen,
                      std::vector<Tag>& out) {
    if (w == 0) {
      out.push_back(Tag::set(chosen));
      return;
    }
    for (std::size_t i = k; i < pool.size(); ++i) {
      const std::uint64_t cost = 1 + tag_weight(pool[i]);
      if (cost > w) continue;
      chosen.push_back(pool[i]);
      subsets(pool, i + 1, w - cost, chosen, out);
      chosen.pop_back();
    }
  }

  static void maps(const std::vector<Tag>& keys, const std::vector<Tag>& values, std::size_t k, std::uint64_t w,
                   std::vector<Tag>& items, std::vector<Tag>& out) {
    if (w == 0) {
      out.push_back(Tag{Tag::Kind::Map, 0, items});
      return;
    }
    for (std::size_t i = k; i < keys.size(); ++i) {
      const std::uint64_t key_cost = 1 + tag_weight(keys[i]);
      if (key_cost > w) continue;
      for (const Tag& v : values) {
        const std::uint64_t cost = key_cost + tag_weight(v);
        if (cost > w) continue;
        items.push_back(keys[i]);
        items.push_back(v);
        maps(keys, values, i + 1, w - cost, items, out);
        items.pop_back();
        items.pop_back();
      }
    }
  }

  std::map<std::pair<const DomainNode*, std::uint64_t>, std::vector<Tag>> cache_;
};

// No domain built here has a weight gap anywhere near this wide.
constexpr std::uint64_t kWeightCeiling = 4096;

}  // namespace

std::vector<Tag> enumerate(const Domain& d, std::size_t limit) {
  std::vector<Tag> out;
  auto card = cardinality(d);
  std::uint64_t target = limit;
  if (card) target = std::min<std::uint64_t>(target, *card);
  Enumerator en;
  for (std::uint64_t w = 0; out.size() < target && w < kWeightCeiling; ++w) {
    const auto& level = en.of_weight(d, w);
    for (const Tag& t : level) {
      if (out.size() == target) break;
      out.push_back(t);
    }
  }
  return out;
}

bool member(const Domain& d, const Tag& t) {
  using K = DomainNode::Kind;
  switch (d->kind) {
    case K::Unit: return t.kind == Tag::Kind::Unit;
    case K::Nat: return t.kind == Tag::Kind::Nat;
    case K::NatPair:
      return t.kind == Tag::Kind::Tuple && t.items.size() == 2 && t.items[0].kind == Tag::Kind::Nat &&
             t.items[1].kind == Tag::Kind::Nat;
    case K::Fin: return t.kind == Tag::Kind::Nat && t.value < d->size;
    case K::Prod:
      if (t.kind != Tag::Kind::Tuple || t.items.size() != d->parts.size()) return false;
      for (std::size_t k = 0; k < t.items.size(); ++k) {
        if (!member(d->parts[k], t.items[k])) return false;
      }
      return true;
    case K::Sum:
      return t.kind == Tag::Kind::Inj && t.value < d->parts.size() && member(d->parts[t.value], t.items.front());
    case K::FinSubsets:
      if (t.kind != Tag::Kind::Set) return false;
      for (std::size_t k = 0; k < t.items.size(); ++k) {
        if (!member(d->parts[0], t.items[k])) return false;
        if (k > 0 && !canonical_less(t.items[k - 1], t.items[k])) return false;
      }
      return true;
    case K::ChoiceFn: {
      if (t.kind != Tag::Kind::Map) return false;
      if (t.items.empty()) {
        auto from = cardinality(d->parts[0]);
        return from && *from == 0;
      }
      if (t.items.size() % 2 == 0 || !member(d->parts[1], t.items[0])) return false;
      for (std::size_t k = 1; k + 1 < t.items.size(); k += 2) {
        if (!member(d->parts[0], t.items[k]) || !member(d->parts[1], t.items[k + 1])) return false;
        if (k > 1 && !canonical_less(t.items[k - 2], t.items[k])) return false;
      }
      return true;
    }
  }
  return false;
}

// ---- TAGSPEC syntax -----------------------------------------------------

SExpr domain_to_sexpr(const Domain& d) {
  using K = DomainNode::Kind;
  auto list = [&](const char* head) {
    std::vector<SExpr> items{SExpr::make_atom(head)};
    for (const Domain& p : d->parts) items.push_back(domain_to_sexpr(p));
    return SExpr::make_list(std::move(items));
  };
  switch (d->kind) {
    case K::Unit: return SExpr::make_atom("unit");
    case K::Nat: return SExpr::make_atom("nat");
    case K::NatPair: return SExpr::make_atom("natpair");
    case K::Fin: return SExpr::make_list({SExpr::make_atom("fin"), SExpr::make_atom(std::to_string(d->size))});
    case K::Prod: return list("prod");
    case K::Sum: return list("sum");
    case K::FinSubsets: return list("finsubsets");
    case K::ChoiceFn: return list("choicefn");
  }
  return SExpr::make_atom("unit");
}

std::string render_domain(const Domain& d) { return domain_to_sexpr(d).str(); }

Domain parse_domain(const SExpr& e) {
  if (e.is_atom()) {
    if (e.atom == "unit") return unit_domain();
    if (e.atom == "nat") return nat_domain();
    if (e.atom == "natpair") return natpair_domain();
    fail_at(e, "unknown tag domain '" + e.atom + "'");
  }
  if (e.items.empty() || !e.items.front().is_atom()) fail_at(e, "expected a tag domain");
  const std::string& head = e.items.front().atom;
  std::vector<Domain> parts;
  if (head == "fin") {
    if (e.items.size() != 2 || !e.items[1].is_atom()) fail_at(e, "(fin k) takes one number");
    try {
      return fin_domain(std::stoull(e.items[1].atom));
    } catch (const std::exception&) {
      fail_at(e.items[1], "expected a natural number");
    }
  }
  for (std::size_t k = 1; k < e.items.size(); ++k) parts.push_back(parse_domain(e.items[k]));
  if (head == "prod") return prod_domain(std::move(parts));
  if (head == "sum") return sum_domain(std::move(parts));
  if (head == "finsubsets") {
    if (parts.size() != 1) fail_at(e, "(finsubsets D) takes one domain");
    return finsubsets_domain(parts[0]);
  }
  if (head == "choicefn") {
    if (parts.size() != 2) fail_at(e, "(choicefn D C) takes two domains");
    return choicefn_domain(parts[0], parts[1]);
  }
  fail_at(e, "unknown tag domain '" + head + "'");
}

Domain parse_domain(std::string_view text) { return parse_domain(read_sexpr(text)); }

}  // namespace inflogic
