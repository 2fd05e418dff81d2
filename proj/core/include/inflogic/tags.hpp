#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inflogic/sexpr.hpp"

namespace inflogic {

// A value indexing one member of an elementary formula's outer or inner
// family: a natural, a tuple, an injection into a sum, a finite set, or a
// finite map with a default (a choice function read at finitely many points).
struct Tag {
  enum class Kind : std::uint8_t { Unit, Nat, Tuple, Inj, Set, Map };
  Kind kind = Kind::Unit;
  std::uint64_t value = 0;  // Nat: the number; Inj: the summand
  // Tuple: components; Inj: [payload]; Set: members in canonical order;
  // Map: [default, key1, value1, key2, value2, ...] with keys in canonical order.
  std::vector<Tag> items;

  static Tag unit() { return {}; }
  static Tag nat(std::uint64_t n) { return {Kind::Nat, n, {}}; }
  static Tag tuple(std::vector<Tag> parts) { return {Kind::Tuple, 0, std::move(parts)}; }
  static Tag inj(std::uint64_t summand, Tag payload) { return {Kind::Inj, summand, {std::move(payload)}}; }
  static Tag set(std::vector<Tag> members);  // sorts canonically, drops duplicates
  // Entries equal to the default are dropped.
  static Tag map(Tag fallback, std::vector<std::pair<Tag, Tag>> entries);

  // Map lookup; the default when `key` is not listed.
  const Tag& apply(const Tag& key) const;

  std::string str() const;

  friend bool operator==(const Tag& a, const Tag& b);
  friend std::strong_ordering operator<=>(const Tag& a, const Tag& b);
};

// Size measure driving the canonical enumeration.
std::uint64_t tag_weight(const Tag& t);

// Canonical total order: by weight, then structurally.
bool canonical_less(const Tag& a, const Tag& b);

struct DomainNode;
using Domain = std::shared_ptr<const DomainNode>;

// Index domains of elementary formulas. `unit` is the one-point domain and
// (sum) with no parts is empty.
struct DomainNode {
  enum class Kind : std::uint8_t { Unit, Nat, NatPair, Fin, Prod, Sum, FinSubsets, ChoiceFn };
  Kind kind = Kind::Unit;
  std::uint64_t size = 0;      // Fin
  std::vector<Domain> parts;   // Prod, Sum; FinSubsets: [element]; ChoiceFn: [domain, codomain]
};

Domain unit_domain();
Domain nat_domain();
Domain natpair_domain();
Domain fin_domain(std::uint64_t k);
Domain prod_domain(std::vector<Domain> parts);
Domain sum_domain(std::vector<Domain> parts);
Domain finsubsets_domain(Domain element);
Domain choicefn_domain(Domain from, Domain to);

bool domain_equal(const Domain& a, const Domain& b);
bool is_unit(const Domain& d);

// Number of members, nullopt when infinite. Saturates at UINT64_MAX.
std::optional<std::uint64_t> cardinality(const Domain& d);

// First `limit` members in canonical order: increasing weight, ties broken
// by the structural order of the tags. Finite subsets have weight
// sum(1 + weight(member)); a choice function is a finite map from its
// domain to its codomain extended by the codomain's first member, weighing
// sum(1 + weight(key) + weight(value)) over its listed entries.
std::vector<Tag> enumerate(const Domain& d, std::size_t limit);

// Whether `t` is a member of `d` in the canonical representation.
bool member(const Domain& d, const Tag& t);

// TAGSPEC syntax: unit | nat | natpair | (fin k) | (prod D...) | (sum D...)
//               | (finsubsets D) | (choicefn D D)
SExpr domain_to_sexpr(const Domain& d);
std::string render_domain(const Domain& d);
Domain parse_domain(const SExpr& e);
Domain parse_domain(std::string_view text);

}  // namespace inflogic
