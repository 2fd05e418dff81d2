#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "inflogic/finite_model.hpp"

namespace inflogic {

// ---- counts with omega --------------------------------------------------

// A natural number or omega, with omega + n = omega.
class Count {
 public:
  constexpr Count() = default;
  static constexpr Count finite(std::uint64_t n) { return Count(false, n); }
  static constexpr Count omega() { return Count(true, 0); }

  bool is_omega() const { return omega_; }
  bool is_zero() const { return !omega_ && n_ == 0; }
  std::uint64_t value() const;  // throws PreconditionError for omega
  std::string str() const;      // "omega" or the number

  friend Count operator+(Count a, Count b);
  friend bool operator==(const Count&, const Count&) = default;

 private:
  constexpr Count(bool omega, std::uint64_t n) : omega_(omega), n_(n) {}
  bool omega_ = false;
  std::uint64_t n_ = 0;
};

// ---- block structures ---------------------------------------------------

// `blocks` non-standard blocks, each with `extra` non-standard elements b*
// besides the labelled children.
struct NonstandardBlocks {
  Count extra = Count::finite(1);
  Count blocks = Count::finite(1);

  friend bool operator==(const NonstandardBlocks&, const NonstandardBlocks&) = default;
};

// A disjoint union of blocks. A standard block is a Q-root a with children
// b_0, b_1, ... attached by R, b_n labelled by P_n alone; a non-standard
// block adds unlabelled children. Descriptors with equal `extra` are merged.
struct BlockConfig {
  Count standard = Count::omega();
  std::vector<NonstandardBlocks> nonstandard;

  static BlockConfig the_standard_model() { return {}; }  // countably many standard blocks

  Count nonstandard_blocks() const;
  Count total_blocks() const;
  void validate() const;  // throws PreconditionError
  BlockConfig normalized() const;

  // { "standard": "omega" | n, "nonstandard": [{"extra": "omega" | n, "blocks": "omega" | n}] }
  // "blocks" defaults to 1.
  static BlockConfig from_json(std::string_view text);
  std::string to_json() const;
  std::string str() const;  // "standard=1 nonstandard=[omega(+1)]": block count, then extra elements per block

  friend bool operator==(const BlockConfig& a, const BlockConfig& b);
};

// The sentence "every Q-root has an R-child satisfying no P_n" holds iff no
// block is standard.
bool block_satisfies_psi(const BlockConfig& c);

// Weak forcing of the same sentence: every structure with infinitely many
// blocks has elementary extensions of both kinds, and the sentence is
// forced. Throws PreconditionError when the number of blocks is finite.
bool block_forces_psi(const BlockConfig& c);

// One step of the alternation: add a standard block when the sentence
// holds, otherwise give every standard block one non-standard element.
BlockConfig alternate_extension(const BlockConfig& c);

// Finite shadow: `children` labelled children per block, omega counts cut to
// `omega_as`. Element names: aK (root of block K), bK_n, sK_m (non-standard).
FiniteStructure truncate_blocks(const BlockConfig& c, std::size_t children, std::size_t omega_as);

// Signature {Q/1, R/2, P_n/1}.
Signature block_signature();

// ---- tree structures ----------------------------------------------------

using Sequence = std::vector<std::uint64_t>;

struct FiniteTree {
  std::set<Sequence> nodes;  // prefix closed, contains the empty sequence
};

struct TreeEdge {
  std::string from;
  std::uint64_t label = 0;
  std::string to;
};

// A finite rooted graph with labelled edges, denoting its unfolding: the
// sequences of labels along walks from the root.
struct RegularTree {
  std::vector<std::string> nodes;
  std::string root;
  std::vector<TreeEdge> edges;
};

struct TreeSpec {
  std::variant<FiniteTree, RegularTree> value;

  bool is_finite() const { return std::holds_alternative<FiniteTree>(value); }
  void validate() const;  // throws PreconditionError

  // {"kind":"finite","nodes":[[],[0],[0,1]]}
  // {"kind":"regular","nodes":["r","s"],"root":"r","edges":[["r",0,"s"]]}
  static TreeSpec from_json(std::string_view text);
  std::string to_json() const;
};

// The structure A_T: one element per sequence s of the tree, satisfying
// exactly R_{i,s(i)} for i < |s|.
class TreeStructure {
 public:
  explicit TreeStructure(TreeSpec spec);

  const TreeSpec& spec() const { return spec_; }
  bool contains(const Sequence& s) const;
  bool holds(std::uint64_t i, std::uint64_t j, const Sequence& s) const;
  // Elements of length <= depth, shortlex order.
  std::vector<Sequence> elements_up_to(std::size_t depth) const;

 private:
  TreeSpec spec_;
};

TreeStructure build_tree_structure(const TreeSpec& t);

std::string sequence_name(const Sequence& s);  // "[]", "[0,1]"

FiniteStructure truncate_to_finite(const TreeStructure& h, std::size_t depth);

// Signature {R_{i,j}/1}.
Signature tree_signature();

// An infinite branch of a regular tree, as a stem from the root into a cycle.
struct PathCertificate {
  std::vector<std::string> stem;
  std::vector<std::uint64_t> stem_labels;
  std::vector<std::string> cycle;
  std::vector<std::uint64_t> cycle_labels;

  std::string str() const;  // "[cycle r]", "[stem r cycle s t]"
};

std::optional<PathCertificate> infinite_path(const TreeSpec& t);
bool tree_has_infinite_path(const TreeSpec& t);

// The structure weak-forces "some x satisfies, for every i, some R_{i,j}"
// iff the tree has an infinite path.
bool tree_forces_psi(const TreeSpec& t);

// No element satisfies that sentence: an element is a finite sequence s and
// fails the conjunct i = |s|.
bool tree_satisfies_psi(const TreeSpec& t);

}  // namespace inflogic
