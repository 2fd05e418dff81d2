#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace inflogic {

// An indexed relation family: base name N generating N_{i} (index_arity 1)
// or N_{i,j} (index_arity 2), each of relation arity `arity`.
struct FamilyDecl {
  std::string base;
  unsigned index_arity = 1;
  unsigned arity = 1;

  friend bool operator==(const FamilyDecl&, const FamilyDecl&) = default;
};

// Relational signature with constants. No function symbols. Names are unique
// across relations, family bases and constants.
class Signature {
 public:
  Signature() = default;

  Signature& add_relation(std::string name, unsigned arity);
  Signature& add_family(std::string base, unsigned index_arity, unsigned arity);
  Signature& add_constant(std::string name);

  std::optional<unsigned> relation_arity(std::string_view name) const;
  const FamilyDecl* family(std::string_view base) const;
  bool has_constant(std::string_view name) const;
  bool declares(std::string_view name) const;

  const std::map<std::string, unsigned, std::less<>>& relations() const { return relations_; }
  const std::map<std::string, FamilyDecl, std::less<>>& families() const { return families_; }
  const std::set<std::string, std::less<>>& constants() const { return constants_; }

  // Union of two signatures; throws SignatureError on conflicting declarations.
  Signature merged(const Signature& other) const;

  // JSON encoding:
  //   { "relations": {"Q": 1, "R": 2},
  //     "indexed_families": {"P": {"indices": 1, "arity": 1}},
  //     "constants": ["c"] }
  static Signature from_json(std::string_view text);
  std::string to_json() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  void check_fresh(std::string_view name) const;

  std::map<std::string, unsigned, std::less<>> relations_;
  std::map<std::string, FamilyDecl, std::less<>> families_;
  std::set<std::string, std::less<>> constants_;
};

// Name of the built-in equality relation.
inline constexpr std::string_view kEquality = "=";

}  // namespace inflogic
