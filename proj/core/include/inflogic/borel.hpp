#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inflogic/formula.hpp"
#include "inflogic/signature.hpp"

namespace inflogic {

// A finite ordered list D of finitary sentences, the atoms of Borel codes.
// No member may be a negation or disjunction built from the other members,
// so that reading the compiled formula back over a face is unambiguous.
class SentenceBasis {
 public:
  SentenceBasis() = default;
  explicit SentenceBasis(std::vector<Formula> members);  // validates

  std::size_t size() const { return members_.size(); }
  const Formula& operator[](std::size_t i) const { return members_.at(i); }
  const std::vector<Formula>& members() const { return members_; }
  std::optional<std::size_t> index_of(const Formula& f) const;

  // A JSON list of formula source strings.
  static SentenceBasis from_json(std::string_view text, const Signature& sig);

 private:
  std::vector<Formula> members_;
};

// A subset S of the basis as a membership vector in basis order.
struct TheoryFace {
  std::vector<bool> member;

  static TheoryFace from_mask(std::size_t size, std::uint64_t mask);  // bit k = member k
  std::size_t size() const { return member.size(); }
  std::string str() const;  // "{0,2}"
};

// Codes for sets of faces: [theta], its complement as a basic set, the
// complement of a code, and finite unions.
struct BorelCode {
  enum class Op : std::uint8_t { Basic, BasicNeg, Complement, Union };
  Op op = Op::Basic;
  std::size_t theta = 0;
  std::vector<BorelCode> of;

  static BorelCode basic(std::size_t i) { return {Op::Basic, i, {}}; }
  static BorelCode basic_neg(std::size_t i) { return {Op::BasicNeg, i, {}}; }
  static BorelCode complement(BorelCode c) { return {Op::Complement, 0, {std::move(c)}}; }
  static BorelCode union_of(std::vector<BorelCode> cs) { return {Op::Union, 0, std::move(cs)}; }
  // Sugar: the complement of the union of complements.
  static BorelCode intersection(std::vector<BorelCode> cs);

  std::size_t depth() const;
  void validate(const SentenceBasis& d) const;  // throws PreconditionError

  // {"op":"basic","theta":0} | {"op":"basicneg","theta":1}
  // | {"op":"complement","of":CODE} | {"op":"union","of":[CODE...]}
  // | {"op":"intersection","of":[CODE...]} (expanded on read)
  static BorelCode from_json(std::string_view text);
  std::string to_json() const;

  friend bool operator==(const BorelCode&, const BorelCode&) = default;
};

// The conjunction of the members of S and the negations of the rest, in
// basis order; a one-member basis gives the bare literal.
Formula xi_formula(const SentenceBasis& d, const TheoryFace& s);

// [theta] -> theta, complement -> negation, union -> disjunction.
Formula borel_to_formula(const BorelCode& c, const SentenceBasis& d);

// S in Y, read directly off the code.
bool borel_membership(const BorelCode& c, const TheoryFace& s);

// Truth of a Boolean combination of basis members when exactly the members
// of S hold. Throws PreconditionError if f is not such a combination.
bool evaluate_over_face(const Formula& f, const SentenceBasis& d, const TheoryFace& s);

// xi_S entails f propositionally. Since xi_S fixes every basis member this is
// evaluate_over_face.
bool face_entails(const SentenceBasis& d, const TheoryFace& s, const Formula& f);

}  // namespace inflogic
