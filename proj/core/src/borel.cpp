#include "inflogic/borel.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "inflogic/error.hpp"
#include "inflogic/parse.hpp"

namespace inflogic {

using nlohmann::json;

namespace {

// f is a negation/disjunction combination of members other than `skip`.
bool compilable(const Formula& f, const std::vector<Formula>& members, std::size_t skip) {
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (k != skip && members[k] == f) return true;
  }
  if (const auto* n = f.get_if<Negation>()) return compilable(n->body, members, skip);
  if (const auto* j = f.get_if<Junction>(); j && j->op == Connective::Or) {
    return std::all_of(j->members.begin(), j->members.end(),
                       [&](const Formula& m) { return compilable(m, members, skip); });
  }
  return false;
}

}  // namespace

SentenceBasis::SentenceBasis(std::vector<Formula> members) : members_(std::move(members)) {
  for (std::size_t k = 0; k < members_.size(); ++k) {
    const Formula& f = members_[k];
    if (!is_finitary(f)) throw PreconditionError("basis member " + render_formula(f) + " is not finitary");
    if (!free_vars(f).empty()) throw PreconditionError("basis member " + render_formula(f) + " is not a sentence");
    for (std::size_t j = 0; j < k; ++j) {
      if (members_[j] == f) throw PreconditionError("basis lists " + render_formula(f) + " twice");
    }
  }
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (compilable(members_[k], members_, k)) {
      throw PreconditionError("basis member " + render_formula(members_[k]) +
                              " is a Boolean combination of other members");
    }
  }
}

std::optional<std::size_t> SentenceBasis::index_of(const Formula& f) const {
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (members_[k] == f) return k;
  }
  return std::nullopt;
}

SentenceBasis SentenceBasis::from_json(std::string_view text, const Signature& sig) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("basis: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError("basis: expected a list of formula strings");
  std::vector<Formula> members;
  for (const auto& s : doc) {
    if (!s.is_string()) throw FormatError("basis: expected a list of formula strings");
    members.push_back(parse_formula(s.get<std::string>(), sig));
  }
  try {
    return SentenceBasis(std::move(members));
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("basis: ") + e.what());
  }
}

TheoryFace TheoryFace::from_mask(std::size_t size, std::uint64_t mask) {
  TheoryFace s;
  for (std::size_t k = 0; k < size; ++k) s.member.push_back(((mask >> k) & 1U) != 0);
  return s;
}

std::string TheoryFace::str() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t k = 0; k < member.size(); ++k) {
    if (!member[k]) continue;
    out += (first ? "" : ",") + std::to_string(k);
    first = false;
  }
  return out + "}";
}

BorelCode BorelCode::intersection(std::vector<BorelCode> cs) {
  for (BorelCode& c : cs) c = complement(std::move(c));
  return complement(union_of(std::move(cs)));
}

std::size_t BorelCode::depth() const {
  std::size_t d = 0;
  for (const BorelCode& c : of) d = std::max(d, c.depth());
  return d + 1;
}

void BorelCode::validate(const SentenceBasis& d) const {
  switch (op) {
    case Op::Basic:
    case Op::BasicNeg:
      if (theta >= d.size()) {
        throw PreconditionError("code names basis member " + std::to_string(theta) + " of " + std::to_string(d.size()));
      }
      return;
    case Op::Complement:
      if (of.size() != 1) throw PreconditionError("a complement code has exactly one operand");
      of[0].validate(d);
      return;
    case Op::Union:
      for (const BorelCode& c : of) c.validate(d);
      return;
  }
}

namespace {

BorelCode code_from(const json& j) {
  if (!j.is_object() || !j.contains("op")) throw FormatError("borel code: expected {\"op\": ...}");
  const std::string op = j.at("op").get<std::string>();
  if (op == "basic" || op == "basicneg") {
    const auto i = j.at("theta").get<std::size_t>();
    return op == "basic" ? BorelCode::basic(i) : BorelCode::basic_neg(i);
  }
  if (op == "complement") return BorelCode::complement(code_from(j.at("of")));
  if (op == "union" || op == "intersection") {
    std::vector<BorelCode> parts;
    for (const auto& c : j.at("of")) parts.push_back(code_from(c));
    return op == "union" ? BorelCode::union_of(std::move(parts)) : BorelCode::intersection(std::move(parts));
  }
  throw FormatError("borel code: unknown op \"" + op + "\"");
}

json code_to(const BorelCode& c) {
  switch (c.op) {
    case BorelCode::Op::Basic: return {{"op", "basic"}, {"theta", c.theta}};
    case BorelCode::Op::BasicNeg: return {{"op", "basicneg"}, {"theta", c.theta}};
    case BorelCode::Op::Complement: return {{"op", "complement"}, {"of", code_to(c.of.at(0))}};
    case BorelCode::Op::Union: {
      json parts = json::array();
      for (const BorelCode& p : c.of) parts.push_back(code_to(p));
      return {{"op", "union"}, {"of", parts}};
    }
  }
  return nullptr;
}

}  // namespace

BorelCode BorelCode::from_json(std::string_view text) {
  try {
    return code_from(json::parse(text));
  } catch (const json::exception& e) {
    throw FormatError(std::string("borel code: ") + e.what());
  }
}

std::string BorelCode::to_json() const { return code_to(*this).dump(); }

Formula xi_formula(const SentenceBasis& d, const TheoryFace& s) {
  if (s.size() != d.size()) throw PreconditionError("face and basis differ in size");
  std::vector<Formula> parts;
  for (std::size_t k = 0; k < d.size(); ++k) parts.push_back(s.member[k] ? d[k] : negation(d[k]));
  if (parts.size() == 1) return parts.front();
  return conj(std::move(parts));
}

Formula borel_to_formula(const BorelCode& c, const SentenceBasis& d) {
  c.validate(d);
  switch (c.op) {
    case BorelCode::Op::Basic: return d[c.theta];
    case BorelCode::Op::BasicNeg: return negation(d[c.theta]);
    case BorelCode::Op::Complement: return negation(borel_to_formula(c.of[0], d));
    case BorelCode::Op::Union: {
      std::vector<Formula> parts;
      for (const BorelCode& p : c.of) parts.push_back(borel_to_formula(p, d));
      return disj(std::move(parts));
    }
  }
  throw PreconditionError("unreachable borel op");
}

bool borel_membership(const BorelCode& c, const TheoryFace& s) {
  switch (c.op) {
    case BorelCode::Op::Basic: return s.member.at(c.theta);
    case BorelCode::Op::BasicNeg: return !s.member.at(c.theta);
    case BorelCode::Op::Complement: return !borel_membership(c.of.at(0), s);
    case BorelCode::Op::Union:
      return std::any_of(c.of.begin(), c.of.end(), [&](const BorelCode& p) { return borel_membership(p, s); });
  }
  return false;
}

bool evaluate_over_face(const Formula& f, const SentenceBasis& d, const TheoryFace& s) {
  if (auto k = d.index_of(f)) return s.member.at(*k);
  if (const auto* n = f.get_if<Negation>()) return !evaluate_over_face(n->body, d, s);
  if (const auto* j = f.get_if<Junction>()) {
    if (j->op == Connective::Or) {
      return std::any_of(j->members.begin(), j->members.end(),
                         [&](const Formula& m) { return evaluate_over_face(m, d, s); });
    }
    return std::all_of(j->members.begin(), j->members.end(),
                       [&](const Formula& m) { return evaluate_over_face(m, d, s); });
  }
  throw PreconditionError(render_formula(f) + " is not a Boolean combination of basis members");
}

bool face_entails(const SentenceBasis& d, const TheoryFace& s, const Formula& f) { return evaluate_over_face(f, d, s); }

}  // namespace inflogic
