#include "inflogic/signature.hpp"

#include <nlohmann/json.hpp>

#include "inflogic/error.hpp"

namespace inflogic {

using nlohmann::json;

void Signature::check_fresh(std::string_view name) const {
  if (name.empty()) throw SignatureError("empty symbol name");
  if (name == kEquality) throw SignatureError("'=' is reserved for equality");
  if (declares(name)) throw SignatureError("symbol '" + std::string(name) + "' declared twice");
}

Signature& Signature::add_relation(std::string name, unsigned arity) {
  check_fresh(name);
  relations_.emplace(std::move(name), arity);
  return *this;
}

Signature& Signature::add_family(std::string base, unsigned index_arity, unsigned arity) {
  check_fresh(base);
  if (index_arity != 1 && index_arity != 2) {
    throw SignatureError("family '" + base + "' must have index arity 1 or 2");
  }
  FamilyDecl decl{base, index_arity, arity};
  families_.emplace(std::move(base), decl);
  return *this;
}

Signature& Signature::add_constant(std::string name) {
  check_fresh(name);
  constants_.insert(std::move(name));
  return *this;
}

std::optional<unsigned> Signature::relation_arity(std::string_view name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) return std::nullopt;
  return it->second;
}

const FamilyDecl* Signature::family(std::string_view base) const {
  auto it = families_.find(base);
  return it == families_.end() ? nullptr : &it->second;
}

bool Signature::has_constant(std::string_view name) const { return constants_.contains(name); }

bool Signature::declares(std::string_view name) const {
  return relations_.contains(name) || families_.contains(name) || constants_.contains(name);
}

Signature Signature::merged(const Signature& other) const {
  Signature out = *this;
  for (const auto& [name, arity] : other.relations_) {
    if (auto mine = relation_arity(name)) {
      if (*mine != arity) throw SignatureError("conflicting arity for relation '" + name + "'");
      continue;
    }
    out.add_relation(name, arity);
  }
  for (const auto& [base, decl] : other.families_) {
    if (const FamilyDecl* mine = family(base)) {
      if (!(*mine == decl)) throw SignatureError("conflicting declaration for family '" + base + "'");
      continue;
    }
    out.add_family(base, decl.index_arity, decl.arity);
  }
  for (const auto& c : other.constants_) {
    if (!has_constant(c)) out.add_constant(c);
  }
  return out;
}

Signature Signature::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("signature: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("signature: expected a JSON object");
  Signature sig;
  try {
    if (doc.contains("relations")) {
      for (const auto& [name, arity] : doc.at("relations").items()) {
        sig.add_relation(name, arity.get<unsigned>());
      }
    }
    if (doc.contains("indexed_families")) {
      for (const auto& [base, decl] : doc.at("indexed_families").items()) {
        sig.add_family(base, decl.at("indices").get<unsigned>(), decl.at("arity").get<unsigned>());
      }
    }
    if (doc.contains("constants")) {
      for (const auto& c : doc.at("constants")) sig.add_constant(c.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("signature: ") + e.what());
  }
  return sig;
}

std::string Signature::to_json() const {
  json doc;
  doc["relations"] = json::object();
  for (const auto& [name, arity] : relations_) doc["relations"][name] = arity;
  doc["indexed_families"] = json::object();
  for (const auto& [base, decl] : families_) {
    doc["indexed_families"][base] = {{"indices", decl.index_arity}, {"arity", decl.arity}};
  }
  doc["constants"] = json::array();
  for (const auto& c : constants_) doc["constants"].push_back(c);
  return doc.dump();
}

}  // namespace inflogic
