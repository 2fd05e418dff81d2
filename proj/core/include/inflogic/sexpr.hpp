#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "inflogic/error.hpp"

namespace inflogic {

// Minimal s-expression tree with source positions, shared by the formula,
// elementary-formula and tag-spec readers.
struct SExpr {
  enum class Kind { Atom, List };
  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;
  SourcePos end;  // position of the closing parenthesis for lists

  static SExpr make_atom(std::string text) { return SExpr{Kind::Atom, std::move(text), {}, {}, {}}; }
  static SExpr make_list(std::vector<SExpr> items) { return SExpr{Kind::List, {}, std::move(items), {}, {}}; }

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(std::string_view text) const { return is_atom() && atom == text; }
  // (head ...)
  bool has_head(std::string_view head) const {
    return is_list() && !items.empty() && items.front().is_atom(head);
  }

  std::string str() const;
};

// Parses exactly one expression; trailing non-comment text is an error.
SExpr read_sexpr(std::string_view text);
std::vector<SExpr> read_sexprs(std::string_view text);

[[noreturn]] void fail_at(const SExpr& where, const std::string& message);

}  // namespace inflogic
