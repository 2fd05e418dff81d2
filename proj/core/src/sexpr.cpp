#include "inflogic/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace inflogic {

namespace {

std::string describe(const std::string& what, SourcePos pos, bool at_end) {
  std::ostringstream out;
  if (at_end) {
    out << "syntax error at end-of-input: " << what;
  } else {
    out << "syntax error at " << pos.line << ':' << pos.column << ": " << what;
  }
  return out.str();
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_blank();
    return i_ >= text_.size();
  }

  SExpr read() {
    skip_blank();
    if (i_ >= text_.size()) throw ParseError("expected an expression", pos_, true);
    const SourcePos start = pos_;
    const char c = text_[i_];
    if (c == ')') throw ParseError("unexpected ')'", pos_);
    if (c == '(') {
      advance();
      SExpr list = SExpr::make_list({});
      list.pos = start;
      for (;;) {
        skip_blank();
        if (i_ >= text_.size()) throw ParseError("unbalanced '(' opened at " + where(start), pos_, true);
        if (text_[i_] == ')') {
          list.end = pos_;
          advance();
          return list;
        }
        list.items.push_back(read());
      }
    }
    std::string token;
    while (i_ < text_.size() && !is_delimiter(text_[i_])) {
      token.push_back(text_[i_]);
      advance();
    }
    SExpr atom = SExpr::make_atom(std::move(token));
    atom.pos = start;
    atom.end = pos_;
    return atom;
  }

  SourcePos pos() const { return pos_; }

 private:
  static bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
  }

  static std::string where(SourcePos p) {
    return std::to_string(p.line) + ":" + std::to_string(p.column);
  }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
    pos_.offset = i_;
  }

  void skip_blank() {
    while (i_ < text_.size()) {
      const char c = text_[i_];
      if (c == ';') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

void render(const SExpr& e, std::string& out) {
  if (e.is_atom()) {
    out += e.atom;
    return;
  }
  out.push_back('(');
  for (std::size_t k = 0; k < e.items.size(); ++k) {
    if (k) out.push_back(' ');
    render(e.items[k], out);
  }
  out.push_back(')');
}

}  // namespace

ParseError::ParseError(const std::string& what, SourcePos pos, bool at_end)
    : Error(describe(what, pos, at_end)), pos_(pos), at_end_(at_end) {}

std::string SExpr::str() const {
  std::string out;
  render(*this, out);
  return out;
}

SExpr read_sexpr(std::string_view text) {
  Reader reader(text);
  SExpr e = reader.read();
  if (!reader.at_end()) throw ParseError("trailing input after expression", reader.pos());
  return e;
}

std::vector<SExpr> read_sexprs(std::string_view text) {
  Reader reader(text);
  std::vector<SExpr> out;
  while (!reader.at_end()) out.push_back(reader.read());
  return out;
}

void fail_at(const SExpr& where, const std::string& message) { throw ParseError(message, where.pos); }

}  // namespace inflogic
