#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inflogic {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source position inside a textual input (1-based line/column).
struct SourcePos {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, SourcePos pos, bool at_end = false);

  const SourcePos& pos() const { return pos_; }
  bool at_end_of_input() const { return at_end_; }

 private:
  SourcePos pos_;
  bool at_end_;
};

// Unknown symbol, arity mismatch, bad signature.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Raised by evaluators: unbound variable, unknown relation, bad assignment.
class EvalError : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (JSON schemas, tree specs, block configs, codes).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace inflogic
