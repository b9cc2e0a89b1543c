#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prepdiag {

/// Base class for every fault raised by the engine. Learner-level outcomes
/// (unparseable answers, unknown words) are reported as verdicts, not faults,
/// except where a module's contract says otherwise.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ScopeError : public Error {
 public:
  ScopeError(const std::string& rule, const std::string& variable)
      : Error("rule " + rule + ": unbound variable " + variable),
        variable_(variable) {}
  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class UnknownTypeError : public Error {
 public:
  explicit UnknownTypeError(const std::string& type)
      : Error("unknown type: " + type), type_(type) {}
  const std::string& type() const noexcept { return type_; }

 private:
  std::string type_;
};

class ReductionLimitError : public Error {
 public:
  using Error::Error;
};

class UnknownCharacterError : public Error {
 public:
  UnknownCharacterError(const std::string& character, std::size_t offset)
      : Error("unknown character '" + character + "' at offset " +
              std::to_string(offset)),
        character_(character),
        offset_(offset) {}
  const std::string& character() const noexcept { return character_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string character_;
  std::size_t offset_;
};

class UnknownWordError : public Error {
 public:
  explicit UnknownWordError(const std::string& token)
      : Error("word not in scope: " + token), token_(token) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class UnsupportedUtteranceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRestrictionError : public Error {
 public:
  using Error::Error;
};

class SaturationOverflowError : public Error {
 public:
  using Error::Error;
};

class InconsistentModelError : public Error {
 public:
  using Error::Error;
};

class UnknownPredicateError : public Error {
 public:
  explicit UnknownPredicateError(const std::string& predicate)
      : Error("unknown predicate: " + predicate) {}
};

class StaleDiagnosisError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace prepdiag
