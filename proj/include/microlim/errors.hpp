#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace microlim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A negative power of a non-monomial replacement was required.
class NonInvertibleSubstitution : public Error {
 public:
  using Error::Error;
};

// A binding for symbol^k was applied to a term whose exponent is not a multiple of k.
class IndivisibleExponent : public Error {
 public:
  using Error::Error;
};

class UnknownTemplate : public Error {
 public:
  using Error::Error;
};

class UnderConstrained : public Error {
 public:
  using Error::Error;
};

class UnstableStep : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  SyntaxError,
  UnknownSymbol,
  NonIntegerExponent,
  UnresolvedTemplate,
  DuplicateName,
  InvalidExpression,
  InconsistentTemplate,
};

const char* to_string(ParseErrorKind kind);

// Positioned diagnostic; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string& message);

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

}  // namespace microlim
