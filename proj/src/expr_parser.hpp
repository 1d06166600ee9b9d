#pragma once

// Tokenizer and arithmetic-expression parser shared by parse_poly and the scheme language.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "microlim/errors.hpp"
#include "microlim/laurent.hpp"

namespace microlim::detail {

struct Token {
  enum class Kind { Ident, Int, Decimal, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Skips whitespace and '#' comments. Throws ParseError on bytes outside the alphabet.
std::vector<Token> tokenize(std::string_view source);

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool at_punct(char c) const;
  bool at_ident(std::string_view word) const;
  Token expect_punct(char c, std::string_view context);
  Token expect_ident(std::string_view context);

  [[noreturn]] void fail(const Token& at, ParseErrorKind kind, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

class ExprParser {
 public:
  // `symbol_allowed` may further restrict which of the four symbols are legal.
  explicit ExprParser(TokenCursor& cursor, std::function<bool(SymbolId)> symbol_allowed = {})
      : cur_(cursor), allowed_(std::move(symbol_allowed)) {}

  // expr := ['+'|'-'] product (('+'|'-') product)*
  LaurentPoly parse_expression();
  // power := primary ['^' exponent]
  LaurentPoly parse_power();

  // Checked division; the divisor must be a nonzero monomial.
  LaurentPoly divide(const LaurentPoly& num, const LaurentPoly& den, const Token& at) const;
  LaurentPoly multiply(const LaurentPoly& a, const LaurentPoly& b, const Token& at) const;

 private:
  LaurentPoly parse_product();
  LaurentPoly parse_unary();
  LaurentPoly parse_primary();
  int parse_exponent();

  TokenCursor& cur_;
  std::function<bool(SymbolId)> allowed_;
  int depth_ = 0;
};

bool is_symbol_name(std::string_view word);

}  // namespace microlim::detail
