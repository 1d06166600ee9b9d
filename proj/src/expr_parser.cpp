#include "expr_parser.hpp"

#include <cctype>
#include <cstdlib>

namespace microlim::detail {

namespace {

constexpr int kMaxExponent = 64;
constexpr std::size_t kMaxTerms = 20000;
constexpr int kMaxDepth = 200;

struct DepthGuard {
  int& depth;
  DepthGuard(int& d, TokenCursor& cur) : depth(d) {
    if (++depth > kMaxDepth) {
      --depth;
      cur.fail(cur.peek(), ParseErrorKind::InvalidExpression, "expression nested too deeply");
    }
  }
  ~DepthGuard() { --depth; }
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

const std::string_view kPunct = "+-*/^(){}:;,=";

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = Token::Kind::Int;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        tok.kind = Token::Kind::Decimal;
      }
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (kPunct.find(static_cast<char>(c)) != std::string_view::npos) {
      tok.kind = Token::Kind::Punct;
      tok.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c))
                                          : "byte 0x" + std::to_string(static_cast<int>(c));
      throw ParseError(ParseErrorKind::SyntaxError, line, col, "unexpected character '" + shown + "'");
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  const std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[idx];
}

Token TokenCursor::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenCursor::at_punct(char c) const {
  const auto& t = peek();
  return t.kind == Token::Kind::Punct && t.text[0] == c;
}

bool TokenCursor::at_ident(std::string_view word) const {
  const auto& t = peek();
  return t.kind == Token::Kind::Ident && t.text == word;
}

static std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End: return "end of input";
    case Token::Kind::Punct: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

Token TokenCursor::expect_punct(char c, std::string_view context) {
  if (!at_punct(c)) {
    fail(peek(), ParseErrorKind::SyntaxError,
         "expected '" + std::string(1, c) + "' " + std::string(context) + ", found " + describe(peek()));
  }
  return next();
}

Token TokenCursor::expect_ident(std::string_view context) {
  if (peek().kind != Token::Kind::Ident) {
    fail(peek(), ParseErrorKind::SyntaxError,
         "expected identifier " + std::string(context) + ", found " + describe(peek()));
  }
  return next();
}

void TokenCursor::fail(const Token& at, ParseErrorKind kind, const std::string& message) const {
  throw ParseError(kind, at.line, at.column, message);
}

bool is_symbol_name(std::string_view word) { return symbol_from_name(word).has_value(); }

LaurentPoly ExprParser::parse_expression() {
  LaurentPoly acc;
  bool negate = false;
  if (cur_.at_punct('+') || cur_.at_punct('-')) negate = cur_.next().text[0] == '-';
  acc = parse_product();
  if (negate) acc = -acc;
  while (cur_.at_punct('+') || cur_.at_punct('-')) {
    const bool minus = cur_.next().text[0] == '-';
    LaurentPoly rhs = parse_product();
    if (minus)
      acc -= rhs;
    else
      acc += rhs;
  }
  return acc;
}

LaurentPoly ExprParser::parse_product() {
  LaurentPoly acc = parse_unary();
  while (cur_.at_punct('*') || cur_.at_punct('/')) {
    const Token op = cur_.next();
    LaurentPoly rhs = parse_unary();
    acc = op.text[0] == '*' ? multiply(acc, rhs, op) : divide(acc, rhs, op);
  }
  return acc;
}

LaurentPoly ExprParser::parse_unary() {
  DepthGuard guard(depth_, cur_);
  if (cur_.at_punct('-')) {
    cur_.next();
    return -parse_unary();
  }
  if (cur_.at_punct('+')) {
    cur_.next();
    return parse_unary();
  }
  return parse_power();
}

LaurentPoly ExprParser::parse_power() {
  LaurentPoly base = parse_primary();
  if (!cur_.at_punct('^')) return base;
  const Token caret = cur_.next();
  const int e = parse_exponent();
  if (e < 0 && !base.is_monomial()) {
    cur_.fail(caret, ParseErrorKind::InvalidExpression,
              "negative power of a non-monomial expression is not a Laurent polynomial");
  }
  if (base.size() > 1 && e > 16) cur_.fail(caret, ParseErrorKind::InvalidExpression, "expression too large");
  LaurentPoly r = base.pow(e);
  if (r.size() > kMaxTerms) cur_.fail(caret, ParseErrorKind::InvalidExpression, "expression too large");
  return r;
}

int ExprParser::parse_exponent() {
  const Token& t = cur_.peek();
  bool negative = false;
  if (cur_.at_punct('-') || cur_.at_punct('+')) {
    negative = cur_.next().text[0] == '-';
  }
  const Token tok = cur_.peek();
  Rational value;
  if (tok.kind == Token::Kind::Int) {
    cur_.next();
    if (tok.text.size() > 6) cur_.fail(tok, ParseErrorKind::InvalidExpression, "exponent out of range");
    value = Rational(std::atoi(tok.text.c_str()));
  } else if (tok.kind == Token::Kind::Decimal) {
    cur_.fail(tok, ParseErrorKind::NonIntegerExponent, "exponent '" + tok.text + "' is not an integer");
  } else if (cur_.at_punct('(')) {
    DepthGuard guard(depth_, cur_);
    cur_.next();
    LaurentPoly inner = parse_expression();
    cur_.expect_punct(')', "to close exponent");
    const auto c = inner.constant_value();
    if (!c) cur_.fail(tok, ParseErrorKind::NonIntegerExponent, "exponent must be an integer constant");
    if (!is_integer(*c)) {
      cur_.fail(tok, ParseErrorKind::NonIntegerExponent, "exponent " + to_string(*c) + " is not an integer");
    }
    value = *c;
  } else if (tok.kind == Token::Kind::Ident) {
    cur_.fail(tok, ParseErrorKind::NonIntegerExponent, "exponent must be an integer constant, not '" + tok.text + "'");
  } else {
    cur_.fail(t, ParseErrorKind::SyntaxError, "expected integer exponent after '^'");
  }
  if (negative) value = -value;
  if (value > kMaxExponent || value < -kMaxExponent) {
    cur_.fail(tok, ParseErrorKind::InvalidExpression, "exponent out of range");
  }
  return static_cast<int>(boost::multiprecision::numerator(value));
}

LaurentPoly ExprParser::parse_primary() {
  const Token tok = cur_.peek();
  switch (tok.kind) {
    case Token::Kind::Int:
      cur_.next();
      if (tok.text.size() > 4096) cur_.fail(tok, ParseErrorKind::InvalidExpression, "literal too long");
      return LaurentPoly(parse_rational(tok.text));
    case Token::Kind::Decimal:
      cur_.fail(tok, ParseErrorKind::SyntaxError,
                "decimal literal '" + tok.text + "' is not allowed; write an exact fraction p/q");
    case Token::Kind::Ident: {
      const auto sym = symbol_from_name(tok.text);
      if (!sym) cur_.fail(tok, ParseErrorKind::UnknownSymbol, "unknown symbol '" + tok.text + "'");
      if (allowed_ && !allowed_(*sym)) {
        cur_.fail(tok, ParseErrorKind::UnknownSymbol, "symbol '" + tok.text + "' is not declared in params");
      }
      cur_.next();
      return LaurentPoly::symbol(*sym);
    }
    case Token::Kind::Punct:
      if (tok.text[0] == '(') {
        DepthGuard guard(depth_, cur_);
        cur_.next();
        LaurentPoly inner = parse_expression();
        cur_.expect_punct(')', "to close parenthesis");
        return inner;
      }
      [[fallthrough]];
    case Token::Kind::End:
      break;
  }
  cur_.fail(tok, ParseErrorKind::SyntaxError,
            "expected number, symbol or '(', found " + describe(tok));
}

LaurentPoly ExprParser::divide(const LaurentPoly& num, const LaurentPoly& den, const Token& at) const {
  if (den.is_zero()) cur_.fail(at, ParseErrorKind::InvalidExpression, "division by zero");
  if (!den.is_monomial()) {
    cur_.fail(at, ParseErrorKind::InvalidExpression,
              "division by a non-monomial expression is not a Laurent polynomial");
  }
  return num * den.inverse();
}

LaurentPoly ExprParser::multiply(const LaurentPoly& a, const LaurentPoly& b, const Token& at) const {
  if (a.size() * b.size() > kMaxTerms) cur_.fail(at, ParseErrorKind::InvalidExpression, "expression too large");
  return a * b;
}

}  // namespace microlim::detail
