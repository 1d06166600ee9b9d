#include "microlim/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "microlim/errors.hpp"

namespace microlim {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_digits(std::string_view s) {
  Integer v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto bad = [&] { return std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw bad();
    const Integer d = parse_digits(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(parse_digits(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto whole = s.substr(0, dot);
    const auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw bad();
    }
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const Integer w = whole.empty() ? Integer(0) : parse_digits(whole);
    const Integer f = frac.empty() ? Integer(0) : parse_digits(frac);
    value = Rational(w * scale + f, scale);
  } else {
    if (!all_digits(s)) throw bad();
    value = Rational(parse_digits(s));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::SyntaxError: return "SyntaxError";
    case ParseErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ParseErrorKind::NonIntegerExponent: return "NonIntegerExponent";
    case ParseErrorKind::UnresolvedTemplate: return "UnresolvedTemplate";
    case ParseErrorKind::DuplicateName: return "DuplicateName";
    case ParseErrorKind::InvalidExpression: return "InvalidExpression";
    case ParseErrorKind::InconsistentTemplate: return "InconsistentTemplate";
  }
  return "ParseError";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::size_t column,
                       const std::string& message)
    : Error(std::string(microlim::to_string(kind)) + " at " + std::to_string(line) + ":" +
            std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

}  // namespace microlim
