#include "microlim/laurent.hpp"

#include <sstream>

#include "expr_parser.hpp"
#include "microlim/errors.hpp"

namespace microlim {

std::string_view symbol_name(SymbolId s) {
  switch (s) {
    case SymbolId::Diffusivity: return "D";
    case SymbolId::RelaxTime: return "tau";
    case SymbolId::TimeStep: return "dt";
    case SymbolId::SpaceStep: return "dx";
  }
  return "?";
}

std::optional<SymbolId> symbol_from_name(std::string_view name) {
  for (SymbolId s : kAllSymbols)
    if (symbol_name(s) == name) return s;
  return std::nullopt;
}

LaurentPoly::LaurentPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

LaurentPoly LaurentPoly::term(const Rational& coeff, const Monomial& m) {
  LaurentPoly p;
  if (coeff != 0) p.terms_.emplace(m, coeff);
  return p;
}

LaurentPoly LaurentPoly::from_terms(const std::vector<std::pair<Monomial, Rational>>& raw) {
  LaurentPoly p;
  for (const auto& [m, c] : raw) p.terms_[m] += c;
  std::erase_if(p.terms_, [](const auto& kv) { return kv.second == 0; });
  return p;
}

bool LaurentPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

std::optional<Rational> LaurentPoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

Rational LaurentPoly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::pair<Monomial, Rational> LaurentPoly::leading_term() const { return *terms_.begin(); }

bool LaurentPoly::depends_on(SymbolId s) const {
  for (const auto& [m, c] : terms_)
    if (m[s] != 0) return true;
  return false;
}

LaurentPoly LaurentPoly::inverse() const {
  if (!is_monomial()) {
    throw NonInvertibleSubstitution("cannot invert non-monomial '" + render(*this) + "'");
  }
  const auto& [m, c] = *terms_.begin();
  return term(Rational(1) / c, m.inverse());
}

LaurentPoly LaurentPoly::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  LaurentPoly result(1);
  LaurentPoly base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  for (const auto& [m, c] : rhs.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) { return *this += -rhs; }

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) {
  Terms out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : rhs.terms_) {
      auto [it, inserted] = out.try_emplace(ma * mb, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  terms_ = std::move(out);
  return *this;
}

LaurentPoly substitute(const LaurentPoly& p, const Bindings& bindings) {
  if (bindings.empty()) return p;
  LaurentPoly out;
  for (const auto& [m, c] : p.terms()) {
    Monomial rest = m;
    LaurentPoly factor(c);
    for (const auto& [sym, b] : bindings) {
      const int e = m[sym];
      if (e == 0) continue;
      if (b.power == 0 || e % b.power != 0) {
        throw IndivisibleExponent("cannot rewrite " + std::string(symbol_name(sym)) + "^" + std::to_string(e) +
                                  " through a binding of " + std::string(symbol_name(sym)) + "^" +
                                  std::to_string(b.power));
      }
      const int k = e / b.power;
      if (k < 0 && !b.value.is_monomial()) {
        throw NonInvertibleSubstitution("negative power of non-monomial replacement '" + render(b.value) +
                                        "' for " + std::string(symbol_name(sym)));
      }
      factor *= b.value.pow(k);
      rest[sym] = 0;
    }
    out += factor * LaurentPoly::term(Rational(1), rest);
  }
  return out;
}

SymbolValues symbol_values(const Rational& D, const Rational& tau, const Rational& dt, const Rational& dx) {
  return {D, tau, dt, dx};
}

Rational eval(const LaurentPoly& p, const SymbolValues& values) {
  Rational sum = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < kSymbolCount; ++i) {
      const int e = m.exponents[i];
      const Rational& v = values[i];
      for (int k = 0; k < e; ++k) t *= v;
      for (int k = 0; k > e; --k) t /= v;
    }
    sum += t;
  }
  return sum;
}

std::string render(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;

    bool wrote = false;
    if (m.is_one() || mag != 1) {
      os << to_string(mag);
      wrote = true;
    }
    for (SymbolId s : kAllSymbols) {
      const int e = m[s];
      if (e == 0) continue;
      if (wrote) os << "*";
      os << symbol_name(s);
      if (e != 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

LaurentPoly parse_poly(std::string_view text) {
  detail::TokenCursor cur(detail::tokenize(text));
  detail::ExprParser parser(cur);
  LaurentPoly p = parser.parse_expression();
  if (!cur.at_end()) {
    cur.fail(cur.peek(), ParseErrorKind::SyntaxError, "unexpected '" + cur.peek().text + "' after expression");
  }
  return p;
}

}  // namespace microlim
