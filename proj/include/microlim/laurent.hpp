#pragma once

// Exact multivariate Laurent polynomials over Q in the four symbols
// D (diffusivity), tau (relaxation time), dt (time step) and dx (space step).

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "microlim/rational.hpp"

namespace microlim {

enum class SymbolId : std::size_t { Diffusivity = 0, RelaxTime = 1, TimeStep = 2, SpaceStep = 3 };

inline constexpr std::size_t kSymbolCount = 4;
inline constexpr std::array<SymbolId, kSymbolCount> kAllSymbols = {
    SymbolId::Diffusivity, SymbolId::RelaxTime, SymbolId::TimeStep, SymbolId::SpaceStep};

// Text names used by the canonical rendering and the scheme language.
std::string_view symbol_name(SymbolId s);
std::optional<SymbolId> symbol_from_name(std::string_view name);

struct Monomial {
  std::array<int, kSymbolCount> exponents{};

  static Monomial of(SymbolId s, int power = 1) {
    Monomial m;
    m.exponents[static_cast<std::size_t>(s)] = power;
    return m;
  }

  int operator[](SymbolId s) const { return exponents[static_cast<std::size_t>(s)]; }
  int& operator[](SymbolId s) { return exponents[static_cast<std::size_t>(s)]; }

  bool is_one() const {
    for (int e : exponents)
      if (e != 0) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kSymbolCount; ++i) r.exponents[i] = a.exponents[i] + b.exponents[i];
    return r;
  }

  Monomial inverse() const {
    Monomial r;
    for (std::size_t i = 0; i < kSymbolCount; ++i) r.exponents[i] = -exponents[i];
    return r;
  }

  // Lexicographic on (D, tau, dt, dx); this is the canonical term order.
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

class LaurentPoly {
 public:
  using Terms = std::map<Monomial, Rational>;

  LaurentPoly() = default;
  LaurentPoly(const Rational& c);  // NOLINT(google-explicit-constructor): constants promote freely
  LaurentPoly(int c) : LaurentPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static LaurentPoly term(const Rational& coeff, const Monomial& m);
  static LaurentPoly symbol(SymbolId s, int power = 1) { return term(Rational(1), Monomial::of(s, power)); }

  // Combines duplicate monomials and drops zero coefficients.
  static LaurentPoly from_terms(const std::vector<std::pair<Monomial, Rational>>& raw);

  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  bool is_constant() const;
  std::optional<Rational> constant_value() const;

  // Coefficient of the constant monomial (0 if absent).
  Rational constant_term() const;

  // First term in canonical order. Precondition: nonzero.
  std::pair<Monomial, Rational> leading_term() const;

  bool depends_on(SymbolId s) const;

  // Only monomials are invertible; anything else throws NonInvertibleSubstitution.
  LaurentPoly inverse() const;
  LaurentPoly pow(int n) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(const LaurentPoly& rhs);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  Terms terms_;
};

inline LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b) { return a + b; }
inline LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }

// symbol^power -> value. A power-2 binding on dx expresses dx^2 without square roots.
struct Binding {
  int power = 1;
  LaurentPoly value;
};

using Bindings = std::map<SymbolId, Binding>;

// Unbound symbols pass through. Throws NonInvertibleSubstitution when a negative power of a
// non-monomial replacement is needed and IndivisibleExponent when a term's exponent is not a
// multiple of the binding power.
LaurentPoly substitute(const LaurentPoly& p, const Bindings& bindings);

using SymbolValues = std::array<Rational, kSymbolCount>;

SymbolValues symbol_values(const Rational& D, const Rational& tau, const Rational& dt, const Rational& dx);

// Precondition: every symbol maps to a nonzero (normally positive) rational.
Rational eval(const LaurentPoly& p, const SymbolValues& values);

// Canonical text, e.g. "1 - 3*D*tau*dx^-2". Zero renders as "0".
std::string render(const LaurentPoly& p);

// Inverse of render; also accepts general arithmetic (+ - * / ^ and parentheses).
// Throws ParseError.
LaurentPoly parse_poly(std::string_view text);

}  // namespace microlim
