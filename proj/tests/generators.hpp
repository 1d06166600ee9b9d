#pragma once

// Hand-rolled property generators shared by the test binaries. Every generator draws from a
// seeded std::mt19937_64 so failures reproduce.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "microlim/laurent.hpp"
#include "microlim/rational.hpp"

namespace gen {

using microlim::LaurentPoly;
using microlim::Monomial;
using microlim::Rational;
using microlim::SymbolId;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(int max_num = 20, int max_den = 9) {
    return Rational(integer(-max_num, max_num), integer(1, max_den));
  }
  Rational nonneg_rational(int max_num = 20, int max_den = 9) { return Rational(integer(0, max_num), integer(1, max_den)); }
  Rational positive_rational(int max_num = 20, int max_den = 9) {
    return Rational(integer(1, max_num), integer(1, max_den));
  }

  // p in (0, 1/2]
  Rational walk_p() {
    const int b = integer(2, 48);
    return Rational(integer(1, b / 2), b);
  }

  Monomial monomial(int max_exp = 3) {
    Monomial m;
    for (auto& e : m.exponents) e = integer(-max_exp, max_exp);
    return m;
  }

  LaurentPoly poly(int max_terms = 4, int max_exp = 3) {
    LaurentPoly p;
    const int n = integer(0, max_terms);
    for (int i = 0; i < n; ++i) p += LaurentPoly::term(rational(), monomial(max_exp));
    return p;
  }

  LaurentPoly nonzero_poly(int max_terms = 4, int max_exp = 3) {
    LaurentPoly p = poly(max_terms, max_exp);
    while (p.is_zero()) p = poly(max_terms, max_exp);
    return p;
  }

  // Nonzero values for every symbol, used to test evaluation homomorphisms.
  microlim::SymbolValues point() {
    microlim::SymbolValues v;
    for (auto& x : v) {
      x = rational(7, 5);
      while (x == 0) x = rational(7, 5);
    }
    return v;
  }

  std::vector<Rational> rational_field(std::size_t n, int zero_chance = 3) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = integer(0, zero_chance) == 0 ? Rational(0) : nonneg_rational(40, 11);
    return v;
  }

  std::vector<double> double_field(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = integer(0, 3) == 0 ? 0.0 : real(0.0, 10.0);
    return v;
  }

  std::string bytes(std::size_t max_len) {
    std::string s(static_cast<std::size_t>(integer(0, static_cast<int>(max_len))), '\0');
    for (auto& c : s) c = static_cast<char>(integer(0, 255));
    return s;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
