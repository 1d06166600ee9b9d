#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace microlim {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

// Accepts "n", "-n", "p/q" and terminating decimals such as "0.25" or "-1.5".
// Decimals are converted exactly. Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

// "3", "-1/2"
std::string to_string(const Rational& r);

double to_double(const Rational& r);

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

}  // namespace microlim
