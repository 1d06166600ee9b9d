#pragma once

// doctest printers for the library's value types.

#include <doctest.h>

#include <sstream>

#include "microlim/laurent.hpp"
#include "microlim/stencil.hpp"

namespace doctest {

template <>
struct StringMaker<microlim::LaurentPoly> {
  static String convert(const microlim::LaurentPoly& p) { return ("[" + microlim::render(p) + "]").c_str(); }
};

template <>
struct StringMaker<microlim::Stencil> {
  static String convert(const microlim::Stencil& s) {
    std::ostringstream os;
    os << "{";
    for (const auto& [o, c] : s.entries()) os << " " << microlim::to_string(o) << ": " << microlim::render(c) << ";";
    os << " }";
    return os.str().c_str();
  }
};

}  // namespace doctest
