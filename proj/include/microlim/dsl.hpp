#pragma once

// The .scheme language:
//
//   file     := [params] item*          (exactly one scheme item)
//   params   := 'params' [SYM (',' SYM)*] ';'        SYM in {D, tau}
//   item     := template | scheme
//   template := 'template' NAME 'for' (ut|utt|uxx|utxx) '{' entry+ '}'
//   entry    := '(' INT ',' INT ')' ':' expr ';'
//   scheme   := 'scheme' '{' term (('+'|'-') term)* '=' '0' '}'
//   term     := ['+'|'-'] (factor ('*'|'/'))* NAME
//
// NAME refers to a template in the file or to a built-in one. When params is present, only the
// declared symbols (plus dt and dx) may appear in expressions.

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "microlim/laurent.hpp"
#include "microlim/models.hpp"
#include "microlim/stencil.hpp"

namespace microlim {

struct SchemeFileTerm {
  LaurentPoly coefficient;
  std::string template_name;
  friend bool operator==(const SchemeFileTerm&, const SchemeFileTerm&) = default;
};

struct SchemeFile {
  std::vector<DerivativeTemplate> templates;  // local declarations, in file order
  std::vector<SchemeFileTerm> terms;
  std::optional<std::vector<SymbolId>> params;
  friend bool operator==(const SchemeFile&, const SchemeFile&) = default;
};

// Throws ParseError carrying kind, line and column.
SchemeFile parse_scheme(std::string_view text);

std::string render_scheme(const SchemeFile& file);

// Resolves names against the local templates first, then the built-in catalog.
SchemeSpec to_scheme_spec(const SchemeFile& file);

// Text of schemes/<model>.scheme, embedded at build time.
std::string_view builtin_scheme_text(ModelId m);

// A valid file with random local templates and terms; used by round-trip tests and `check`.
SchemeFile random_scheme_file(std::mt19937_64& rng);

}  // namespace microlim
