#include "microlim/dsl.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "expr_parser.hpp"

namespace microlim {

using detail::ExprParser;
using detail::Token;
using detail::TokenCursor;

namespace {

constexpr std::array<std::string_view, 4> kKeywords = {"params", "template", "for", "scheme"};
constexpr int kMaxOffset = 16;

bool is_keyword(std::string_view w) {
  return std::find(kKeywords.begin(), kKeywords.end(), w) != kKeywords.end();
}

bool is_template_name(const Token& t) {
  return t.kind == Token::Kind::Ident && !detail::is_symbol_name(t.text) && !is_keyword(t.text);
}

class SchemeParser {
 public:
  explicit SchemeParser(std::string_view text) : cur_(detail::tokenize(text)) {}

  SchemeFile parse() {
    if (cur_.at_end()) cur_.fail(cur_.peek(), ParseErrorKind::SyntaxError, "empty input; expected a scheme block");
    if (cur_.at_ident("params")) parse_params();
    std::optional<Token> scheme_at;
    while (!cur_.at_end()) {
      const Token& t = cur_.peek();
      if (cur_.at_ident("template")) {
        parse_template();
      } else if (cur_.at_ident("scheme")) {
        if (scheme_at) cur_.fail(t, ParseErrorKind::DuplicateName, "a file holds exactly one scheme block");
        scheme_at = t;
        parse_scheme_block();
      } else if (cur_.at_ident("params")) {
        cur_.fail(t, ParseErrorKind::SyntaxError, "params must be the first declaration");
      } else {
        cur_.fail(t, ParseErrorKind::SyntaxError,
                  "expected 'template' or 'scheme', found '" + (t.text.empty() ? "end of input" : t.text) + "'");
      }
    }
    if (!scheme_at) cur_.fail(cur_.peek(), ParseErrorKind::SyntaxError, "missing scheme block");
    resolve(*scheme_at);
    return std::move(file_);
  }

 private:
  ExprParser expr_parser() {
    if (!file_.params) return ExprParser(cur_);
    const auto declared = *file_.params;
    return ExprParser(cur_, [declared](SymbolId s) {
      if (s == SymbolId::TimeStep || s == SymbolId::SpaceStep) return true;
      return std::find(declared.begin(), declared.end(), s) != declared.end();
    });
  }

  void parse_params() {
    cur_.next();
    std::vector<SymbolId> syms;
    if (!cur_.at_punct(';')) {
      while (true) {
        const Token t = cur_.expect_ident("in params list");
        const auto s = symbol_from_name(t.text);
        if (!s || (*s != SymbolId::Diffusivity && *s != SymbolId::RelaxTime)) {
          cur_.fail(t, ParseErrorKind::UnknownSymbol, "params may declare only D and tau, not '" + t.text + "'");
        }
        if (std::find(syms.begin(), syms.end(), *s) != syms.end()) {
          cur_.fail(t, ParseErrorKind::DuplicateName, "'" + t.text + "' declared twice");
        }
        syms.push_back(*s);
        if (!cur_.at_punct(',')) break;
        cur_.next();
      }
    }
    cur_.expect_punct(';', "after params");
    std::sort(syms.begin(), syms.end());
    file_.params = std::move(syms);
  }

  int parse_offset() {
    bool neg = false;
    if (cur_.at_punct('-') || cur_.at_punct('+')) neg = cur_.next().text[0] == '-';
    const Token t = cur_.peek();
    if (t.kind != Token::Kind::Int) cur_.fail(t, ParseErrorKind::SyntaxError, "expected integer offset");
    cur_.next();
    if (t.text.size() > 3 || std::stoi(t.text) > kMaxOffset) {
      cur_.fail(t, ParseErrorKind::InvalidExpression, "offset out of range");
    }
    const int v = std::stoi(t.text);
    return neg ? -v : v;
  }

  void parse_template() {
    cur_.next();
    const Token name = cur_.expect_ident("for template name");
    if (!is_template_name(name)) {
      cur_.fail(name, ParseErrorKind::DuplicateName, "'" + name.text + "' is reserved and cannot name a template");
    }
    if (is_builtin_template(name.text)) {
      cur_.fail(name, ParseErrorKind::DuplicateName, "'" + name.text + "' is already a built-in template");
    }
    for (const auto& t : file_.templates)
      if (t.name == name.text) cur_.fail(name, ParseErrorKind::DuplicateName, "template '" + name.text + "' redefined");
    const Token kw = cur_.expect_ident("('for')");
    if (kw.text != "for") cur_.fail(kw, ParseErrorKind::SyntaxError, "expected 'for', found '" + kw.text + "'");
    const Token tag_tok = cur_.expect_ident("(derivative tag)");
    const auto tag = derivative_tag_from_name(tag_tok.text);
    if (!tag) cur_.fail(tag_tok, ParseErrorKind::SyntaxError, "expected one of ut, utt, uxx, utxx");
    const Token open = cur_.expect_punct('{', "to open template body");

    std::set<GridOffset> seen;
    Stencil entries;
    while (!cur_.at_punct('}')) {
      const Token lp = cur_.expect_punct('(', "to open an offset");
      GridOffset o;
      o.dt = parse_offset();
      cur_.expect_punct(',', "between offsets");
      o.dx = parse_offset();
      cur_.expect_punct(')', "to close an offset");
      if (!seen.insert(o).second) {
        cur_.fail(lp, ParseErrorKind::DuplicateName, "offset " + to_string(o) + " listed twice");
      }
      cur_.expect_punct(':', "after offset");
      LaurentPoly c = expr_parser().parse_expression();
      cur_.expect_punct(';', "after coefficient");
      entries.add(o, c);
    }
    cur_.next();
    DerivativeTemplate t{name.text, *tag, std::move(entries)};
    if (t.entries.empty()) cur_.fail(open, ParseErrorKind::InvalidExpression, "template '" + name.text + "' is empty");
    if (!t.is_consistent()) {
      cur_.fail(name, ParseErrorKind::InconsistentTemplate,
                "entries of '" + name.text + "' sum to " + render(t.entries.total()) + ", not 0");
    }
    file_.templates.push_back(std::move(t));
  }

  void parse_term(bool negate) {
    if (cur_.at_punct('+') || cur_.at_punct('-')) negate ^= cur_.next().text[0] == '-';
    LaurentPoly coeff(1);
    char op = '*';
    Token op_tok = cur_.peek();
    auto parser = expr_parser();
    while (true) {
      const Token& t = cur_.peek();
      if (is_template_name(t)) {
        if (op == '/') cur_.fail(op_tok, ParseErrorKind::InvalidExpression, "cannot divide by a template");
        term_positions_.push_back(t);
        file_.terms.push_back({negate ? -coeff : coeff, t.text});
        cur_.next();
        return;
      }
      if (t.kind == Token::Kind::Ident && is_keyword(t.text)) {
        cur_.fail(t, ParseErrorKind::SyntaxError, "unexpected keyword '" + t.text + "' in scheme term");
      }
      const LaurentPoly f = parser.parse_power();
      coeff = op == '*' ? parser.multiply(coeff, f, op_tok) : parser.divide(coeff, f, op_tok);
      if (!cur_.at_punct('*') && !cur_.at_punct('/')) {
        cur_.fail(cur_.peek(), ParseErrorKind::SyntaxError, "expected '*' followed by a template name");
      }
      op_tok = cur_.next();
      op = op_tok.text[0];
    }
  }

  void parse_scheme_block() {
    cur_.next();
    cur_.expect_punct('{', "to open scheme body");
    parse_term(false);
    while (cur_.at_punct('+') || cur_.at_punct('-')) parse_term(cur_.next().text[0] == '-');
    cur_.expect_punct('=', "before the right-hand side");
    const Token zero = cur_.peek();
    if (zero.kind != Token::Kind::Int || parse_rational(zero.text) != 0) {
      cur_.fail(zero, ParseErrorKind::SyntaxError, "the right-hand side must be 0; move all terms to the left");
    }
    cur_.next();
    cur_.expect_punct('}', "to close scheme body");
  }

  void resolve(const Token& scheme_at) {
    bool has_time = false;
    for (std::size_t i = 0; i < file_.terms.size(); ++i) {
      const auto& name = file_.terms[i].template_name;
      std::optional<DerivativeTag> tag;
      for (const auto& t : file_.templates)
        if (t.name == name) tag = t.target;
      if (!tag && is_builtin_template(name)) tag = builtin_template(name).target;
      if (!tag) cur_.fail(term_positions_[i], ParseErrorKind::UnresolvedTemplate, "no template named '" + name + "'");
      has_time = has_time || is_time_derivative(*tag);
    }
    if (!has_time) {
      cur_.fail(scheme_at, ParseErrorKind::InvalidExpression, "scheme references no time-derivative template");
    }
  }

  TokenCursor cur_;
  SchemeFile file_;
  std::vector<Token> term_positions_;
};

}  // namespace

SchemeFile parse_scheme(std::string_view text) { return SchemeParser(text).parse(); }

std::string render_scheme(const SchemeFile& file) {
  std::ostringstream os;
  if (file.params) {
    os << "params";
    for (std::size_t i = 0; i < file.params->size(); ++i) os << (i ? ", " : " ") << symbol_name((*file.params)[i]);
    os << ";\n\n";
  }
  for (const auto& t : file.templates) {
    os << "template " << t.name << " for " << to_string(t.target) << " {\n";
    for (const auto& [o, c] : t.entries.entries()) os << "  (" << o.dt << ", " << o.dx << "): " << render(c) << ";\n";
    os << "}\n\n";
  }
  os << "scheme {\n";
  for (std::size_t i = 0; i < file.terms.size(); ++i) {
    os << (i ? "  + " : "  ") << "(" << render(file.terms[i].coefficient) << ") * " << file.terms[i].template_name
       << "\n";
  }
  os << "  = 0\n}\n";
  return os.str();
}

SchemeSpec to_scheme_spec(const SchemeFile& file) {
  SchemeSpec spec;
  for (const auto& term : file.terms) {
    const auto local = std::find_if(file.templates.begin(), file.templates.end(),
                                    [&](const DerivativeTemplate& t) { return t.name == term.template_name; });
    spec.terms.push_back({term.coefficient, local != file.templates.end() ? *local : builtin_template(term.template_name)});
  }
  return spec;
}

namespace {

LaurentPoly random_poly(std::mt19937_64& rng, const std::vector<SymbolId>& symbols) {
  std::uniform_int_distribution<int> nterms(1, 3), num(-9, 9), den(1, 6), ex(-2, 2);
  LaurentPoly p;
  for (int i = 0, n = nterms(rng); i < n; ++i) {
    int a = 0;
    while (a == 0) a = num(rng);
    Monomial m;
    for (SymbolId s : symbols) m[s] = ex(rng);
    p += LaurentPoly::term(Rational(a, den(rng)), m);
  }
  if (p.is_zero()) p = LaurentPoly(1);
  return p;
}

}  // namespace

SchemeFile random_scheme_file(std::mt19937_64& rng) {
  SchemeFile f;
  std::uniform_int_distribution<int> coin(0, 1), off(-2, 2), count(1, 3), tag_pick(0, 3), entries(1, 4);
  std::vector<SymbolId> symbols = {SymbolId::TimeStep, SymbolId::SpaceStep};
  if (coin(rng)) {
    std::vector<SymbolId> declared;
    if (coin(rng)) declared.push_back(SymbolId::Diffusivity);
    if (coin(rng)) declared.push_back(SymbolId::RelaxTime);
    symbols.insert(symbols.end(), declared.begin(), declared.end());
    f.params = declared;
  } else {
    symbols.push_back(SymbolId::Diffusivity);
    symbols.push_back(SymbolId::RelaxTime);
  }

  constexpr std::array<DerivativeTag, 4> tags = {DerivativeTag::Ut, DerivativeTag::Utt, DerivativeTag::Uxx,
                                                 DerivativeTag::Utxx};
  const int ntemplates = count(rng);
  for (int i = 0; i < ntemplates; ++i) {
    DerivativeTemplate t;
    t.name = "tmpl_" + std::to_string(i);
    t.target = i == 0 ? DerivativeTag::Ut : tags[static_cast<std::size_t>(tag_pick(rng))];
    // Random off-centre entries, then a centre entry that cancels their sum.
    for (int j = 0, n = entries(rng); j < n; ++j) {
      const GridOffset o{off(rng), off(rng)};
      if (o == GridOffset{0, 0}) continue;
      t.entries.add(o, random_poly(rng, symbols));
    }
    if (t.entries.empty()) t.entries.add({1, 0}, random_poly(rng, symbols));
    t.entries.add({0, 0}, -t.entries.total());
    f.templates.push_back(std::move(t));
  }

  const auto& builtins = builtin_template_names();
  std::uniform_int_distribution<std::size_t> pick_local(0, f.templates.size() - 1), pick_builtin(0, builtins.size() - 1);
  f.terms.push_back({random_poly(rng, symbols), f.templates.front().name});
  for (int i = 0, n = count(rng); i < n; ++i) {
    const std::string name = coin(rng) ? f.templates[pick_local(rng)].name : builtins[pick_builtin(rng)];
    f.terms.push_back({random_poly(rng, symbols), name});
  }
  return f;
}

}  // namespace microlim
