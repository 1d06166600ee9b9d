#include "microlim/stencil.hpp"

#include <algorithm>

#include "microlim/errors.hpp"

namespace microlim {

std::string to_string(GridOffset o) { return "(" + std::to_string(o.dt) + "," + std::to_string(o.dx) + ")"; }

Stencil::Stencil(const Entries& entries) {
  for (const auto& [o, c] : entries) add(o, c);
}

LaurentPoly Stencil::at(GridOffset o) const {
  auto it = entries_.find(o);
  return it == entries_.end() ? LaurentPoly{} : it->second;
}

void Stencil::add(GridOffset o, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(o, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

Stencil& Stencil::operator+=(const Stencil& rhs) {
  for (const auto& [o, c] : rhs.entries_) add(o, c);
  return *this;
}

Stencil& Stencil::operator*=(const LaurentPoly& k) {
  Entries scaled;
  for (const auto& [o, c] : entries_) {
    LaurentPoly v = c * k;
    if (!v.is_zero()) scaled.emplace(o, std::move(v));
  }
  entries_ = std::move(scaled);
  return *this;
}

Stencil Stencil::substituted(const Bindings& b) const {
  Stencil out;
  for (const auto& [o, c] : entries_) out.add(o, substitute(c, b));
  return out;
}

LaurentPoly Stencil::total() const {
  LaurentPoly sum;
  for (const auto& [o, c] : entries_) sum += c;
  return sum;
}

std::string_view to_string(DerivativeTag t) {
  switch (t) {
    case DerivativeTag::Ut: return "ut";
    case DerivativeTag::Utt: return "utt";
    case DerivativeTag::Uxx: return "uxx";
    case DerivativeTag::Utxx: return "utxx";
  }
  return "?";
}

std::optional<DerivativeTag> derivative_tag_from_name(std::string_view name) {
  for (auto t : {DerivativeTag::Ut, DerivativeTag::Utt, DerivativeTag::Uxx, DerivativeTag::Utxx})
    if (to_string(t) == name) return t;
  return std::nullopt;
}

bool is_time_derivative(DerivativeTag t) { return t != DerivativeTag::Uxx; }

bool SchemeSpec::is_valid() const {
  return std::any_of(terms.begin(), terms.end(),
                     [](const SchemeTerm& t) { return is_time_derivative(t.templ.target); });
}

namespace {

const LaurentPoly kDt = LaurentPoly::symbol(SymbolId::TimeStep);
const LaurentPoly kInvDt = LaurentPoly::symbol(SymbolId::TimeStep, -1);
const LaurentPoly kInvDt2 = LaurentPoly::symbol(SymbolId::TimeStep, -2);
const LaurentPoly kInvDx2 = LaurentPoly::symbol(SymbolId::SpaceStep, -2);

LaurentPoly frac(int num, int den) { return LaurentPoly(Rational(num, den)); }

DerivativeTemplate make(std::string name, DerivativeTag tag,
                        std::initializer_list<std::pair<GridOffset, LaurentPoly>> entries) {
  Stencil s;
  for (const auto& [o, c] : entries) s.add(o, c);
  return {std::move(name), tag, std::move(s)};
}

std::vector<DerivativeTemplate> build_catalog() {
  using T = DerivativeTag;
  const LaurentPoly txx = kInvDt * kInvDx2;
  return {
      // (u^{k+1} - u^k) / dt
      make("forward_euler_t", T::Ut, {{{1, 0}, kInvDt}, {{0, 0}, -kInvDt}}),
      // (u^k - u^{k-1}) / dt
      make("backward_euler_t", T::Ut, {{{0, 0}, kInvDt}, {{-1, 0}, -kInvDt}}),
      // (u^{k+1} - u^{k-1}) / (2 dt)
      make("central_t", T::Ut, {{{1, 0}, frac(1, 2) * kInvDt}, {{-1, 0}, frac(-1, 2) * kInvDt}}),
      // (u^{k+1} - 2u^k + u^{k-1}) / dt^2
      make("central_second_t", T::Utt, {{{1, 0}, kInvDt2}, {{0, 0}, -2 * kInvDt2}, {{-1, 0}, kInvDt2}}),
      // (u_{m+1} - 2u_m + u_{m-1}) / dx^2
      make("central_xx", T::Uxx, {{{0, 1}, kInvDx2}, {{0, 0}, -2 * kInvDx2}, {{0, -1}, kInvDx2}}),
      // (u_{m+1}^k - u_m^{k+1} - u_m^{k-1} + u_{m-1}^k) / dx^2
      make("dufort_frankel_xx", T::Uxx,
           {{{0, 1}, kInvDx2}, {{1, 0}, -kInvDx2}, {{-1, 0}, -kInvDx2}, {{0, -1}, kInvDx2}}),
      // ((u_{m+1}^{k+1} + u_m^{k+1} + u_{m-1}^{k+1}) / 3 - u_m^k) / dt
      make("nonstandard_t", T::Ut,
           {{{1, 1}, frac(1, 3) * kInvDt}, {{1, 0}, frac(1, 3) * kInvDt}, {{1, -1}, frac(1, 3) * kInvDt},
            {{0, 0}, -kInvDt}}),
      // forward Euler in t of the central second difference in x. The trailing u_{m-1}^k
      // weight is -1 (symmetric); a -2 there would not sum to zero.
      make("forward_central_txx", T::Utxx,
           {{{1, 1}, txx}, {{1, 0}, -2 * txx}, {{1, -1}, txx}, {{0, 1}, -txx}, {{0, 0}, 2 * txx},
            {{0, -1}, -txx}}),
  };
}

const std::vector<DerivativeTemplate>& catalog() {
  static const std::vector<DerivativeTemplate> c = build_catalog();
  return c;
}

}  // namespace

const std::vector<std::string>& builtin_template_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& t : catalog()) n.push_back(t.name);
    return n;
  }();
  return names;
}

bool is_builtin_template(std::string_view name) {
  const auto& c = catalog();
  return std::any_of(c.begin(), c.end(), [&](const auto& t) { return t.name == name; });
}

DerivativeTemplate builtin_template(std::string_view name) {
  for (const auto& t : catalog())
    if (t.name == name) return t;
  throw UnknownTemplate("unknown template '" + std::string(name) + "'");
}

Stencil assemble(const SchemeSpec& spec) {
  Stencil out;
  for (const auto& term : spec.terms) {
    if (term.coefficient.is_zero()) continue;
    out += term.coefficient * term.templ.entries;
  }
  return out;
}

nlohmann::json to_json(const Stencil& s) {
  auto arr = nlohmann::json::array();
  for (const auto& [o, c] : s.entries()) arr.push_back({{"dt", o.dt}, {"dx", o.dx}, {"coeff", render(c)}});
  return arr;
}

Stencil stencil_from_json(const nlohmann::json& j) {
  Stencil s;
  for (const auto& e : j) s.add({e.at("dt").get<int>(), e.at("dx").get<int>()}, parse_poly(e.at("coeff").get<std::string>()));
  return s;
}

}  // namespace microlim
