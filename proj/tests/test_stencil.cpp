#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include "generators.hpp"
#include "microlim/errors.hpp"
#include "microlim/stencil.hpp"

using namespace microlim;

namespace {

LaurentPoly P(std::string_view s) { return parse_poly(s); }

// Moment sum_o c(o) * (i dt)^a * (j dx)^b of a template, i.e. the template applied to
// u(t, x) = t^a x^b around (0, 0). This is the Taylor-consistency oracle.
LaurentPoly moment(const Stencil& s, int a, int b) {
  LaurentPoly acc;
  const LaurentPoly dt = LaurentPoly::symbol(SymbolId::TimeStep), dx = LaurentPoly::symbol(SymbolId::SpaceStep);
  for (const auto& [o, c] : s.entries()) acc += c * (LaurentPoly(o.dt) * dt).pow(a) * (LaurentPoly(o.dx) * dx).pow(b);
  return acc;
}

}  // namespace

TEST_CASE("catalog contents") {
  const auto& names = builtin_template_names();
  CHECK(names.size() == 8);
  for (const auto& n : names) {
    CHECK(is_builtin_template(n));
    const auto t = builtin_template(n);
    CHECK(t.name == n);
    CHECK(t.is_consistent());
  }
  CHECK_FALSE(is_builtin_template("upwind_x"));
  CHECK_THROWS_AS(builtin_template("upwind_x"), UnknownTemplate);
}

TEST_CASE("each template approximates its derivative") {
  for (const auto& n : builtin_template_names()) {
    const auto t = builtin_template(n);
    CAPTURE(n);
    CHECK(moment(t.entries, 0, 0).is_zero());
    switch (t.target) {
      case DerivativeTag::Ut:
        CHECK(moment(t.entries, 1, 0) == LaurentPoly(1));
        break;
      case DerivativeTag::Utt:
        CHECK(moment(t.entries, 2, 0) == LaurentPoly(2));
        CHECK(moment(t.entries, 1, 0).is_zero());
        break;
      case DerivativeTag::Uxx:
        CHECK(moment(t.entries, 0, 1).is_zero());
        // DuFort-Frankel carries a (dt/dx)^2 term on u_tt; pure-space stencils give exactly 2.
        CHECK(moment(t.entries, 0, 2) == LaurentPoly(2));
        break;
      case DerivativeTag::Utxx:
        CHECK(moment(t.entries, 1, 2) == LaurentPoly(2));
        CHECK(moment(t.entries, 0, 2).is_zero());
        break;
    }
  }
}

TEST_CASE("specific template entries") {
  const auto ns = builtin_template("nonstandard_t").entries;
  CHECK(ns.at({1, 1}) == P("1/3/dt"));
  CHECK(ns.at({1, 0}) == P("1/3/dt"));
  CHECK(ns.at({1, -1}) == P("1/3/dt"));
  CHECK(ns.at({0, 0}) == P("-1/dt"));
  const auto txx = builtin_template("forward_central_txx").entries;
  CHECK(txx.at({0, -1}) == P("-1/(dt*dx^2)"));
  CHECK(txx.at({0, 0}) == P("2/(dt*dx^2)"));
  const auto dff = builtin_template("dufort_frankel_xx").entries;
  CHECK(dff.at({1, 0}) == P("-dx^-2"));
  CHECK(dff.at({0, 0}).is_zero());
  CHECK(dff.entries().size() == 4);
}

TEST_CASE("assemble") {
  const LaurentPoly D = LaurentPoly::symbol(SymbolId::Diffusivity);
  SchemeSpec heat{{{1, builtin_template("forward_euler_t")}, {-D, builtin_template("central_xx")}}};
  CHECK(heat.is_valid());
  const Stencil s = assemble(heat);
  CHECK(s.at({1, 0}) == P("1/dt"));
  CHECK(s.at({0, 0}) == P("-1/dt + 2*D/dx^2"));
  CHECK(s.at({0, 1}) == P("-D/dx^2"));
  CHECK(s.at({0, -1}) == P("-D/dx^2"));
  CHECK(s.entries().size() == 4);

  SchemeSpec space_only{{{1, builtin_template("central_xx")}}};
  CHECK_FALSE(space_only.is_valid());
  CHECK_FALSE(SchemeSpec{}.is_valid());

  // zero coefficients contribute nothing
  SchemeSpec padded = heat;
  padded.terms.push_back({0, builtin_template("central_t")});
  CHECK(assemble(padded) == s);

  // linear in the coefficients
  gen::Gen g(21);
  for (int i = 0; i < 50; ++i) {
    const LaurentPoly a = g.poly(2, 2), b = g.poly(2, 2);
    const auto t = builtin_template("central_second_t");
    CHECK(assemble({{{a + b, t}}}) == assemble({{{a, t}, {b, t}}}));
    CHECK(assemble({{{a * b, t}}}) == a * assemble({{{b, t}}}));
  }
}

TEST_CASE("stencil algebra") {
  Stencil s;
  s.add({0, 1}, P("dt"));
  s.add({0, 1}, P("-dt"));
  CHECK(s.empty());
  s.add({1, 0}, P("dt^-1"));
  const Stencil twice = s + s;
  CHECK(twice.at({1, 0}) == P("2/dt"));
  CHECK((P("dt") * s).at({1, 0}) == LaurentPoly(1));
  CHECK(s.substituted({{SymbolId::TimeStep, {1, P("2*tau")}}}).at({1, 0}) == P("1/2/tau"));
  CHECK(to_string(GridOffset{-1, 1}) == "(-1,1)");
}

TEST_CASE("json round trip") {
  gen::Gen g(22);
  for (int i = 0; i < 100; ++i) {
    Stencil s;
    for (int k = 0; k < 5; ++k) s.add({g.integer(-2, 2), g.integer(-2, 2)}, g.poly(3, 2));
    CHECK(stencil_from_json(to_json(s)) == s);
  }
  const auto j = to_json(builtin_template("central_xx").entries);
  REQUIRE(j.is_array());
  CHECK(j[0]["dt"] == 0);
  CHECK(j[0]["dx"] == -1);
  CHECK(j[0]["coeff"] == "dx^-2");
}

TEST_CASE("derivative tags") {
  for (auto t : {DerivativeTag::Ut, DerivativeTag::Utt, DerivativeTag::Uxx, DerivativeTag::Utxx}) {
    CHECK(derivative_tag_from_name(to_string(t)) == t);
  }
  CHECK_FALSE(derivative_tag_from_name("ux").has_value());
  CHECK(is_time_derivative(DerivativeTag::Utxx));
  CHECK_FALSE(is_time_derivative(DerivativeTag::Uxx));
}
