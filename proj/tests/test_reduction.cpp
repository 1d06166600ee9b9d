#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include "generators.hpp"
#include "microlim/errors.hpp"
#include "microlim/models.hpp"
#include "microlim/reduction.hpp"

using namespace microlim;

namespace {

LaurentPoly P(std::string_view s) { return parse_poly(s); }

Stencil stencil(std::initializer_list<std::pair<GridOffset, const char*>> entries) {
  Stencil s;
  for (const auto& [o, c] : entries) s.add(o, P(c));
  return s;
}

ReductionFailureKind failure_of(const ReductionReport& r) {
  REQUIRE(r.failure.has_value());
  CHECK_FALSE(r.ok());
  return r.failure->kind;
}

Stencil model_stencil(ModelId m) { return assemble(scheme_for(m)); }

}  // namespace

TEST_CASE("standard heat: family p = dt D / dx^2") {
  const ReductionReport r = reduce(model_stencil(ModelId::StandardHeat), Rational(1, 2));
  REQUIRE(r.ok());
  CHECK(r.form->p_plus == Rational(1, 2));
  CHECK(r.form->p_zero == 0);
  REQUIRE(r.form->constraints.size() == 1);
  CHECK(r.form->constraints[0].unknown == Unknown::TimeStep);
  CHECK(r.form->constraints[0].value == P("dx^2/(2*D)"));
  REQUIRE(r.symbolic_weights.has_value());
  CHECK((*r.symbolic_weights)[0] == P("dt*D/dx^2"));
  CHECK((*r.symbolic_weights)[1] == P("1 - 2*dt*D/dx^2"));
  CHECK(verify_report(r));
  CHECK_THROWS_AS(derived_scales(*r.form), UnderConstrained);

  const ReductionReport q = reduce(model_stencil(ModelId::StandardHeat), Rational(1, 6));
  REQUIRE(q.ok());
  CHECK(q.form->p_zero == Rational(2, 3));
  CHECK(q.form->constraints[0].value == P("dx^2/(6*D)"));

  CHECK(failure_of(reduce(model_stencil(ModelId::StandardHeat))) == ReductionFailureKind::FreeParameterRequired);
}

TEST_CASE("Maxwell-Cattaneo") {
  const ReductionReport r = reduce(model_stencil(ModelId::MaxwellCattaneo), Rational(1, 2));
  REQUIRE(r.ok());
  CHECK(r.normalizer == LaurentPoly(2));
  CHECK(r.form->p_plus == Rational(1, 2));
  CHECK(r.form->p_zero == 0);
  REQUIRE(r.resolved.size() == 2);
  CHECK(render(r.resolved[0]) == "dt = 2*tau");
  CHECK(render(r.resolved[1]) == "dx^2 = 4*D*tau");
  CHECK(r.form->length_scale_sq == P("tau*D"));
  const DerivedScales s = derived_scales(*r.form);
  CHECK(s.diffusivity_check == P("D"));
  CHECK(s.dt == P("2*tau"));
  CHECK(s.dx_sq == P("4*D*tau"));
  CHECK(verify_report(r));

  const ReductionReport free = reduce(model_stencil(ModelId::MaxwellCattaneo));
  CHECK(failure_of(free) == ReductionFailureKind::FreeParameterRequired);
  CHECK(free.failure->message.find("1 - tau*dt^-1") != std::string::npos);

  // Other members of the family: p = 1 - tau/dt, so p = 1/4 gives dt = 4/3 tau.
  const ReductionReport quarter = reduce(model_stencil(ModelId::MaxwellCattaneo), Rational(1, 4));
  REQUIRE(quarter.ok());
  CHECK(quarter.resolved[0].value == P("4/3*tau"));
  CHECK(quarter.form->p_zero == Rational(1, 2));
  CHECK(verify_report(quarter));
}

TEST_CASE("DuFort-Frankel heat has no free parameter") {
  const ReductionReport r = reduce(model_stencil(ModelId::StandardHeatDff));
  REQUIRE(r.ok());
  CHECK(r.normalizer == LaurentPoly(2));
  CHECK(r.form->constraints[0].value == P("dx^2/(2*D)"));
  CHECK(failure_of(reduce(model_stencil(ModelId::StandardHeatDff), Rational(1, 2))) ==
        ReductionFailureKind::FreeParameterForbidden);
}

TEST_CASE("symmetry model") {
  const ReductionReport r = reduce(model_stencil(ModelId::Symmetry), Rational(1, 3));
  REQUIRE(r.ok());
  CHECK(r.normalizer == LaurentPoly(3));
  CHECK(r.form->p_zero == Rational(1, 3));
  CHECK(render(r.resolved[0]) == "dt = 2*tau");
  CHECK(render(r.resolved[1]) == "dx^2 = 3*D*tau");
  CHECK(derived_scales(*r.form).diffusivity_check == P("3/4*D"));
  CHECK(verify_report(r));
}

TEST_CASE("p outside (0, 1/2] is rejected up front") {
  for (const Rational& p : {Rational(0), Rational(3, 5), Rational(-1), Rational(1)}) {
    CHECK_THROWS_WITH_AS(reduce(model_stencil(ModelId::StandardHeat), p),
                         doctest::Contains("p must lie in (0, 1/2]"), std::invalid_argument);
  }
}

TEST_CASE("failure kinds") {
  // leapfrog in time with a plain Laplacian: the u^{k-1} coefficient is a nonzero constant
  const LaurentPoly D = P("D");
  const Stencil leapfrog =
      assemble({{{1, builtin_template("central_t")}, {-D, builtin_template("central_xx")}}});
  CHECK(failure_of(reduce(leapfrog)) == ReductionFailureKind::UnsolvableConstraint);

  CHECK(failure_of(reduce(stencil({{{1, 0}, "1"}, {{0, 1}, "-1"}, {{0, -1}, "-1"}, {{0, 0}, "1"}}))) ==
        ReductionFailureKind::PositivityViolation);
  CHECK(failure_of(reduce(stencil({{{1, 0}, "1"}, {{0, 1}, "-2/3"}, {{0, -1}, "-1/3"}}))) ==
        ReductionFailureKind::AsymmetricWeights);
  CHECK(failure_of(reduce(stencil({{{1, 0}, "1"}, {{0, 1}, "-1/4"}, {{0, -1}, "-1/4"}}))) ==
        ReductionFailureKind::WeightSumMismatch);
  CHECK(failure_of(reduce(stencil({{{1, 0}, "1"}, {{-1, 0}, "1 - dx"}, {{0, 0}, "-1"}}))) ==
        ReductionFailureKind::OddSpaceExponent);
  CHECK(failure_of(reduce(stencil({{{1, 0}, "1"}, {{2, 0}, "dt"}, {{0, 0}, "-1"}}))) ==
        ReductionFailureKind::UnsupportedStencil);
  CHECK(failure_of(reduce(stencil({{{0, 1}, "1"}, {{0, -1}, "-1"}}))) == ReductionFailureKind::UnsupportedStencil);
  // a dt-only constraint with no admissible positive solution
  CHECK(failure_of(reduce(stencil({{{1, 0}, "1"}, {{-1, 0}, "1 + tau/dt"}, {{0, 1}, "-1/2"}, {{0, -1}, "-1/2"}}))) ==
        ReductionFailureKind::UnsolvableConstraint);
}

TEST_CASE("the trivial walk needs no constraints") {
  const ReductionReport r = reduce(stencil({{{1, 0}, "2"}, {{0, 1}, "-1"}, {{0, -1}, "-1"}}));
  REQUIRE(r.ok());
  CHECK(r.form->p_plus == Rational(1, 2));
  CHECK(r.form->constraints.empty());
  CHECK(verify_report(r));
}

TEST_CASE("reduction is invariant under rescaling the stencil") {
  gen::Gen g(31);
  for (ModelId m : kAllModels) {
    const auto want = expected_reduction(m);
    for (int i = 0; i < 20; ++i) {
      const LaurentPoly k = LaurentPoly::term(g.coin() ? g.positive_rational() : -g.positive_rational(), g.monomial(2));
      const ReductionReport r = reduce(k * model_stencil(m), want.free_parameter);
      REQUIRE(r.ok());
      CHECK(r.form->p_plus == want.form.p_plus);
      CHECK(r.form->p_zero == want.form.p_zero);
      CHECK(r.form->constraints == want.form.constraints);
      CHECK(r.normalizer == LaurentPoly(want.normalizer));
    }
  }
}

TEST_CASE("solve order does not change the resolved walk") {
  for (ModelId m : kAllModels) {
    const auto p = expected_reduction(m).free_parameter;
    const ReductionReport a = reduce(model_stencil(m), p, {SolveOrder::TimeStepFirst});
    const ReductionReport b = reduce(model_stencil(m), p, {SolveOrder::SpaceStepFirst});
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    // the solved forms may differ (dt = dx^2/(2D) vs dx^2 = 2 D dt) but each set implies the other
    const auto implied = [](const RandomWalkForm& from, const RandomWalkForm& to) {
      const Bindings given = to_bindings(from.constraints);
      for (const auto& c : to.constraints) {
        const LaurentPoly lhs = c.unknown == Unknown::TimeStep ? LaurentPoly::symbol(SymbolId::TimeStep, c.power)
                                                               : LaurentPoly::symbol(SymbolId::SpaceStep, 2 * c.power);
        if (!substitute(lhs - c.value, given).is_zero()) return false;
      }
      return true;
    };
    CHECK(implied(*a.form, *b.form));
    CHECK(implied(*b.form, *a.form));
    CHECK(a.form->p_zero == b.form->p_zero);
  }
}

TEST_CASE("json report") {
  const auto j = to_json(reduce(model_stencil(ModelId::MaxwellCattaneo), Rational(1, 2)), "maxwell-cattaneo");
  CHECK(j["model"] == "maxwell-cattaneo");
  CHECK(j["bindings"]["dt"] == "2*tau");
  CHECK(j["bindings"]["dx2"] == "4*D*tau");
  CHECK(j["weights"]["plus"] == "1/2");
  CHECK(j["weights"]["zero"] == "0");
  CHECK(j["normalizer"] == "2");
  CHECK(j["scales"]["length_scale_sq"] == "D*tau");
  CHECK(j["failure"].is_null());
  CHECK(j["eliminated"].size() == 2);

  const auto bad = to_json(reduce(model_stencil(ModelId::StandardHeat)), "standard-heat");
  CHECK(bad["failure"]["kind"] == "FreeParameterRequired");
  CHECK(bad["weights"].is_null());
}
