#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include "microlim/models.hpp"

using namespace microlim;

namespace {
LaurentPoly P(std::string_view s) { return parse_poly(s); }
}  // namespace

TEST_CASE("names") {
  for (ModelId m : kAllModels) CHECK(model_from_name(model_name(m)) == m);
  CHECK(model_name(ModelId::StandardHeatDff) == "standard-heat-dff");
  CHECK_FALSE(model_from_name("guyer-krumhansl").has_value());
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(ModelId::StandardHeat, {Rational(2), std::nullopt}));
  CHECK_THROWS_AS(validate(ModelId::StandardHeat, {Rational(0), std::nullopt}), std::invalid_argument);
  CHECK_THROWS_WITH(validate(ModelId::StandardHeat, {Rational(1), Rational(1)}),
                    doctest::Contains("tau is not a parameter of standard-heat"));
  CHECK_THROWS_AS(validate(ModelId::MaxwellCattaneo, {Rational(1), std::nullopt}), std::invalid_argument);
  CHECK_THROWS_AS(validate(ModelId::Symmetry, {Rational(1), Rational(-1)}), std::invalid_argument);
  CHECK_NOTHROW(validate(ModelId::Symmetry, {Rational(1), Rational(1, 100)}));
}

TEST_CASE("schemes use the intended templates") {
  const auto names = [](ModelId m) {
    std::vector<std::string> out;
    for (const auto& t : scheme_for(m).terms) out.push_back(t.templ.name);
    return out;
  };
  CHECK(names(ModelId::StandardHeat) == std::vector<std::string>{"forward_euler_t", "central_xx"});
  CHECK(names(ModelId::MaxwellCattaneo) ==
        std::vector<std::string>{"central_second_t", "backward_euler_t", "dufort_frankel_xx"});
  CHECK(names(ModelId::StandardHeatDff) == std::vector<std::string>{"central_t", "dufort_frankel_xx"});
  CHECK(names(ModelId::Symmetry) == std::vector<std::string>{"nonstandard_t", "central_xx", "forward_central_txx"});
  for (ModelId m : kAllModels) CHECK(scheme_for(m).is_valid());
  CHECK(model_info(ModelId::MaxwellCattaneo).uses_tau);
  CHECK_FALSE(model_info(ModelId::StandardHeatDff).uses_tau);
}

TEST_CASE("every model reduces to its expected walk") {
  for (ModelId m : kAllModels) {
    CAPTURE(model_name(m));
    const ExpectedReduction want = expected_reduction(m);
    const ReductionReport r = reduce_model(m, want.free_parameter);
    REQUIRE(r.ok());
    CHECK(r.form->p_plus == want.form.p_plus);
    CHECK(r.form->p_zero == want.form.p_zero);
    CHECK(r.form->p_minus == want.form.p_minus);
    CHECK(r.form->constraints == want.form.constraints);
    CHECK(r.form->length_scale_sq == want.form.length_scale_sq);
    CHECK(r.normalizer == LaurentPoly(want.normalizer));
  }
}

TEST_CASE("defaults select the classical member") {
  CHECK(reduce_model(ModelId::MaxwellCattaneo).ok());
  CHECK(reduce_model(ModelId::Symmetry).ok());
  CHECK(reduce_model(ModelId::StandardHeatDff).ok());
  CHECK_FALSE(reduce_model(ModelId::StandardHeat).ok());
}

TEST_CASE("symmetry stencil times 3 dt, coefficient by coefficient") {
  const Stencil s = P("3*dt") * assemble(scheme_for(ModelId::Symmetry));
  CHECK(s.at({1, 1}) == P("1 - 3*tau*D/dx^2"));
  CHECK(s.at({1, -1}) == P("1 - 3*tau*D/dx^2"));
  CHECK(s.at({1, 0}) == P("1 + 6*tau*D/dx^2"));
  CHECK(s.at({0, 1}) == P("-(3*dt*D/dx^2 - 3*tau*D/dx^2)"));
  CHECK(s.at({0, -1}) == P("-(3*dt*D/dx^2 - 3*tau*D/dx^2)"));
  CHECK(s.at({0, 0}) == P("-(3 - 6*dt*D/dx^2 + 6*tau*D/dx^2)"));
  CHECK(s.entries().size() == 6);
}

TEST_CASE("Maxwell-Cattaneo normalizer before scaling") {
  // u_m^{k+1} coefficient over its leading term: 1 + (D/tau)(dt/dx)^2, which is 2 once
  // dt = 2 tau and dx^2 = 4 D tau.
  const Stencil s = assemble(scheme_for(ModelId::MaxwellCattaneo));
  const LaurentPoly c = s.at({1, 0}) * P("dt^2/tau");
  CHECK(c == P("1 + D*dt^2/(tau*dx^2)"));
  CHECK(eval(c, symbol_values(3, 3, 6, 6)) == Rational(2));
}
