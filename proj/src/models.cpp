#include "microlim/models.hpp"

#include <stdexcept>

namespace microlim {

namespace {

LaurentPoly sym(SymbolId s, int power = 1) { return LaurentPoly::symbol(s, power); }
const LaurentPoly kD = sym(SymbolId::Diffusivity);
const LaurentPoly kTau = sym(SymbolId::RelaxTime);
const LaurentPoly kDx2 = sym(SymbolId::SpaceStep, 2);
const LaurentPoly kInvD = sym(SymbolId::Diffusivity, -1);

SchemeTerm term(const LaurentPoly& coeff, std::string_view name) { return {coeff, builtin_template(name)}; }

}  // namespace

std::string_view model_name(ModelId m) {
  switch (m) {
    case ModelId::StandardHeat: return "standard-heat";
    case ModelId::MaxwellCattaneo: return "maxwell-cattaneo";
    case ModelId::StandardHeatDff: return "standard-heat-dff";
    case ModelId::Symmetry: return "symmetry";
  }
  return "?";
}

std::optional<ModelId> model_from_name(std::string_view name) {
  for (ModelId m : kAllModels)
    if (model_name(m) == name) return m;
  return std::nullopt;
}

const ModelInfo& model_info(ModelId m) {
  static const std::array<ModelInfo, 4> infos = {{
      {ModelId::StandardHeat, "u_t = D*u_xx", false, std::nullopt},
      {ModelId::MaxwellCattaneo, "tau*u_tt + u_t = D*u_xx", true, Rational(1, 2)},
      {ModelId::StandardHeatDff, "u_t = D*u_xx", false, std::nullopt},
      {ModelId::Symmetry, "u_t = D*u_xx + (tau*D)*u_txx", true, Rational(1, 3)},
  }};
  return infos[static_cast<std::size_t>(m)];
}

void validate(ModelId m, const ModelParams& params) {
  const auto& info = model_info(m);
  if (params.D <= 0) throw std::invalid_argument("D must be positive");
  if (info.uses_tau) {
    if (!params.tau) throw std::invalid_argument(std::string(model_name(m)) + " requires tau");
    if (*params.tau <= 0) throw std::invalid_argument("tau must be positive");
  } else if (params.tau) {
    throw std::invalid_argument("tau is not a parameter of " + std::string(model_name(m)));
  }
}

SchemeSpec scheme_for(ModelId m) {
  switch (m) {
    case ModelId::StandardHeat:
      return {{term(1, "forward_euler_t"), term(-kD, "central_xx")}};
    case ModelId::MaxwellCattaneo:
      return {{term(kTau, "central_second_t"), term(1, "backward_euler_t"), term(-kD, "dufort_frankel_xx")}};
    case ModelId::StandardHeatDff:
      return {{term(1, "central_t"), term(-kD, "dufort_frankel_xx")}};
    case ModelId::Symmetry:
      return {{term(1, "nonstandard_t"), term(-kD, "central_xx"), term(-(kTau * kD), "forward_central_txx")}};
  }
  throw std::logic_error("unknown model");
}

ReductionReport reduce_model(ModelId m, std::optional<Rational> p) {
  if (!p) p = model_info(m).default_free_parameter;
  return reduce(assemble(scheme_for(m)), p);
}

ExpectedReduction expected_reduction(ModelId m) {
  using U = Unknown;
  const Rational half(1, 2), third(1, 3);
  switch (m) {
    case ModelId::StandardHeat:
      // p = dt D / dx^2 = 1/2
      return {half, Rational(1), {half, Rational(0), half, {{U::TimeStep, 1, LaurentPoly(half) * kInvD * kDx2}}, {}}};
    case ModelId::MaxwellCattaneo:
      return {half, Rational(2),
              {half, Rational(0), half,
               {{U::TimeStep, 1, 2 * kTau}, {U::SpaceStepSq, 1, 4 * kD * kTau}},
               kTau * kD}};
    case ModelId::StandardHeatDff:
      // 2 dt D / dx^2 = 1
      return {std::nullopt, Rational(2),
              {half, Rational(0), half, {{U::TimeStep, 1, LaurentPoly(half) * kInvD * kDx2}}, {}}};
    case ModelId::Symmetry:
      // 3 tau D / dx^2 = 1, dt = 2 tau
      return {third, Rational(3),
              {third, third, third,
               {{U::TimeStep, 1, 2 * kTau}, {U::SpaceStepSq, 1, 3 * kD * kTau}},
               kTau * kD}};
  }
  throw std::logic_error("unknown model");
}

}  // namespace microlim
