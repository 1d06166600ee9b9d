#include "microlim/reduction.hpp"

#include <algorithm>
#include <stdexcept>

#include "microlim/errors.hpp"

namespace microlim {

std::string_view to_string(Unknown u) { return u == Unknown::TimeStep ? "dt" : "dx^2"; }

std::string lhs_name(const SolvedBinding& b) {
  if (b.unknown == Unknown::TimeStep) return b.power == 1 ? "dt" : "dt^" + std::to_string(b.power);
  return "dx^" + std::to_string(2 * b.power);
}

std::string render(const SolvedBinding& b) { return lhs_name(b) + " = " + render(b.value); }

Bindings to_bindings(const std::vector<SolvedBinding>& solved) {
  Bindings out;
  for (const auto& s : solved) {
    if (s.unknown == Unknown::TimeStep)
      out[SymbolId::TimeStep] = Binding{s.power, s.value};
    else
      out[SymbolId::SpaceStep] = Binding{2 * s.power, s.value};
  }
  return out;
}

std::string_view to_string(ReductionFailureKind k) {
  switch (k) {
    case ReductionFailureKind::UnsolvableConstraint: return "UnsolvableConstraint";
    case ReductionFailureKind::PositivityViolation: return "PositivityViolation";
    case ReductionFailureKind::OddSpaceExponent: return "OddSpaceExponent";
    case ReductionFailureKind::FreeParameterRequired: return "FreeParameterRequired";
    case ReductionFailureKind::FreeParameterForbidden: return "FreeParameterForbidden";
    case ReductionFailureKind::AsymmetricWeights: return "AsymmetricWeights";
    case ReductionFailureKind::WeightSumMismatch: return "WeightSumMismatch";
    case ReductionFailureKind::UnsupportedStencil: return "UnsupportedStencil";
  }
  return "ReductionFailure";
}

namespace {

using Kind = ReductionFailureKind;

constexpr GridOffset kNext{1, 0};
constexpr GridOffset kRight{0, 1};
constexpr GridOffset kCenter{0, 0};
constexpr GridOffset kLeft{0, -1};

// Fixed elimination order: the u_m^{k-1} level first, then the two diagonal k+1 entries.
constexpr std::array<GridOffset, 3> kEliminationOrder = {GridOffset{-1, 0}, GridOffset{1, 1}, GridOffset{1, -1}};

bool in_walk_support(GridOffset o) { return o == kNext || o == kRight || o == kCenter || o == kLeft; }

bool is_supported(GridOffset o) {
  return in_walk_support(o) || std::find(kEliminationOrder.begin(), kEliminationOrder.end(), o) != kEliminationOrder.end();
}

struct Isolation {
  std::optional<SolvedBinding> binding;
  std::optional<ReductionFailure> failure;
};

SolvedBinding normalized(SolvedBinding b) {
  if (b.power == -1 && b.value.is_monomial()) {
    b.value = b.value.inverse();
    b.power = 1;
  }
  return b;
}

// Solves eq = 0 as c*M(unknown) + R = 0 with R free of the unknown.
Isolation isolate(const LaurentPoly& eq, SolveOrder order) {
  if (const auto c = eq.constant_value()) {
    return {std::nullopt, ReductionFailure{Kind::UnsolvableConstraint,
                                           "nonzero constant " + to_string(*c) + " cannot be zeroed by any dt, dx"}};
  }
  const std::array<Unknown, 2> unknowns = order == SolveOrder::TimeStepFirst
                                              ? std::array{Unknown::TimeStep, Unknown::SpaceStepSq}
                                              : std::array{Unknown::SpaceStepSq, Unknown::TimeStep};
  for (Unknown u : unknowns) {
    const SymbolId sym = u == Unknown::TimeStep ? SymbolId::TimeStep : SymbolId::SpaceStep;
    std::optional<std::pair<Monomial, Rational>> hit;
    int count = 0;
    for (const auto& [m, c] : eq.terms()) {
      if (m[sym] != 0) {
        ++count;
        hit.emplace(m, c);
      }
    }
    if (count != 1) continue;
    const int e = hit->first[sym];
    int power = 0;
    if (u == Unknown::TimeStep) {
      if (e != 1 && e != -1) continue;
      power = e;
    } else {
      if (e % 2 != 0) {
        return {std::nullopt, ReductionFailure{Kind::OddSpaceExponent,
                                               "constraint " + render(eq) + " = 0 requires dx^" + std::to_string(e)}};
      }
      if (e != 2 && e != -2) continue;
      power = e / 2;
    }
    Monomial cofactor = hit->first;
    cofactor[sym] = 0;
    const LaurentPoly term = LaurentPoly::term(hit->second, hit->first);
    const LaurentPoly rest = eq - term;
    const LaurentPoly value = -rest * LaurentPoly::term(hit->second, cofactor).inverse();
    return {normalized(SolvedBinding{u, power, value}), std::nullopt};
  }
  return {std::nullopt, ReductionFailure{Kind::UnsolvableConstraint,
                                         "constraint " + render(eq) + " = 0 is not isolatable for dt or dx^2"}};
}

std::optional<Rational> constant_ratio(const LaurentPoly& num, const LaurentPoly& den) {
  if (num.is_zero()) return Rational(0);
  if (den.is_zero()) return std::nullopt;
  const auto [mn, cn] = num.leading_term();
  const auto [md, cd] = den.leading_term();
  if (mn != md) return std::nullopt;
  const Rational lambda = cn / cd;
  if (num - LaurentPoly(lambda) * den != LaurentPoly{}) return std::nullopt;
  return lambda;
}

bool all_positive(const LaurentPoly& p) {
  if (p.is_zero()) return false;
  return std::all_of(p.terms().begin(), p.terms().end(), [](const auto& kv) { return kv.second > 0; });
}

bool fully_constrained(const SolvedBinding& b) {
  return b.power == 1 && !b.value.depends_on(SymbolId::TimeStep) && !b.value.depends_on(SymbolId::SpaceStep);
}

class Reducer {
 public:
  Reducer(ReductionReport& rep, SolveOrder order) : rep_(rep), order_(order) {}

  // Returns false (with rep_.failure set) when a step fails.
  bool solve_step(ConstraintStep step) {
    Isolation iso = isolate(step.equation, order_);
    if (iso.failure) {
      rep_.steps.push_back(std::move(step));
      return fail(std::move(*iso.failure));
    }
    step.solved = *iso.binding;
    rep_.steps.push_back(step);
    rep_.bindings.push_back(*iso.binding);
    try {
      const Bindings b = to_bindings({*iso.binding});
      for (auto& r : rep_.resolved) {
        r.value = substitute(r.value, b);
        r = normalized(r);
      }
    } catch (const IndivisibleExponent& e) {
      return fail({Kind::OddSpaceExponent, e.what()});
    } catch (const NonInvertibleSubstitution& e) {
      return fail({Kind::UnsolvableConstraint, e.what()});
    }
    rep_.resolved.push_back(*iso.binding);
    std::stable_sort(rep_.resolved.begin(), rep_.resolved.end(),
                     [](const auto& a, const auto& b) { return a.unknown < b.unknown; });
    return true;
  }

  bool apply(const LaurentPoly& p, LaurentPoly& out) {
    try {
      out = substitute(p, to_bindings(rep_.resolved));
      return true;
    } catch (const IndivisibleExponent& e) {
      return fail({Kind::OddSpaceExponent, e.what()});
    } catch (const NonInvertibleSubstitution& e) {
      return fail({Kind::UnsolvableConstraint, e.what()});
    }
  }

  bool fail(ReductionFailure f) {
    rep_.failure = std::move(f);
    return false;
  }

 private:
  ReductionReport& rep_;
  SolveOrder order_;
};

}  // namespace

ReductionReport reduce(const Stencil& st, std::optional<Rational> free_parameter, ReduceOptions options) {
  if (free_parameter && (*free_parameter <= 0 || *free_parameter > Rational(1, 2))) {
    throw std::invalid_argument("p must lie in (0, 1/2], got " + to_string(*free_parameter));
  }

  ReductionReport rep;
  rep.input = st;
  rep.free_parameter = free_parameter;
  Reducer reducer(rep, options.order);

  for (const auto& [o, c] : st.entries()) {
    if (!is_supported(o)) {
      reducer.fail({Kind::UnsupportedStencil, "offset " + to_string(o) + " is outside the reducible support"});
      return rep;
    }
  }
  const LaurentPoly lead = st.at(kNext);
  if (lead.is_zero()) {
    reducer.fail({Kind::UnsupportedStencil, "coefficient of u_m^{k+1} is identically zero"});
    return rep;
  }
  {
    const auto [m, c] = lead.leading_term();
    rep.scale = LaurentPoly::term(c, m);
  }
  const Stencil scaled = rep.scale.inverse() * st;

  for (GridOffset o : kEliminationOrder) {
    const LaurentPoly coeff = scaled.at(o);
    if (coeff.is_zero()) continue;
    ConstraintStep step;
    step.offset = o;
    if (!reducer.apply(coeff, step.equation)) return rep;
    if (step.equation.is_zero()) {
      rep.steps.push_back(step);
      continue;
    }
    if (!reducer.solve_step(std::move(step))) return rep;
  }

  // Current stencil, normalizer and weights under the resolved bindings.
  Stencil current;
  std::array<std::optional<Rational>, 3> weights;
  const auto refresh = [&]() -> bool {
    current = Stencil{};
    for (const auto& [o, c] : scaled.entries()) {
      LaurentPoly v;
      if (!reducer.apply(c, v)) return false;
      current.add(o, v);
    }
    rep.normalizer = current.at(kNext);
    if (rep.normalizer.is_zero()) {
      return reducer.fail({Kind::UnsolvableConstraint, "coefficient of u_m^{k+1} vanishes under the solved bindings"});
    }
    const std::array<GridOffset, 3> sites = {kRight, kCenter, kLeft};
    for (std::size_t i = 0; i < 3; ++i) weights[i] = constant_ratio(-current.at(sites[i]), rep.normalizer);
    return true;
  };
  const auto weights_constant = [&] {
    return std::all_of(weights.begin(), weights.end(), [](const auto& w) { return w.has_value(); });
  };

  if (!refresh()) return rep;
  if (rep.normalizer.is_monomial()) {
    const LaurentPoly inv = rep.normalizer.inverse();
    rep.symbolic_weights = {-current.at(kRight) * inv, -current.at(kCenter) * inv, -current.at(kLeft) * inv};
  }

  if (weights_constant()) {
    if (free_parameter) {
      reducer.fail({Kind::FreeParameterForbidden, "the weights are already fixed; p must not be supplied"});
      return rep;
    }
  } else {
    if (!free_parameter) {
      std::string family = rep.symbolic_weights ? " p = " + render((*rep.symbolic_weights)[0]) : "";
      reducer.fail({Kind::FreeParameterRequired,
                    "a one-parameter family of walks remains;" + family + " must be fixed by supplying p"});
      return rep;
    }
    // -S(0,1)/N = p  <=>  S(0,1) + p N = 0
    ConstraintStep step;
    step.source = ConstraintStep::Source::FreeParameter;
    step.offset = kRight;
    step.equation = current.at(kRight) + LaurentPoly(*free_parameter) * rep.normalizer;
    if (step.equation.is_zero()) {
      reducer.fail({Kind::UnsolvableConstraint, "p does not constrain the step sizes"});
      return rep;
    }
    if (!reducer.solve_step(std::move(step))) return rep;
    if (!refresh()) return rep;
    if (!weights_constant()) {
      reducer.fail({Kind::UnsolvableConstraint, "more than one free step-size relation remains after fixing p"});
      return rep;
    }
  }

  for (const auto& [o, c] : current.entries()) {
    if (!in_walk_support(o)) {
      reducer.fail({Kind::UnsolvableConstraint, "coefficient at " + to_string(o) + " did not vanish"});
      return rep;
    }
  }

  RandomWalkForm form{*weights[0], *weights[1], *weights[2], rep.resolved, std::nullopt};
  if (form.p_plus != form.p_minus) {
    reducer.fail({Kind::AsymmetricWeights,
                  "p+ = " + to_string(form.p_plus) + " differs from p- = " + to_string(form.p_minus)});
    return rep;
  }
  if (form.p_plus + form.p_zero + form.p_minus != 1) {
    reducer.fail({Kind::WeightSumMismatch, "weights sum to " + to_string(form.p_plus + form.p_zero + form.p_minus)});
    return rep;
  }
  for (const auto& b : rep.resolved) {
    if (!all_positive(b.value)) {
      reducer.fail({Kind::UnsolvableConstraint, "solved step size " + render(b) + " is not positive for D, tau > 0"});
      return rep;
    }
  }
  if (!(form.p_plus > 0 && form.p_plus <= Rational(1, 2) && form.p_zero >= 0)) {
    reducer.fail({Kind::PositivityViolation, "weights (" + to_string(form.p_plus) + ", " + to_string(form.p_zero) +
                                                 ", " + to_string(form.p_minus) +
                                                 ") violate 0 < p <= 1/2; choose another discretization"});
    return rep;
  }

  const auto dt = std::find_if(rep.resolved.begin(), rep.resolved.end(),
                               [](const auto& b) { return b.unknown == Unknown::TimeStep && fully_constrained(b); });
  const auto dx = std::find_if(rep.resolved.begin(), rep.resolved.end(),
                               [](const auto& b) { return b.unknown == Unknown::SpaceStepSq && fully_constrained(b); });
  if (dt != rep.resolved.end() && dx != rep.resolved.end() &&
      (dt->value.depends_on(SymbolId::RelaxTime) || dx->value.depends_on(SymbolId::RelaxTime))) {
    form.length_scale_sq = LaurentPoly::symbol(SymbolId::RelaxTime) * LaurentPoly::symbol(SymbolId::Diffusivity);
  }
  rep.form = std::move(form);
  return rep;
}

bool verify_report(const ReductionReport& rep) {
  if (!rep.ok() || rep.scale.is_zero() || !rep.scale.is_monomial()) return false;
  const auto& f = *rep.form;
  if (f.p_plus + f.p_zero + f.p_minus != 1) return false;
  try {
    const Stencil s = (rep.scale.inverse() * rep.input).substituted(to_bindings(rep.resolved));
    const LaurentPoly& n = rep.normalizer;
    if (n.is_zero() || s.at(kNext) != n) return false;
    for (const auto& [o, c] : s.entries()) {
      if (o == kNext) continue;
      if (o == kRight) {
        if (-c != LaurentPoly(f.p_plus) * n) return false;
      } else if (o == kCenter) {
        if (-c != LaurentPoly(f.p_zero) * n) return false;
      } else if (o == kLeft) {
        if (-c != LaurentPoly(f.p_minus) * n) return false;
      } else {
        return false;
      }
    }
    // A vanished entry must carry a zero weight.
    if (s.at(kRight).is_zero() && f.p_plus != 0) return false;
    if (s.at(kCenter).is_zero() && f.p_zero != 0) return false;
    if (s.at(kLeft).is_zero() && f.p_minus != 0) return false;
  } catch (const Error&) {
    return false;
  }
  return true;
}

DerivedScales derived_scales(const RandomWalkForm& form) {
  const SolvedBinding* dt = nullptr;
  const SolvedBinding* dx = nullptr;
  for (const auto& b : form.constraints) {
    if (!fully_constrained(b)) continue;
    (b.unknown == Unknown::TimeStep ? dt : dx) = &b;
  }
  if (!dt || !dx) {
    throw UnderConstrained("dt and dx are linked but not individually fixed by D and tau");
  }
  DerivedScales out;
  out.dt = dt->value;
  out.dx_sq = dx->value;
  out.diffusivity_check = LaurentPoly(Rational(1, 2)) * dx->value * dt->value.inverse();
  out.length_scale_sq = form.length_scale_sq;
  return out;
}

nlohmann::json to_json(const ReductionReport& rep, std::string_view model) {
  using nlohmann::json;
  json j;
  j["model"] = std::string(model);
  j["stencil"] = to_json(rep.input);
  j["scale"] = render(rep.scale);
  j["free_parameter"] = rep.free_parameter ? json(to_string(*rep.free_parameter)) : json(nullptr);
  auto steps = json::array();
  for (const auto& s : rep.steps) {
    json e;
    e["source"] = s.source == ConstraintStep::Source::Offset ? "offset" : "free_parameter";
    e["dt"] = s.offset.dt;
    e["dx"] = s.offset.dx;
    e["equation"] = render(s.equation);
    e["solved"] = s.solved ? json(render(*s.solved)) : json(nullptr);
    steps.push_back(std::move(e));
  }
  j["eliminated"] = std::move(steps);
  auto order = json::array();
  for (const auto& b : rep.bindings) order.push_back(render(b));
  j["solve_order"] = std::move(order);
  auto bindings = json::object();
  for (const auto& b : rep.resolved) {
    std::string key = b.unknown == Unknown::TimeStep ? "dt" : "dx2";
    if (b.power < 0) key += "_inv";
    bindings[key] = render(b.value);
  }
  j["bindings"] = std::move(bindings);
  j["normalizer"] = render(rep.normalizer);
  if (rep.form) {
    j["weights"] = {{"plus", to_string(rep.form->p_plus)},
                    {"zero", to_string(rep.form->p_zero)},
                    {"minus", to_string(rep.form->p_minus)}};
    json scales = json::object();
    try {
      const auto d = derived_scales(*rep.form);
      scales["dt"] = render(d.dt);
      scales["dx2"] = render(d.dx_sq);
      scales["diffusivity_check"] = render(d.diffusivity_check);
      scales["length_scale_sq"] = d.length_scale_sq ? json(render(*d.length_scale_sq)) : json(nullptr);
    } catch (const UnderConstrained&) {
      scales["under_constrained"] = true;
    }
    j["scales"] = std::move(scales);
  } else {
    j["weights"] = nullptr;
    j["scales"] = nullptr;
  }
  if (rep.failure) {
    j["failure"] = {{"kind", std::string(to_string(rep.failure->kind))}, {"message", rep.failure->message}};
  } else {
    j["failure"] = nullptr;
  }
  return j;
}

}  // namespace microlim
