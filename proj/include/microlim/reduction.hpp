#pragma once

// Reduction of an assembled stencil to a random-walk update
//
//   u_m^{k+1} = p (u_{m+1}^k + u_{m-1}^k) + (1 - 2p) u_m^k,   0 < p <= 1/2.
//
// Every coefficient outside {u_m^{k+1}, u_{m+1}^k, u_m^k, u_{m-1}^k} is set to zero and
// solved, by monomial isolation, for dt and dx^2 in terms of D and tau. When a one-parameter
// family of walks remains, the caller's p selects the member.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "microlim/laurent.hpp"
#include "microlim/stencil.hpp"

namespace microlim {

enum class Unknown { TimeStep, SpaceStepSq };

std::string_view to_string(Unknown u);

// unknown^power = value, power is +1 or -1. dx^2 is the unknown for space, never dx.
struct SolvedBinding {
  Unknown unknown = Unknown::TimeStep;
  int power = 1;
  LaurentPoly value;

  friend bool operator==(const SolvedBinding&, const SolvedBinding&) = default;
};

// "dt = 2*tau", "dx^2 = 4*D*tau", "dx^-2 = ..."
std::string render(const SolvedBinding& b);
std::string lhs_name(const SolvedBinding& b);

Bindings to_bindings(const std::vector<SolvedBinding>& solved);

struct RandomWalkForm {
  Rational p_plus;
  Rational p_zero;
  Rational p_minus;
  std::vector<SolvedBinding> constraints;
  // tau*D when both steps are fixed by parameters that include tau.
  std::optional<LaurentPoly> length_scale_sq;
};

enum class ReductionFailureKind {
  UnsolvableConstraint,
  PositivityViolation,
  OddSpaceExponent,
  FreeParameterRequired,
  FreeParameterForbidden,
  AsymmetricWeights,
  WeightSumMismatch,
  UnsupportedStencil,
};

std::string_view to_string(ReductionFailureKind k);

struct ReductionFailure {
  ReductionFailureKind kind;
  std::string message;
};

struct ConstraintStep {
  enum class Source { Offset, FreeParameter };
  Source source = Source::Offset;
  GridOffset offset;
  LaurentPoly equation;                 // "= 0", after earlier bindings were substituted
  std::optional<SolvedBinding> solved;  // empty when earlier bindings already zeroed it
};

struct ReductionReport {
  Stencil input;
  // Leading term of the u_m^{k+1} coefficient; the input is divided by it before solving, so
  // e.g. the Maxwell-Cattaneo normalizer reads 1 + (D/tau)(dt/dx)^2 -> 2.
  LaurentPoly scale;
  std::optional<Rational> free_parameter;
  std::vector<ConstraintStep> steps;
  std::vector<SolvedBinding> bindings;  // as solved, in elimination order
  std::vector<SolvedBinding> resolved;  // back-substituted; dt before dx^2
  LaurentPoly normalizer;
  // (plus, zero, minus) before the free parameter was applied, when expressible.
  std::optional<std::array<LaurentPoly, 3>> symbolic_weights;
  std::optional<RandomWalkForm> form;
  std::optional<ReductionFailure> failure;

  bool ok() const noexcept { return form.has_value(); }
};

enum class SolveOrder { TimeStepFirst, SpaceStepFirst };

struct ReduceOptions {
  SolveOrder order = SolveOrder::TimeStepFirst;
};

// Throws std::invalid_argument if p is given outside (0, 1/2]. Every other failure is
// reported in the returned report.
ReductionReport reduce(const Stencil& st, std::optional<Rational> free_parameter = std::nullopt,
                       ReduceOptions options = {});

// Replays the resolved bindings against the input stencil.
bool verify_report(const ReductionReport& rep);

struct DerivedScales {
  LaurentPoly dt;
  LaurentPoly dx_sq;
  LaurentPoly diffusivity_check;  // dx^2 / (2 dt)
  std::optional<LaurentPoly> length_scale_sq;
};

// Throws UnderConstrained unless both dt and dx^2 are fixed by D and tau alone.
DerivedScales derived_scales(const RandomWalkForm& form);

nlohmann::json to_json(const ReductionReport& rep, std::string_view model);

}  // namespace microlim
