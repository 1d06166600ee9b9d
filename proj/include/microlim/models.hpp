#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "microlim/rational.hpp"
#include "microlim/reduction.hpp"
#include "microlim/stencil.hpp"

namespace microlim {

enum class ModelId { StandardHeat, MaxwellCattaneo, StandardHeatDff, Symmetry };

inline constexpr std::array<ModelId, 4> kAllModels = {ModelId::StandardHeat, ModelId::MaxwellCattaneo,
                                                      ModelId::StandardHeatDff, ModelId::Symmetry};

// CLI names: standard-heat, maxwell-cattaneo, standard-heat-dff, symmetry.
std::string_view model_name(ModelId m);
std::optional<ModelId> model_from_name(std::string_view name);

struct ModelParams {
  Rational D = 1;
  std::optional<Rational> tau;
};

struct ModelInfo {
  ModelId id;
  std::string pde;  // e.g. "tau*u_tt + u_t = D*u_xx"
  bool uses_tau = false;
  // Member of the walk family selected by the classical derivation when the stencil alone
  // leaves one free relation (dt = 2 tau for Maxwell-Cattaneo and for the symmetry model).
  std::optional<Rational> default_free_parameter;
};

const ModelInfo& model_info(ModelId m);

// Throws std::invalid_argument when D <= 0, tau <= 0, tau missing for a model that uses it,
// or tau given for one that does not.
void validate(ModelId m, const ModelParams& params);

SchemeSpec scheme_for(ModelId m);

// reduce(assemble(scheme_for(m)), p), where p falls back to the model's default.
ReductionReport reduce_model(ModelId m, std::optional<Rational> p = std::nullopt);

// Reference weights and bindings. STANDARD_HEAT is taken at the classical p = 1/2.
struct ExpectedReduction {
  std::optional<Rational> free_parameter;  // the p to pass to reduce
  Rational normalizer;
  RandomWalkForm form;
};

ExpectedReduction expected_reduction(ModelId m);

}  // namespace microlim
