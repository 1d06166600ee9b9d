#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "microlim/laurent.hpp"

namespace microlim {

// (time offset, space offset) relative to u_m^k.
struct GridOffset {
  int dt = 0;
  int dx = 0;
  friend auto operator<=>(const GridOffset&, const GridOffset&) = default;
};

std::string to_string(GridOffset o);

class Stencil {
 public:
  using Entries = std::map<GridOffset, LaurentPoly>;

  Stencil() = default;
  explicit Stencil(const Entries& entries);

  const Entries& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  // Zero polynomial for offsets not present.
  LaurentPoly at(GridOffset o) const;
  void add(GridOffset o, const LaurentPoly& c);

  Stencil& operator+=(const Stencil& rhs);
  Stencil& operator*=(const LaurentPoly& k);
  friend Stencil operator+(Stencil a, const Stencil& b) { return a += b; }
  friend Stencil operator*(const LaurentPoly& k, Stencil s) { return s *= k; }
  friend bool operator==(const Stencil&, const Stencil&) = default;

  // Applies `substitute` to every entry and renormalizes.
  Stencil substituted(const Bindings& b) const;

  // Sum of all entries; zero for any difference operator.
  LaurentPoly total() const;

 private:
  Entries entries_;
};

enum class DerivativeTag { Ut, Utt, Uxx, Utxx };

std::string_view to_string(DerivativeTag t);
std::optional<DerivativeTag> derivative_tag_from_name(std::string_view name);
bool is_time_derivative(DerivativeTag t);

struct DerivativeTemplate {
  std::string name;
  DerivativeTag target = DerivativeTag::Ut;
  Stencil entries;

  // Entries sum to zero: a constant field has zero discrete derivative.
  bool is_consistent() const { return entries.total().is_zero(); }

  friend bool operator==(const DerivativeTemplate&, const DerivativeTemplate&) = default;
};

struct SchemeTerm {
  LaurentPoly coefficient;
  DerivativeTemplate templ;
  friend bool operator==(const SchemeTerm&, const SchemeTerm&) = default;
};

// Terms are on one side: sum(coefficient * template) = 0.
struct SchemeSpec {
  std::vector<SchemeTerm> terms;

  // Nonempty and references at least one time derivative.
  bool is_valid() const;
};

// The replacement-template catalog: forward_euler_t, backward_euler_t, central_t,
// central_second_t, central_xx, dufort_frankel_xx, nonstandard_t, forward_central_txx.
const std::vector<std::string>& builtin_template_names();

// Throws UnknownTemplate.
DerivativeTemplate builtin_template(std::string_view name);
bool is_builtin_template(std::string_view name);

// sum(coefficient * template), normalized. Terms with a zero coefficient contribute nothing.
Stencil assemble(const SchemeSpec& spec);

// [{dt, dx, coeff}] sorted by (dt, dx), with canonical polynomial strings.
nlohmann::json to_json(const Stencil& s);
Stencil stencil_from_json(const nlohmann::json& j);

}  // namespace microlim
