#pragma once

// Iteration of the emitted random-walk update on a finite 1-D lattice, in exact rational or
// double precision, plus a continuum-limit convergence study against the heat kernel.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "microlim/errors.hpp"
#include "microlim/kernels.hpp"
#include "microlim/models.hpp"
#include "microlim/rational.hpp"
#include "microlim/reduction.hpp"

namespace microlim {

using kernels::BoundaryKind;
using kernels::BoundaryPolicy;
using kernels::WalkWeights;

namespace detail {
template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return r;
  } else {
    return static_cast<T>(to_double(r));
  }
}
}  // namespace detail

template <class T>
struct GridField {
  std::vector<T> values;
  double dx = 1.0;
  BoundaryPolicy<T> boundary;

  GridField(std::vector<T> v, double spacing, BoundaryPolicy<T> bc = {})
      : values(std::move(v)), dx(spacing), boundary(bc) {
    if (values.size() < 3) throw std::invalid_argument("a lattice needs at least 3 sites");
    if (!(dx > 0)) throw std::invalid_argument("dx must be positive");
    for (const T& x : values)
      if (x < 0) throw std::invalid_argument("field values must be nonnegative");
    if (boundary.kind == BoundaryKind::Dirichlet) {
      if (boundary.left < 0 || boundary.right < 0) throw std::invalid_argument("boundary values must be nonnegative");
      values.front() = boundary.left;
      values.back() = boundary.right;
    }
  }

  std::size_t size() const { return values.size(); }

  T mass() const {
    T s{};
    for (const T& x : values) s += x;
    return s;
  }
};

// Checks the walk invariants exactly: symmetric, sum to one, 0 < p <= 1/2, p0 >= 0.
void validate_weights(const Rational& plus, const Rational& zero, const Rational& minus);

template <class T>
class WalkRun {
 public:
  WalkRun(const Rational& plus, const Rational& zero, const Rational& minus, GridField<T> field, double dt)
      : field_(std::move(field)), dt_(dt) {
    validate_weights(plus, zero, minus);
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    weights_ = {detail::from_rational<T>(plus), detail::from_rational<T>(zero), detail::from_rational<T>(minus)};
    scratch_.resize(field_.size());
    if (periodic()) mass_trace_.push_back(field_.mass());
  }

  WalkRun(const RandomWalkForm& form, GridField<T> field, double dt)
      : WalkRun(form.p_plus, form.p_zero, form.p_minus, std::move(field), dt) {}

  const GridField<T>& field() const noexcept { return field_; }
  const WalkWeights<T>& weights() const noexcept { return weights_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps_taken() const noexcept { return steps_; }
  // Total mass after each step, starting with the initial field; periodic lattices only.
  const std::vector<T>& mass_trace() const noexcept { return mass_trace_; }
  bool periodic() const noexcept { return field_.boundary.kind == BoundaryKind::Periodic; }

  void advance() {
    kernels::walk_step_parallel<T>(field_.values, scratch_, weights_, field_.boundary);
    field_.values.swap(scratch_);
    ++steps_;
    if (periodic()) mass_trace_.push_back(field_.mass());
  }

  // Serial reference path, kept for cross-checking the parallel kernel.
  void advance_serial() {
    kernels::walk_step_serial<T>(field_.values, scratch_, weights_, field_.boundary);
    field_.values.swap(scratch_);
    ++steps_;
    if (periodic()) mass_trace_.push_back(field_.mass());
  }

 private:
  GridField<T> field_;
  WalkWeights<T> weights_;
  double dt_;
  std::size_t steps_ = 0;
  std::vector<T> scratch_;
  std::vector<T> mass_trace_;
};

template <class T>
WalkRun<T> step(WalkRun<T> run) {
  run.advance();
  return run;
}

template <class T>
WalkRun<T> run(WalkRun<T> r, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) r.advance();
  return r;
}

// Lattice with a single site of value `height` at index `center`.
template <class T>
GridField<T> delta_field(std::size_t sites, std::size_t center, const T& height, double dx,
                         BoundaryPolicy<T> bc = {}) {
  std::vector<T> v(sites, T{});
  v.at(center) = height;
  return GridField<T>(std::move(v), dx, bc);
}

// Fundamental solution of u_t = D u_xx: exp(-x^2/(4 D t)) / sqrt(4 pi D t).
inline double reference_heat(double x, double t, double D) {
  if (!(t > 0) || !(D > 0)) throw std::invalid_argument("reference_heat needs t > 0 and D > 0");
  return std::exp(-x * x / (4.0 * D * t)) / std::sqrt(4.0 * std::numbers::pi * D * t);
}

struct ConvergenceRow {
  std::size_t level = 0;
  double dx = 0;
  double dt = 0;
  double l1_error = 0;
  std::optional<double> ratio;  // previous error / this error
  std::size_t sites = 0;
  std::size_t steps = 0;
};

struct ConvergenceTable {
  std::string label;
  double final_time = 0;
  std::vector<ConvergenceRow> rows;
};

class NonConvergent : public Error {
 public:
  NonConvergent(const std::string& what, ConvergenceTable table) : Error(what), table_(std::move(table)) {}
  const ConvergenceTable& table() const noexcept { return table_; }

 private:
  ConvergenceTable table_;
};

struct ConvergenceOptions {
  std::optional<Rational> p;       // free parameter; falls back to the model default
  Rational dx0 = Rational(1, 5);   // coarsest dx when the reduction leaves dx free
  std::size_t max_sites = 8192;
  double half_width_sigmas = 8.0;  // lattice half-width in units of sqrt(2 D T)
  double min_width_ratio = 25.0;   // T >= min_width_ratio * dx0^2 / D
};

// Refines dx by 2 per level when dx is left free by the reduction; otherwise halves tau per
// level (dt and dx^2 are tied to tau). Compares the mass-normalized delta response at a fixed
// time T with reference_heat(x, T, D). Throws NonConvergent if the L1 error fails to
// decrease, std::invalid_argument on bad input, and Error if the model does not reduce.
ConvergenceTable convergence_study(ModelId model, const ModelParams& params, std::size_t levels,
                                   const ConvergenceOptions& options = {});

// Same study for an already reduced walk (e.g. from a scheme file). options.p is unused; tau is
// required when the form fixes both steps.
ConvergenceTable convergence_study(const RandomWalkForm& form, std::string label, const ModelParams& params,
                                   std::size_t levels, const ConvergenceOptions& options = {});

// Numeric step sizes of a successful reduction. `dx_free` is used only when dx is not fixed.
struct NumericSteps {
  Rational dt;
  std::optional<Rational> dx;     // exact when dx is free or dx^2 is a perfect square
  double dx_value = 0;
  bool dx_was_free = false;
};

NumericSteps numeric_steps(const RandomWalkForm& form, const ModelParams& params,
                           const std::optional<Rational>& dx_free);

}  // namespace microlim
