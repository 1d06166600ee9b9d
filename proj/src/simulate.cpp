#include "microlim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace microlim {

void validate_weights(const Rational& plus, const Rational& zero, const Rational& minus) {
  if (plus != minus) throw std::invalid_argument("walk weights must be symmetric (p+ = p-)");
  if (plus + zero + minus != 1) throw std::invalid_argument("walk weights must sum to 1");
  if (!(plus > 0 && plus <= Rational(1, 2) && zero >= 0)) {
    throw std::invalid_argument("walk weights violate 0 < p <= 1/2");
  }
}

namespace {

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  const Integer sn = boost::multiprecision::sqrt(num);
  const Integer sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

bool fixed(const SolvedBinding& b) {
  return b.power == 1 && !b.value.depends_on(SymbolId::TimeStep) && !b.value.depends_on(SymbolId::SpaceStep);
}

}  // namespace

NumericSteps numeric_steps(const RandomWalkForm& form, const ModelParams& params,
                           const std::optional<Rational>& dx_free) {
  const SolvedBinding* dt = nullptr;
  const SolvedBinding* dx2 = nullptr;
  for (const auto& b : form.constraints) {
    if (b.power != 1) continue;
    (b.unknown == Unknown::TimeStep ? dt : dx2) = &b;
  }
  const Rational tau = params.tau.value_or(Rational(1));
  NumericSteps out;
  if (dx2 && fixed(*dx2)) {
    const Rational dx_sq = eval(dx2->value, symbol_values(params.D, tau, 1, 1));
    if (dx_sq <= 0) throw std::invalid_argument("dx^2 evaluates to a nonpositive value");
    out.dx = exact_sqrt(dx_sq);
    out.dx_value = std::sqrt(to_double(dx_sq));
    if (!dt || dt->value.depends_on(SymbolId::TimeStep)) throw std::invalid_argument("dt is not fixed by the reduction");
    // dt may still be written in dx (never in practice); evaluate through dx^2 when possible.
    Bindings via{{SymbolId::SpaceStep, Binding{2, dx2->value}}};
    out.dt = eval(substitute(dt->value, via), symbol_values(params.D, tau, 1, 1));
  } else {
    if (!dt || dt->value.depends_on(SymbolId::TimeStep)) throw std::invalid_argument("dt is not determined by the reduction");
    if (!dx_free) throw std::invalid_argument("dx is not fixed by the reduction; supply dx");
    if (*dx_free <= 0) throw std::invalid_argument("dx must be positive");
    out.dx = *dx_free;
    out.dx_value = to_double(*dx_free);
    out.dx_was_free = true;
    out.dt = eval(dt->value, symbol_values(params.D, tau, 1, *dx_free));
  }
  if (out.dt <= 0) throw std::invalid_argument("dt evaluates to a nonpositive value");
  return out;
}

ConvergenceTable convergence_study(ModelId model, const ModelParams& params, std::size_t levels,
                                   const ConvergenceOptions& options) {
  validate(model, params);
  const ReductionReport rep = reduce_model(model, options.p);
  if (!rep.ok()) {
    throw Error("reduction of " + std::string(model_name(model)) + " failed: " + rep.failure->message);
  }
  return convergence_study(*rep.form, std::string(model_name(model)), params, levels, options);
}

ConvergenceTable convergence_study(const RandomWalkForm& form, std::string label, const ModelParams& params,
                                   std::size_t levels, const ConvergenceOptions& options) {
  if (levels < 2) throw std::invalid_argument("a convergence study needs at least 2 levels");
  if (levels > 12) throw std::invalid_argument("at most 12 refinement levels");
  if (params.D <= 0) throw std::invalid_argument("D must be positive");
  if (options.dx0 <= 0) throw std::invalid_argument("dx0 must be positive");
  const bool dx_free = std::none_of(form.constraints.begin(), form.constraints.end(), [](const auto& b) {
    return b.unknown == Unknown::SpaceStepSq && fixed(b);
  });

  struct Level {
    double dx = 0;
    double dt = 0;
  };
  std::vector<Level> setup(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    const Rational scale = Rational(1, Integer(1) << l);
    NumericSteps s;
    if (dx_free) {
      s = numeric_steps(form, params, options.dx0 * scale);
    } else {
      if (!params.tau || *params.tau <= 0) throw std::invalid_argument("refining a fully constrained walk needs tau > 0");
      ModelParams refined = params;
      refined.tau = *params.tau * scale;
      s = numeric_steps(form, refined, std::nullopt);
    }
    setup[l] = {s.dx_value, to_double(s.dt)};
  }

  const double D = to_double(params.D);
  const double dx0 = setup[0].dx;
  const auto n0 = static_cast<std::size_t>(std::ceil(options.min_width_ratio * dx0 * dx0 / (D * setup[0].dt) - 1e-9));
  const double T = static_cast<double>(n0) * setup[0].dt;

  ConvergenceTable table{std::move(label), T, std::vector<ConvergenceRow>(levels)};
  const bool filter = form.p_zero == 0;
  const double half_width = options.half_width_sigmas * std::sqrt(2.0 * D * T);

  for (std::size_t l = 0; l < levels; ++l) {
    const double steps_real = T / setup[l].dt;
    const auto steps = static_cast<std::size_t>(std::llround(steps_real));
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-6 * steps_real) {
      throw std::invalid_argument("level " + std::to_string(l) + " time step does not divide the final time");
    }
    const auto K = static_cast<std::size_t>(std::ceil(half_width / setup[l].dx));
    const std::size_t sites = 2 * K + 1;
    if (sites > options.max_sites) {
      throw std::invalid_argument("level " + std::to_string(l) + " needs " + std::to_string(sites) +
                                  " sites, more than the limit of " + std::to_string(options.max_sites));
    }
    table.rows[l].level = l;
    table.rows[l].dx = setup[l].dx;
    table.rows[l].dt = setup[l].dt;
    table.rows[l].sites = sites;
    table.rows[l].steps = steps;
  }

  // Levels are independent; each writes only its own row.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t li = 0; li < static_cast<std::ptrdiff_t>(levels); ++li) {
    auto& row = table.rows[static_cast<std::size_t>(li)];
    const std::size_t K = row.sites / 2;
    WalkRun<double> walk(form, delta_field<double>(row.sites, K, 1.0 / row.dx, row.dx), row.dt);
    for (std::size_t n = 0; n < row.steps; ++n) walk.advance_serial();
    const auto& u = walk.field().values;
    double err = 0;
    for (std::size_t m = 0; m < row.sites; ++m) {
      double v = u[m];
      if (filter) {
        // With p0 = 0 only one parity sublattice is occupied; a [1 2 1]/4 average removes it.
        const double l = u[(m + row.sites - 1) % row.sites];
        const double r = u[(m + 1) % row.sites];
        v = 0.25 * (l + 2.0 * v + r);
      }
      const double x = (static_cast<double>(m) - static_cast<double>(K)) * row.dx;
      err += std::abs(v - reference_heat(x, T, D)) * row.dx;
    }
    row.l1_error = err;
  }

  for (std::size_t l = 1; l < levels; ++l) {
    table.rows[l].ratio = table.rows[l - 1].l1_error / table.rows[l].l1_error;
  }
  for (std::size_t l = 1; l < levels; ++l) {
    if (!(table.rows[l].l1_error < table.rows[l - 1].l1_error)) {
      std::ostringstream os;
      os << "L1 error did not decrease from level " << l - 1 << " (" << table.rows[l - 1].l1_error << ") to level "
         << l << " (" << table.rows[l].l1_error << ")";
      throw NonConvergent(os.str(), table);
    }
  }
  return table;
}

}  // namespace microlim
