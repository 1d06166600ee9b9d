#include "microlim/golden.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "microlim/dsl.hpp"
#include "microlim/models.hpp"
#include "microlim/reduction.hpp"
#include "microlim/simulate.hpp"

namespace microlim {

namespace {

using Clock = std::chrono::steady_clock;

LaurentPoly sym(SymbolId s, int power = 1) { return LaurentPoly::symbol(s, power); }

template <class F>
GoldenResult timed(int id, std::string name, F&& body) {
  GoldenResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = Clock::now();
  try {
    std::ostringstream detail;
    r.passed = body(detail);
    r.detail = detail.str();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(0, max_num), den(1, max_den);
  return Rational(num(rng), den(rng));
}

// p in (0, 1/2]
Rational random_p(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den(2, 40);
  const int b = den(rng);
  std::uniform_int_distribution<int> num(1, b / 2);
  return Rational(num(rng), b);
}

}  // namespace

GoldenResult check_golden_derivations() {
  return timed(1, "golden derivations", [](std::ostringstream& d) {
    bool ok = true;
    for (ModelId m : kAllModels) {
      const ExpectedReduction want = expected_reduction(m);
      const ReductionReport rep = reduce_model(m, want.free_parameter);
      bool model_ok = rep.ok() && verify_report(rep);
      if (model_ok) {
        const RandomWalkForm& f = *rep.form;
        model_ok = f.p_plus == want.form.p_plus && f.p_zero == want.form.p_zero && f.p_minus == want.form.p_minus &&
                   f.constraints == want.form.constraints && f.length_scale_sq == want.form.length_scale_sq &&
                   rep.normalizer == LaurentPoly(want.normalizer);
      }
      d << model_name(m) << (model_ok ? " ok; " : " MISMATCH; ");
      ok = ok && model_ok;
    }

    // Standard heat as a family: weights (p, 1 - 2p, p) with p = dt D / dx^2.
    const ReductionReport heat = reduce_model(ModelId::StandardHeat, Rational(1, 2));
    const LaurentPoly p = sym(SymbolId::TimeStep) * sym(SymbolId::Diffusivity) * sym(SymbolId::SpaceStep, -2);
    bool family = heat.symbolic_weights && (*heat.symbolic_weights)[0] == p &&
                  (*heat.symbolic_weights)[1] == LaurentPoly(1) - 2 * p && (*heat.symbolic_weights)[2] == p;
    // p = 1/2 gives dx^2 / (2 dt) = D.
    if (family && heat.ok()) {
      const auto& dt = heat.form->constraints.at(0);
      family = dt.unknown == Unknown::TimeStep && dt.power == 1 &&
               sym(SymbolId::SpaceStep, 2) * (2 * dt.value).inverse() == sym(SymbolId::Diffusivity);
    } else {
      family = false;
    }
    for (const Rational& q : {Rational(1, 3), Rational(1, 4), Rational(1, 10)}) {
      const ReductionReport r = reduce_model(ModelId::StandardHeat, q);
      family = family && r.ok() && r.form->p_plus == q && r.form->p_zero == 1 - 2 * q && r.form->p_minus == q;
    }
    d << "standard-heat family " << (family ? "ok" : "MISMATCH");
    return ok && family;
  });
}

GoldenResult check_symmetry_stencil() {
  return timed(2, "symmetry stencil times 3 dt", [](std::ostringstream& d) {
    const Stencil st = LaurentPoly(3) * sym(SymbolId::TimeStep) * assemble(scheme_for(ModelId::Symmetry));
    const LaurentPoly a = 3 * sym(SymbolId::RelaxTime) * sym(SymbolId::Diffusivity) * sym(SymbolId::SpaceStep, -2);
    const LaurentPoly b = 3 * sym(SymbolId::TimeStep) * sym(SymbolId::Diffusivity) * sym(SymbolId::SpaceStep, -2);
    Stencil want;
    want.add({1, 1}, 1 - a);
    want.add({1, -1}, 1 - a);
    want.add({1, 0}, 1 + 2 * a);
    want.add({0, 1}, -(b - a));
    want.add({0, -1}, -(b - a));
    want.add({0, 0}, -(3 - 2 * b + 2 * a));
    for (const auto& [o, c] : st.entries()) d << to_string(o) << ": " << render(c) << "; ";
    return st == want;
  });
}

GoldenResult check_scale_identities() {
  return timed(3, "Maxwell-Cattaneo scale identities", [](std::ostringstream& d) {
    const ReductionReport rep = reduce_model(ModelId::MaxwellCattaneo);
    if (!rep.ok()) {
      d << "reduction failed: " << rep.failure->message;
      return false;
    }
    const DerivedScales s = derived_scales(*rep.form);
    const LaurentPoly tau_d = sym(SymbolId::RelaxTime) * sym(SymbolId::Diffusivity);
    d << "dx^2/(2dt) = " << render(s.diffusivity_check)
      << ", L^2 = " << (s.length_scale_sq ? render(*s.length_scale_sq) : "none");
    return s.diffusivity_check == sym(SymbolId::Diffusivity) && s.length_scale_sq == tau_d;
  });
}

GoldenResult check_positivity(const GoldenOptions& options) {
  return timed(4, "positivity (exact)", [&](std::ostringstream& d) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<int> size(3, 24), zero_pick(0, 3), steps(1, 3), coin(0, 1);
    for (int c = 0; c < options.positivity_cases; ++c) {
      const Rational p = random_p(rng);
      std::vector<Rational> v(static_cast<std::size_t>(size(rng)));
      for (auto& x : v) x = zero_pick(rng) == 0 ? Rational(0) : random_rational(rng, 50, 12);
      BoundaryPolicy<Rational> bc;
      if (coin(rng)) bc = {BoundaryKind::Dirichlet, random_rational(rng, 5, 3), random_rational(rng, 5, 3)};
      WalkRun<Rational> walk(p, 1 - 2 * p, p, GridField<Rational>(v, 1.0, bc), 1.0);
      for (int s = 0, n = steps(rng); s < n; ++s) {
        walk.advance();
        for (const auto& x : walk.field().values) {
          if (x < 0) {
            d << "negative value at case " << c << " with p = " << to_string(p);
            return false;
          }
        }
      }
    }
    d << options.positivity_cases << " cases";
    return true;
  });
}

GoldenResult check_conservation(const GoldenOptions& options) {
  return timed(5, "periodic mass conservation (exact)", [&](std::ostringstream& d) {
    std::mt19937_64 rng(options.seed + 1);
    bool ok = true;
    for (ModelId m : kAllModels) {
      const ReductionReport rep = reduce_model(m, expected_reduction(m).free_parameter);
      if (!rep.ok()) {
        d << model_name(m) << " did not reduce; ";
        return false;
      }
      std::vector<Rational> v(24);
      for (auto& x : v) x = random_rational(rng, 30, 7);
      WalkRun<Rational> walk(*rep.form, GridField<Rational>(v, 1.0), 1.0);
      for (int s = 0; s < options.conservation_steps; ++s) walk.advance();
      const auto& trace = walk.mass_trace();
      bool same = trace.size() == static_cast<std::size_t>(options.conservation_steps) + 1;
      for (const auto& x : trace) same = same && x == trace.front();
      d << model_name(m) << (same ? " ok; " : " DRIFT; ");
      ok = ok && same;
    }
    return ok;
  });
}

GoldenResult check_binomial() {
  return timed(6, "binomial delta response", [](std::ostringstream& d) {
    constexpr int n = 10;
    constexpr std::size_t sites = 41, center = 20;
    const ReductionReport rep = reduce_model(ModelId::StandardHeat, Rational(1, 2));
    if (!rep.ok()) return false;
    WalkRun<Rational> walk(*rep.form, delta_field<Rational>(sites, center, Rational(1), 1.0), 1.0);
    for (int s = 0; s < n; ++s) walk.advance();

    std::vector<Integer> row{1};
    for (int k = 0; k < n; ++k) {
      std::vector<Integer> next(row.size() + 1, 0);
      for (std::size_t j = 0; j < row.size(); ++j) {
        next[j] += row[j];
        next[j + 1] += row[j];
      }
      row = std::move(next);
    }
    const Rational scale(Integer(1), Integer(1) << n);
    for (std::size_t i = 0; i < sites; ++i) {
      const int m = static_cast<int>(i) - static_cast<int>(center);
      Rational want = 0;
      if (std::abs(m) <= n && (m + n) % 2 == 0) want = Rational(row[static_cast<std::size_t>((n + m) / 2)]) * scale;
      if (walk.field().values[i] != want) {
        d << "site offset " << m << ": got " << to_string(walk.field().values[i]) << ", want " << to_string(want);
        return false;
      }
    }
    d << "C(10,j)/2^10 reproduced on 41 sites";
    return true;
  });
}

GoldenResult check_scheme_language(const GoldenOptions& options) {
  return timed(9, "scheme files and round trip", [&](std::ostringstream& d) {
    bool ok = true;
    for (ModelId m : kAllModels) {
      const SchemeFile f = parse_scheme(builtin_scheme_text(m));
      const bool same = assemble(to_scheme_spec(f)) == assemble(scheme_for(m)) && parse_scheme(render_scheme(f)) == f;
      d << model_name(m) << (same ? " ok; " : " MISMATCH; ");
      ok = ok && same;
    }
    std::mt19937_64 rng(options.seed + 2);
    int failures = 0;
    for (int c = 0; c < options.round_trip_cases; ++c) {
      const SchemeFile f = random_scheme_file(rng);
      if (!(parse_scheme(render_scheme(f)) == f)) ++failures;
    }
    d << options.round_trip_cases - failures << "/" << options.round_trip_cases << " round trips";
    return ok && failures == 0;
  });
}

std::vector<GoldenResult> run_golden_suite(const GoldenOptions& options) {
  return {check_golden_derivations(),   check_symmetry_stencil(), check_scale_identities(),
          check_positivity(options),    check_conservation(options), check_binomial(),
          check_scheme_language(options)};
}

}  // namespace microlim
