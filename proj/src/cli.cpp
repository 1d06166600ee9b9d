#include "microlim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "microlim/dsl.hpp"
#include "microlim/golden.hpp"
#include "microlim/models.hpp"
#include "microlim/oscillator.hpp"
#include "microlim/reduction.hpp"
#include "microlim/simulate.hpp"

namespace microlim {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Carries an exit code out of a subcommand after its diagnostics were printed.
struct ExitWith {
  int code;
};

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string str(const double& v) { return num(v); }
std::string str(const Rational& v) { return to_string(v); }

Rational rational_flag(const std::string& text, std::string_view flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("--" + std::string(flag) + ": '" + text + "' is not an exact number (use n, p/q or a decimal)");
  }
}

struct SourceFlags {
  std::string model;
  std::string scheme_file;
  std::string D = "1";
  std::string tau;
  std::string p;
};

void add_source_flags(CLI::App* cmd, SourceFlags& f) {
  cmd->add_option("model", f.model, "model id (see list-models)")->type_name("MODEL");
  cmd->add_option("--scheme-file", f.scheme_file, "scheme file to use instead of a built-in model")->type_name("PATH");
  cmd->add_option("--D", f.D, "diffusivity D (exact; default 1)")->type_name("RATIONAL");
  cmd->add_option("--tau", f.tau, "relaxation time tau (default 1 where the model uses it)")->type_name("RATIONAL");
  cmd->add_option("--p", f.p, "walk parameter p in (0, 1/2]")->type_name("RATIONAL");
}

struct Source {
  std::optional<ModelId> model;
  std::optional<SchemeFile> file;
  std::string label;
  ModelParams params;
  std::optional<Rational> p;
};

Source resolve_source(const SourceFlags& f) {
  if (f.model.empty() == f.scheme_file.empty()) throw UsageError("give exactly one of MODEL or --scheme-file PATH");
  Source s;
  s.params.D = rational_flag(f.D, "D");
  if (s.params.D <= 0) throw UsageError("D must be positive");
  std::optional<Rational> tau;
  if (!f.tau.empty()) {
    tau = rational_flag(f.tau, "tau");
    if (*tau <= 0) throw UsageError("tau must be positive");
  }
  if (!f.p.empty()) s.p = rational_flag(f.p, "p");

  if (!f.model.empty()) {
    s.model = model_from_name(f.model);
    if (!s.model) throw UsageError("unknown model '" + f.model + "' (see list-models)");
    s.label = f.model;
    if (model_info(*s.model).uses_tau) {
      s.params.tau = tau.value_or(Rational(1));
    } else if (tau) {
      throw UsageError("tau is not a parameter of " + f.model);
    }
    return s;
  }

  std::ifstream in(f.scheme_file, std::ios::binary);
  if (!in) throw UsageError("cannot read " + f.scheme_file);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    s.file = parse_scheme(buf.str());
  } catch (const ParseError& e) {
    throw UsageError(f.scheme_file + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                     to_string(e.kind()) + ": " + e.detail());
  }
  s.label = f.scheme_file;
  const auto& declared = s.file->params;
  const bool declares_tau =
      declared && std::find(declared->begin(), declared->end(), SymbolId::RelaxTime) != declared->end();
  if (declared && !declares_tau && tau) throw UsageError("tau is not declared in " + f.scheme_file);
  s.params.tau = tau.value_or(Rational(1));
  return s;
}

ReductionReport reduce_source(const Source& s) {
  if (s.model) return reduce_model(*s.model, s.p);
  return reduce(assemble(to_scheme_spec(*s.file)), s.p);
}

// Prints the failure and returns its exit code, or 0 when the reduction succeeded.
int report_failure(const ReductionReport& rep, std::ostream& err) {
  if (rep.ok()) return kExitOk;
  using K = ReductionFailureKind;
  const auto& f = *rep.failure;
  err << "error: reduction failed (" << to_string(f.kind) << "): " << f.message << "\n";
  switch (f.kind) {
    case K::FreeParameterRequired:
      err << "hint: the stencil leaves a one-parameter family of walks; choose a member with --p\n";
      return kExitUsage;
    case K::FreeParameterForbidden:
      err << "hint: the walk weights are already fixed; drop --p\n";
      return kExitUsage;
    case K::UnsolvableConstraint:
    case K::PositivityViolation:
      err << "hint: no admissible dt, dx exist for this discretization; try a different discretization of the PDE\n";
      return kExitReduction;
    default:
      return kExitReduction;
  }
}

RandomWalkForm reduced_form(const Source& s, std::ostream& err) {
  const ReductionReport rep = reduce_source(s);
  if (const int code = report_failure(rep, err)) throw ExitWith{code};
  return *rep.form;
}

// derive -------------------------------------------------------------------------------------

void print_derivation(const Source& s, const ReductionReport& rep, bool trace, std::ostream& out) {
  out << "model: " << s.label << "\n";
  if (s.model) out << "pde: " << model_info(*s.model).pde << "\n";
  out << "stencil (sum over offsets (dt,dx) of coeff * u_{m+dx}^{k+dt} = 0):\n";
  for (const auto& [o, c] : rep.input.entries()) out << "  " << to_string(o) << ": " << render(c) << "\n";
  out << "scale (leading term of the u_m^{k+1} coefficient): " << render(rep.scale) << "\n";
  if (rep.free_parameter) out << "p: " << to_string(*rep.free_parameter) << "\n";
  if (trace) {
    out << "trace:\n";
    for (const auto& st : rep.steps) {
      out << "  ";
      if (st.source == ConstraintStep::Source::Offset) {
        out << "eliminate " << to_string(st.offset) << ": ";
      } else {
        out << "fix walk parameter: ";
      }
      out << render(st.equation) << " = 0";
      if (st.solved) {
        out << "  =>  " << render(*st.solved);
      } else {
        out << "  (already satisfied)";
      }
      out << "\n";
    }
  }
  if (!rep.resolved.empty()) {
    out << "bindings:\n";
    for (const auto& b : rep.resolved) out << "  " << render(b) << "\n";
  }
  out << "normalizer: " << render(rep.normalizer) << "\n";
  if (rep.symbolic_weights) {
    const auto& w = *rep.symbolic_weights;
    out << "symbolic weights: p+ = " << render(w[0]) << ", p0 = " << render(w[1]) << ", p- = " << render(w[2]) << "\n";
  }
  if (!rep.form) return;
  const RandomWalkForm& f = *rep.form;
  out << "weights: p+ = " << to_string(f.p_plus) << ", p0 = " << to_string(f.p_zero)
      << ", p- = " << to_string(f.p_minus) << "\n";
  out << "update: u_m^{k+1} = " << to_string(f.p_plus) << "*u_{m+1}^k + " << to_string(f.p_zero) << "*u_m^k + "
      << to_string(f.p_minus) << "*u_{m-1}^k\n";
  try {
    const DerivedScales d = derived_scales(f);
    out << "scales: dx^2/(2*dt) = " << render(d.diffusivity_check);
    if (d.length_scale_sq) out << ", L^2 = " << render(*d.length_scale_sq);
    out << "\n";
    const NumericSteps n = numeric_steps(f, s.params, std::nullopt);
    out << "numeric: D = " << to_string(s.params.D);
    if (s.params.tau) out << ", tau = " << to_string(*s.params.tau);
    out << " gives dt = " << to_string(n.dt) << ", dx = " << (n.dx ? to_string(*n.dx) : num(n.dx_value)) << "\n";
  } catch (const UnderConstrained&) {
    out << "scales: dx is free; dt follows from the binding above\n";
  }
}

int cmd_derive(const SourceFlags& flags, bool as_json, bool trace, std::ostream& out, std::ostream& err) {
  const Source s = resolve_source(flags);
  const ReductionReport rep = reduce_source(s);
  if (as_json) {
    json j = to_json(rep, s.label);
    j["params"] = {{"D", to_string(s.params.D)},
                   {"tau", s.params.tau && (!s.model || model_info(*s.model).uses_tau) ? json(to_string(*s.params.tau))
                                                                                     : json(nullptr)}};
    out << j.dump(2) << "\n";
  } else {
    print_derivation(s, rep, trace, out);
  }
  return report_failure(rep, err);
}

// simulate -----------------------------------------------------------------------------------

struct SimFlags {
  std::size_t sites = 101;
  std::size_t steps = 100;
  std::size_t every = 1;
  std::string dx;
  std::string boundary = "periodic";
  std::string left = "0";
  std::string right = "0";
  std::string height = "1";
  std::string out_path;
};

template <class T>
void run_walk(const RandomWalkForm& form, const SimFlags& f, double dx, double dt, std::ostream& csv) {
  BoundaryPolicy<T> bc;
  if (f.boundary == "dirichlet") {
    bc = {BoundaryKind::Dirichlet, detail::from_rational<T>(rational_flag(f.left, "left")),
          detail::from_rational<T>(rational_flag(f.right, "right"))};
  }
  const std::size_t center = f.sites / 2;
  WalkRun<T> walk(form, delta_field<T>(f.sites, center, detail::from_rational<T>(rational_flag(f.height, "height")), dx, bc),
                  dt);
  csv << "step,site,x,value\n";
  const auto dump = [&] {
    const auto& v = walk.field().values;
    for (std::size_t m = 0; m < v.size(); ++m) {
      csv << walk.steps_taken() << "," << m << "," << num((static_cast<double>(m) - static_cast<double>(center)) * dx)
          << "," << str(v[m]) << "\n";
    }
  };
  dump();
  for (std::size_t k = 1; k <= f.steps; ++k) {
    walk.advance();
    if (k % f.every == 0 || k == f.steps) dump();
  }
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int cmd_simulate(const SourceFlags& sf, const SimFlags& f, std::ostream& out, std::ostream& err) {
  const Source s = resolve_source(sf);
  if (f.sites < 3) throw UsageError("--sites must be at least 3");
  if (f.every == 0) throw UsageError("--every must be positive");
  if (f.boundary != "periodic" && f.boundary != "dirichlet") throw UsageError("--boundary must be periodic or dirichlet");
  const RandomWalkForm form = reduced_form(s, err);

  std::optional<Rational> dx_flag;
  if (!f.dx.empty()) dx_flag = rational_flag(f.dx, "dx");
  NumericSteps n;
  try {
    n = numeric_steps(form, s.params, dx_flag.value_or(Rational(1, 10)));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (dx_flag && !n.dx_was_free) {
    throw UsageError("dx is fixed by the reduction (dx = " + num(n.dx_value) + "); drop --dx");
  }
  const double dt = to_double(n.dt);
  const char* env = std::getenv("MICROLIM_RATIONAL");
  const bool exact = env && std::string_view(env) == "1";

  std::ofstream file;
  if (!f.out_path.empty()) {
    file.open(f.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + f.out_path);
  }
  std::ostream& csv = f.out_path.empty() ? out : file;
  if (exact) {
    run_walk<Rational>(form, f, n.dx_value, dt, csv);
  } else {
    run_walk<double>(form, f, n.dx_value, dt, csv);
  }

  if (!f.out_path.empty()) {
    json meta = {{"command", "simulate"},
                 {"source", s.label},
                 {"D", to_string(s.params.D)},
                 {"tau", s.params.tau ? json(to_string(*s.params.tau)) : json(nullptr)},
                 {"weights", {{"plus", to_string(form.p_plus)}, {"zero", to_string(form.p_zero)},
                              {"minus", to_string(form.p_minus)}}},
                 {"dt", to_string(n.dt)},
                 {"dx", n.dx ? json(to_string(*n.dx)) : json(num(n.dx_value))},
                 {"sites", f.sites},
                 {"steps", f.steps},
                 {"every", f.every},
                 {"boundary", f.boundary},
                 {"arithmetic", exact ? "rational" : "double"},
                 {"csv", f.out_path},
                 {"created_utc", utc_now()}};
    std::ofstream side(f.out_path + ".meta.json");
    side << meta.dump(2) << "\n";
  }
  return kExitOk;
}

// converge -----------------------------------------------------------------------------------

void print_table(const ConvergenceTable& t, std::ostream& out) {
  out << "level,dx,dt,l1_error,ratio\n";
  for (const auto& r : t.rows) {
    out << r.level << "," << num(r.dx) << "," << num(r.dt) << "," << num(r.l1_error) << ","
        << (r.ratio ? num(*r.ratio) : "") << "\n";
  }
}

int cmd_converge(const SourceFlags& sf, std::size_t levels, const std::string& dx0, std::ostream& out,
                 std::ostream& err) {
  const Source s = resolve_source(sf);
  ConvergenceOptions opt;
  opt.p = s.p;
  if (!dx0.empty()) opt.dx0 = rational_flag(dx0, "dx0");
  const RandomWalkForm form = reduced_form(s, err);
  ModelParams params = s.params;
  try {
    print_table(convergence_study(form, s.label, params, levels, opt), out);
  } catch (const NonConvergent& e) {
    print_table(e.table(), out);
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kExitOk;
}

// chain --------------------------------------------------------------------------------------

struct ChainFlags {
  double c = 1.0;
  double dx = 0.1;
  double M = 1.0;
  std::size_t N = 256;
  std::string boundary = "periodic";
  std::vector<int> modes = {1, 2, 4, 8};
  std::optional<double> dt;
  double periods = 4.0;
  bool trajectory = false;
  std::optional<std::size_t> steps;
  std::size_t every = 1;
};

int cmd_chain(const ChainFlags& f, std::ostream& out) {
  if (f.boundary != "periodic" && f.boundary != "fixed") throw UsageError("--boundary must be periodic or fixed");
  ChainParams p{f.c, f.dx, f.M, f.N, f.boundary == "periodic" ? ChainBoundary::Periodic : ChainBoundary::FixedEnds};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (f.modes.empty()) throw UsageError("--mode needs at least one mode number");
  if (f.every == 0) throw UsageError("--every must be positive");
  const double dt = f.dt.value_or(0.1 * f.dx / f.c);
  if (!(dt > 0)) throw UsageError("--dt must be positive");
  if (dt >= f.dx / f.c) {
    throw UnstableStep("dt = " + num(dt) + " is not below the stability limit dx/c = " + num(f.dx / f.c));
  }

  if (!f.trajectory) {
    out << "mode,omega_measured,omega_theory,rel_err\n";
    for (int q : f.modes) {
      DispersionSample d;
      try {
        d = measure_dispersion(p, q, dt, f.periods);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      out << d.mode << "," << num(d.omega_measured) << "," << num(d.omega_theory) << "," << num(d.rel_err) << "\n";
    }
    return kExitOk;
  }

  const int q = f.modes.front();
  ChainState st = zero_state(p);
  st.u = mode_shape(p, q);
  const double omega = mode_frequency(p, q);
  const std::size_t steps =
      f.steps.value_or(omega > 0 ? static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / omega / dt)) : 100);
  out << "step,time,site,u,v\n";
  integrate(st, p, dt, steps, [&](std::size_t k, const ChainState& s) {
    if (k % f.every != 0 && k != steps) return;
    for (std::size_t m = 0; m < s.u.size(); ++m) {
      out << k << "," << num(s.time) << "," << m << "," << num(s.u[m]) << "," << num(s.v[m]) << "\n";
    }
  });
  return kExitOk;
}

// list-models / check ------------------------------------------------------------------------

int cmd_list_models(bool as_json, std::ostream& out) {
  json arr = json::array();
  for (ModelId m : kAllModels) {
    const auto& info = model_info(m);
    const ExpectedReduction e = expected_reduction(m);
    std::vector<std::string> templates;
    for (const auto& t : scheme_for(m).terms) templates.push_back(t.templ.name);
    if (as_json) {
      json bindings = json::object();
      for (const auto& b : e.form.constraints) bindings[std::string(to_string(b.unknown))] = render(b.value);
      arr.push_back({{"id", model_name(m)},
                     {"pde", info.pde},
                     {"templates", templates},
                     {"uses_tau", info.uses_tau},
                     {"default_p", e.free_parameter ? json(to_string(*e.free_parameter)) : json(nullptr)},
                     {"weights", {to_string(e.form.p_plus), to_string(e.form.p_zero), to_string(e.form.p_minus)}},
                     {"bindings", bindings}});
      continue;
    }
    out << model_name(m) << "\n  pde: " << info.pde << "\n  templates:";
    for (const auto& t : templates) out << " " << t;
    out << "\n  weights: (" << to_string(e.form.p_plus) << ", " << to_string(e.form.p_zero) << ", "
        << to_string(e.form.p_minus) << ")";
    if (e.free_parameter) out << " at p = " << to_string(*e.free_parameter);
    out << "\n  bindings:";
    for (const auto& b : e.form.constraints) out << " " << render(b) << ";";
    out << "\n";
  }
  if (as_json) out << arr.dump(2) << "\n";
  return kExitOk;
}

int cmd_check(std::uint64_t seed, std::ostream& out) {
  GoldenOptions opt;
  opt.seed = seed;
  bool all = true;
  for (const auto& r : run_golden_suite(opt)) {
    char t[32];
    std::snprintf(t, sizeof t, "%.3f", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << " (" << t << " s): " << r.detail << "\n";
    all = all && r.passed;
  }
  return all ? kExitOk : kExitNumeric;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"microlim: random-walk limits of heat-conduction schemes", "microlim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "microlim 0.1.0");

  SourceFlags derive_src;
  bool derive_json = false, derive_trace = false;
  auto* derive = app.add_subcommand("derive", "reduce a scheme to a random walk");
  add_source_flags(derive, derive_src);
  derive->add_flag("--json", derive_json, "emit the report as JSON");
  derive->add_flag("--trace", derive_trace, "show every eliminated coefficient and solved binding");

  SourceFlags sim_src;
  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "iterate the walk from a delta and print step,site,x,value");
  add_source_flags(simulate, sim_src);
  simulate->add_option("--sites", sim.sites, "lattice sites (default 101)");
  simulate->add_option("--steps", sim.steps, "steps (default 100)");
  simulate->add_option("--every", sim.every, "print every n-th step (default 1)");
  simulate->add_option("--dx", sim.dx, "space step when the reduction leaves it free (default 1/10)");
  simulate->add_option("--boundary", sim.boundary, "periodic or dirichlet");
  simulate->add_option("--left", sim.left, "left Dirichlet value");
  simulate->add_option("--right", sim.right, "right Dirichlet value");
  simulate->add_option("--height", sim.height, "initial delta value at the centre site (default 1)");
  simulate->add_option("--out", sim.out_path, "write CSV here and metadata to PATH.meta.json");

  SourceFlags conv_src;
  std::size_t conv_levels = 4;
  std::string conv_dx0;
  auto* converge = app.add_subcommand("converge", "L1 error against the heat kernel under refinement");
  add_source_flags(converge, conv_src);
  converge->add_option("--levels", conv_levels, "refinement levels (default 4)");
  converge->add_option("--dx0", conv_dx0, "coarsest dx when dx is free (default 1/5)");

  ChainFlags ch;
  double chain_dt = 0;
  std::size_t chain_steps = 0;
  auto* chain = app.add_subcommand("chain", "oscillator chain: dispersion report or trajectory");
  chain->add_option("--c", ch.c, "wave speed (default 1)");
  chain->add_option("--dx", ch.dx, "lattice spacing (default 0.1)");
  chain->add_option("--N", ch.N, "number of masses (default 256)");
  chain->add_option("--M", ch.M, "mass (default 1)");
  chain->add_option("--boundary", ch.boundary, "periodic or fixed");
  chain->add_option("--mode", ch.modes, "mode numbers, comma separated (default 1,2,4,8)")->delimiter(',');
  auto* dt_opt = chain->add_option("--dt", chain_dt, "time step (default 0.1*dx/c)");
  chain->add_option("--periods", ch.periods, "periods to integrate for the dispersion fit (default 4)");
  chain->add_flag("--trajectory", ch.trajectory, "print step,time,site,u,v for the first mode instead");
  auto* steps_opt = chain->add_option("--steps", chain_steps, "trajectory steps (default one period)");
  chain->add_option("--every", ch.every, "print every n-th trajectory step (default 1)");

  bool list_json = false;
  auto* list = app.add_subcommand("list-models", "show the built-in models");
  list->add_flag("--json", list_json, "emit JSON");

  std::uint64_t check_seed = GoldenOptions{}.seed;
  auto* check = app.add_subcommand("check", "run the exact self-checks; exit 0 iff all pass");
  check->add_option("--seed", check_seed, "seed for the randomized checks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*derive) return cmd_derive(derive_src, derive_json, derive_trace, out, err);
    if (*simulate) return cmd_simulate(sim_src, sim, out, err);
    if (*converge) return cmd_converge(conv_src, conv_levels, conv_dx0, out, err);
    if (*chain) {
      if (*dt_opt) ch.dt = chain_dt;
      if (*steps_opt) ch.steps = chain_steps;
      return cmd_chain(ch, out);
    }
    if (*list) return cmd_list_models(list_json, out);
    if (*check) return cmd_check(check_seed, out);
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnstableStep& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitReduction;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace microlim
