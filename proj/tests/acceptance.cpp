// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "microlim/cli.hpp"
#include "microlim/golden.hpp"
#include "microlim/oscillator.hpp"
#include "microlim/simulate.hpp"

using namespace microlim;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  std::string detail;
};

bool report(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = o.passed && s < budget_s;
  std::printf("%s %2d %-28s %8.3f s  %s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), s, o.detail.c_str(),
              o.passed && !ok ? " (over time budget)" : "");
  return ok;
}

Outcome from_golden(const GoldenResult& r) { return {r.passed, r.detail}; }

Outcome convergence() {
  ConvergenceOptions opt;
  opt.p = Rational(1, 2);
  const ConvergenceTable t = convergence_study(ModelId::StandardHeat, {Rational(1), std::nullopt}, 4, opt);
  std::ostringstream d;
  bool ok = t.rows.size() == 4;
  d << "ratios";
  for (const auto& r : t.rows) {
    ok = ok && r.sites <= 8192;
    if (!r.ratio) continue;
    d << " " << *r.ratio;
    ok = ok && *r.ratio >= 3.0 && *r.ratio <= 5.0;
  }
  d << "; finest sites " << t.rows.back().sites;
  return {ok, d.str()};
}

Outcome oscillator() {
  ChainParams p;
  p.N = 256;
  p.dx = 0.1;
  p.c = 1.0;
  const double dt = 0.1 * p.dx / p.c;
  std::ostringstream d;
  bool ok = true;
  double worst = 0;
  for (int q : {1, 2, 4, 8}) {
    const DispersionSample s = measure_dispersion(p, q, dt);
    worst = std::max(worst, s.rel_err);
  }
  ok = ok && worst < 1e-3;
  d << "dispersion max rel err " << worst;

  ChainState s = zero_state(p);
  s.u = mode_shape(p, 8);
  const EnergyHistory h = energy_history(s, p, dt, 10000);
  ok = ok && h.envelope_drift() < 1e-6;
  d << "; energy drift " << h.envelope_drift() << " (bounded oscillation " << h.max_deviation() << ")";

  ChainParams lw = p;
  lw.N = 1024;
  const DispersionSample l = measure_dispersion(lw, 1, dt);
  const double speed = l.omega_measured / mode_wavenumber(lw, 1);
  ok = ok && std::abs(speed - lw.c) / lw.c < 0.01;
  d << "; long-wave speed " << speed;
  return {ok, d.str()};
}

Outcome check_command() {
  std::ostringstream out, err;
  const int code = run_cli({"check"}, out, err);
  return {code == kExitOk, "exit " + std::to_string(code)};
}

}  // namespace

int main() {
  const GoldenOptions g;
  bool all = true;
  all &= report(1, "golden derivations", 1.0, [] { return from_golden(check_golden_derivations()); });
  all &= report(2, "symmetry stencil identity", 60.0, [] { return from_golden(check_symmetry_stencil()); });
  all &= report(3, "scale identities", 60.0, [] { return from_golden(check_scale_identities()); });
  all &= report(4, "positivity", 60.0, [&] { return from_golden(check_positivity(g)); });
  all &= report(5, "conservation", 60.0, [&] { return from_golden(check_conservation(g)); });
  all &= report(6, "binomial oracle", 60.0, [] { return from_golden(check_binomial()); });
  all &= report(7, "continuum-limit convergence", 30.0, convergence);
  all &= report(8, "oscillator chain", 10.0, oscillator);
  all &= report(9, "scheme language", 60.0, [&] { return from_golden(check_scheme_language(g)); });
  all &= report(10, "check subcommand", 60.0, check_command);
  return all ? 0 : 1;
}
