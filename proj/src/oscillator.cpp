#include "microlim/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "microlim/errors.hpp"
#include "microlim/kernels.hpp"

namespace microlim {

void ChainParams::validate() const {
  if (!(c > 0) || !(dx > 0) || !(M > 0)) throw std::invalid_argument("c, dx and M must be positive");
  if (N < 3) throw std::invalid_argument("a chain needs at least 3 sites");
}

ChainState zero_state(const ChainParams& params) {
  params.validate();
  return {std::vector<double>(params.N, 0.0), std::vector<double>(params.N, 0.0), 0.0};
}

namespace {

void check_state(const ChainState& s, const ChainParams& p) {
  if (s.u.size() != p.N || s.v.size() != p.N) throw std::invalid_argument("state size does not match N");
}

bool periodic(const ChainParams& p) { return p.boundary == ChainBoundary::Periodic; }

}  // namespace

std::vector<double> accelerations(const ChainState& state, const ChainParams& params) {
  params.validate();
  check_state(state, params);
  std::vector<double> a(params.N);
  kernels::chain_accel_parallel(state.u, a, params.coupling(), periodic(params));
  return a;
}

double energy(const ChainState& state, const ChainParams& params) {
  check_state(state, params);
  const std::size_t n = params.N;
  double kinetic = 0, potential = 0;
  for (double v : state.v) kinetic += v * v;
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const double s = state.u[m + 1] - state.u[m];
    potential += s * s;
  }
  if (periodic(params)) {
    const double s = state.u[0] - state.u[n - 1];
    potential += s * s;
  }
  return 0.5 * params.M * kinetic + 0.5 * params.spring() * potential;
}

double momentum(const ChainState& state, const ChainParams& params) {
  check_state(state, params);
  double p = 0;
  for (double v : state.v) p += params.M * v;
  return p;
}

ChainState integrate(ChainState state, const ChainParams& params, double dt, std::size_t steps,
                     const ChainObserver& observer) {
  params.validate();
  check_state(state, params);
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  const double limit = params.dx / params.c;
  if (dt >= limit) {
    throw UnstableStep("dt = " + std::to_string(dt) + " is not below the stability limit dx/c = " +
                       std::to_string(limit));
  }
  if (!periodic(params)) {
    const std::size_t e = params.N - 1;
    if (state.u[0] != 0 || state.u[e] != 0 || state.v[0] != 0 || state.v[e] != 0) {
      throw std::invalid_argument("fixed ends require u and v to vanish at the first and last site");
    }
  }
  const double coupling = params.coupling();
  const bool wrap = periodic(params);
  std::vector<double> a(params.N);
  kernels::chain_accel_parallel(state.u, a, coupling, wrap);
  if (observer) observer(0, state);
  const double half = 0.5 * dt;
  for (std::size_t s = 1; s <= steps; ++s) {
    for (std::size_t m = 0; m < params.N; ++m) {
      state.v[m] += half * a[m];
      state.u[m] += dt * state.v[m];
    }
    kernels::chain_accel_parallel(state.u, a, coupling, wrap);
    for (std::size_t m = 0; m < params.N; ++m) state.v[m] += half * a[m];
    state.time += dt;
    if (observer) observer(s, state);
  }
  return state;
}

std::vector<double> mode_shape(const ChainParams& params, int q) {
  params.validate();
  std::vector<double> phi(params.N);
  const double n = static_cast<double>(params.N);
  for (std::size_t m = 0; m < params.N; ++m) {
    const double x = static_cast<double>(m);
    phi[m] = periodic(params) ? std::sin(2.0 * std::numbers::pi * q * x / n)
                              : std::sin(std::numbers::pi * q * x / (n - 1.0));
  }
  if (!periodic(params)) {
    phi.front() = 0.0;
    phi.back() = 0.0;
  }
  return phi;
}

double mode_frequency(const ChainParams& params, int q) {
  const double n = static_cast<double>(params.N);
  const double arg = periodic(params) ? std::numbers::pi * q / n : std::numbers::pi * q / (2.0 * (n - 1.0));
  return 2.0 * (params.c / params.dx) * std::abs(std::sin(arg));
}

double mode_wavenumber(const ChainParams& params, int q) {
  const double n = static_cast<double>(params.N);
  return periodic(params) ? 2.0 * std::numbers::pi * q / (n * params.dx)
                          : std::numbers::pi * q / ((n - 1.0) * params.dx);
}

DispersionSample measure_dispersion(const ChainParams& params, int q, double dt, double periods) {
  params.validate();
  const int max_mode = periodic(params) ? static_cast<int>(params.N / 2) : static_cast<int>(params.N) - 2;
  if (q < 1 || q > max_mode) throw std::invalid_argument("mode " + std::to_string(q) + " is out of range");
  if (periods < 2) throw std::invalid_argument("need at least two periods");
  const double omega = mode_frequency(params, q);
  const std::vector<double> phi = mode_shape(params, q);
  double norm = 0;
  for (double x : phi) norm += x * x;

  ChainState s = zero_state(params);
  s.u = phi;
  const auto steps = static_cast<std::size_t>(std::ceil(periods * 2.0 * std::numbers::pi / omega / dt));

  std::vector<double> crossings;
  double prev_amp = 1.0, prev_t = 0.0;
  integrate(s, params, dt, steps, [&](std::size_t step, const ChainState& st) {
    double amp = 0;
    for (std::size_t m = 0; m < params.N; ++m) amp += st.u[m] * phi[m];
    amp /= norm;
    if (step > 0 && ((prev_amp > 0 && amp <= 0) || (prev_amp < 0 && amp >= 0))) {
      crossings.push_back(prev_t + (st.time - prev_t) * prev_amp / (prev_amp - amp));
    }
    prev_amp = amp;
    prev_t = st.time;
  });
  if (crossings.size() < 3) throw std::runtime_error("too few zero crossings to fit a frequency");

  // t_j = a + b j, b = pi / omega
  const double n = static_cast<double>(crossings.size());
  double sj = 0, st = 0, sjj = 0, sjt = 0;
  for (std::size_t j = 0; j < crossings.size(); ++j) {
    const double x = static_cast<double>(j);
    sj += x;
    st += crossings[j];
    sjj += x * x;
    sjt += x * crossings[j];
  }
  const double slope = (n * sjt - sj * st) / (n * sjj - sj * sj);
  DispersionSample out;
  out.mode = q;
  out.omega_measured = std::numbers::pi / slope;
  out.omega_theory = omega;
  out.rel_err = std::abs(out.omega_measured - omega) / omega;
  return out;
}

double EnergyHistory::max_deviation() const {
  double worst = 0;
  for (double e : samples) worst = std::max(worst, std::abs(e - initial));
  return worst / initial;
}

double EnergyHistory::envelope_drift() const {
  const std::size_t q = std::max<std::size_t>(1, samples.size() / 4);
  const double first = *std::max_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(q));
  const double last = *std::max_element(samples.end() - static_cast<std::ptrdiff_t>(q), samples.end());
  return std::abs(last - first) / initial;
}

EnergyHistory energy_history(const ChainState& initial, const ChainParams& params, double dt, std::size_t steps) {
  EnergyHistory h;
  h.samples.reserve(steps + 1);
  integrate(initial, params, dt, steps,
            [&](std::size_t, const ChainState& st) { h.samples.push_back(energy(st, params)); });
  h.initial = h.samples.front();
  if (!(h.initial > 0)) throw std::invalid_argument("energy history needs a state with positive energy");
  return h;
}

}  // namespace microlim
