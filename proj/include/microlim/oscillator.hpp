#pragma once

// The semi-discrete wave equation d^2u_m/dt^2 = (c^2/dx^2)(u_{m+1} - 2u_m + u_{m-1}) read as
// a chain of masses M joined by springs k = M c^2 / dx^2.

#include <cstddef>
#include <functional>
#include <vector>

namespace microlim {

enum class ChainBoundary { Periodic, FixedEnds };

struct ChainParams {
  double c = 1.0;
  double dx = 1.0;
  double M = 1.0;
  std::size_t N = 3;
  ChainBoundary boundary = ChainBoundary::Periodic;

  double spring() const { return M * c * c / (dx * dx); }
  double coupling() const { return c * c / (dx * dx); }  // k / M
  void validate() const;
};

struct ChainState {
  std::vector<double> u;
  std::vector<double> v;
  double time = 0.0;
};

ChainState zero_state(const ChainParams& params);

std::vector<double> accelerations(const ChainState& state, const ChainParams& params);

// Sum of 1/2 M v^2 over masses plus 1/2 k (u_{m+1} - u_m)^2 over springs.
double energy(const ChainState& state, const ChainParams& params);
double momentum(const ChainState& state, const ChainParams& params);

using ChainObserver = std::function<void(std::size_t step, const ChainState& state)>;

// Kick-drift-kick velocity Verlet. Throws UnstableStep unless dt < dx/c, and
// std::invalid_argument for malformed state (wrong sizes, nonzero clamped ends).
// The observer, if set, sees the initial state (step 0) and every state after a step.
ChainState integrate(ChainState state, const ChainParams& params, double dt, std::size_t steps,
                     const ChainObserver& observer = {});

// Normal mode q: sin(2 pi q m / N) (periodic) or sin(pi q m / (N-1)) (fixed ends).
std::vector<double> mode_shape(const ChainParams& params, int q);
// omega(q) = 2 (c/dx) |sin(pi q / N)| (periodic), 2 (c/dx) sin(pi q / (2(N-1))) (fixed ends).
double mode_frequency(const ChainParams& params, int q);
double mode_wavenumber(const ChainParams& params, int q);

struct DispersionSample {
  int mode = 0;
  double omega_measured = 0;
  double omega_theory = 0;
  double rel_err = 0;
};

// Releases mode q from rest, projects the trajectory onto the mode shape, and fits the
// zero-crossing times t_j = t_0 + j pi / omega by least squares.
DispersionSample measure_dispersion(const ChainParams& params, int q, double dt, double periods = 4.0);

struct EnergyHistory {
  std::vector<double> samples;  // energy after every step, samples[0] initial
  double initial = 0;
  // max |E - E0| / E0 over the run.
  double max_deviation() const;
  // Secular drift: |max E over the last quarter - max E over the first quarter| / E0.
  // Bounded oscillation (the leapfrog's periodic exchange with its shadow energy) cancels.
  double envelope_drift() const;
};

EnergyHistory energy_history(const ChainState& initial, const ChainParams& params, double dt, std::size_t steps);

}  // namespace microlim
