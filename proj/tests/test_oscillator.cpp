#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "microlim/errors.hpp"
#include "microlim/oscillator.hpp"

using namespace microlim;

namespace {

ChainParams chain(std::size_t N, ChainBoundary b = ChainBoundary::Periodic, double dx = 0.1) {
  ChainParams p;
  p.N = N;
  p.dx = dx;
  p.boundary = b;
  return p;
}

ChainState random_state(gen::Gen& g, const ChainParams& p) {
  ChainState s = zero_state(p);
  for (std::size_t m = 0; m < p.N; ++m) {
    s.u[m] = g.real(-1, 1);
    s.v[m] = g.real(-1, 1);
  }
  if (p.boundary == ChainBoundary::FixedEnds) s.u.front() = s.u.back() = s.v.front() = s.v.back() = 0;
  return s;
}

}  // namespace

TEST_CASE("accelerations") {
  ChainParams p = chain(5, ChainBoundary::Periodic, 1.0);
  ChainState s = zero_state(p);
  s.u = {0, 0, 1, 0, 0};
  CHECK(accelerations(s, p) == std::vector<double>{0, 1, -2, 1, 0});
  s.u = {1, 0, 0, 0, 0};
  CHECK(accelerations(s, p) == std::vector<double>{-2, 1, 0, 0, 1});
  p.c = 2;
  CHECK(accelerations(s, p)[0] == -8.0);
  p.boundary = ChainBoundary::FixedEnds;
  s.u = {0, 1, 0, 0, 0};
  CHECK(accelerations(s, p) == std::vector<double>{0, -8, 4, 0, 0});
}

TEST_CASE("the zero state is an equilibrium") {
  const ChainParams p = chain(16);
  const ChainState s = integrate(zero_state(p), p, 0.01, 100);
  for (double x : s.u) CHECK(x == 0.0);
  CHECK(energy(s, p) == 0.0);
  CHECK(s.time == doctest::Approx(1.0));
}

TEST_CASE("parameter and step validation") {
  ChainParams p = chain(16);
  CHECK_THROWS_AS(integrate(zero_state(p), p, 0.1, 1), UnstableStep);
  CHECK_THROWS_AS(integrate(zero_state(p), p, 0.2, 1), UnstableStep);
  CHECK_NOTHROW(integrate(zero_state(p), p, 0.0999, 1));
  CHECK_THROWS_AS(integrate(zero_state(p), p, 0.0, 1), std::invalid_argument);
  ChainState wrong = zero_state(p);
  wrong.u.pop_back();
  CHECK_THROWS_AS(integrate(wrong, p, 0.01, 1), std::invalid_argument);
  p.N = 2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = chain(16);
  p.M = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  const ChainParams f = chain(16, ChainBoundary::FixedEnds);
  ChainState bad = zero_state(f);
  bad.u.front() = 0.5;
  CHECK_THROWS_AS(integrate(bad, f, 0.01, 1), std::invalid_argument);
}

TEST_CASE("momentum is conserved on a periodic chain") {
  gen::Gen g(61);
  for (int i = 0; i < 20; ++i) {
    const ChainParams p = chain(static_cast<std::size_t>(g.integer(3, 64)));
    const ChainState s0 = random_state(g, p);
    const ChainState s = integrate(s0, p, 0.05, 500);
    CHECK(std::abs(momentum(s, p) - momentum(s0, p)) < 1e-12);
  }
}

TEST_CASE("the integrator is time reversible") {
  gen::Gen g(62);
  for (auto b : {ChainBoundary::Periodic, ChainBoundary::FixedEnds}) {
    const ChainParams p = chain(32, b);
    const ChainState s0 = random_state(g, p);
    ChainState s = integrate(s0, p, 0.03, 1000);
    for (double& v : s.v) v = -v;
    s = integrate(s, p, 0.03, 1000);
    for (std::size_t m = 0; m < p.N; ++m) {
      CHECK(std::abs(s.u[m] - s0.u[m]) < 1e-9);
      CHECK(std::abs(s.v[m] + s0.v[m]) < 1e-9);
    }
  }
}

TEST_CASE("observer sees every step") {
  const ChainParams p = chain(8);
  std::size_t calls = 0, last = 0;
  integrate(zero_state(p), p, 0.01, 25, [&](std::size_t k, const ChainState&) {
    ++calls;
    last = k;
  });
  CHECK(calls == 26);
  CHECK(last == 25);
}

TEST_CASE("mode shapes and the lattice dispersion relation") {
  const ChainParams p = chain(256);
  const auto shape = mode_shape(p, 4);
  CHECK(shape[64] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(shape[16] == doctest::Approx(1.0));
  CHECK(mode_frequency(p, 4) == doctest::Approx(2 * 10.0 * std::sin(std::numbers::pi * 4 / 256)));
  CHECK(mode_wavenumber(p, 4) == doctest::Approx(2 * std::numbers::pi * 4 / (256 * 0.1)));
  const ChainParams f = chain(65, ChainBoundary::FixedEnds);
  const auto fs = mode_shape(f, 3);
  CHECK(fs.front() == 0.0);
  CHECK(fs.back() == 0.0);
  CHECK(mode_frequency(f, 3) == doctest::Approx(2 * 10.0 * std::sin(std::numbers::pi * 3 / 128)));
}

TEST_CASE("measured dispersion matches omega(k) within 1e-3") {
  const ChainParams p = chain(256);
  for (int q : {1, 2, 4, 8}) {
    const DispersionSample d = measure_dispersion(p, q, 0.01);
    CAPTURE(q);
    CHECK(d.omega_theory == doctest::Approx(mode_frequency(p, q)));
    CHECK(d.rel_err < 1e-3);
  }
  const ChainParams f = chain(129, ChainBoundary::FixedEnds);
  for (int q : {1, 3, 5}) CHECK(measure_dispersion(f, q, 0.01).rel_err < 1e-3);
  CHECK_THROWS_AS(measure_dispersion(p, 0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(measure_dispersion(p, 129, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(measure_dispersion(f, 128, 0.01), std::invalid_argument);
}

TEST_CASE("long waves travel at c") {
  ChainParams p = chain(1024, ChainBoundary::Periodic, 0.05);
  p.c = 3;
  const DispersionSample d = measure_dispersion(p, 1, 0.005);
  const double speed = d.omega_measured / mode_wavenumber(p, 1);
  CHECK(std::abs(speed - 3.0) / 3.0 < 0.01);
}

TEST_CASE("energy has no secular drift") {
  const ChainParams p = chain(256);
  ChainState s = zero_state(p);
  s.u = mode_shape(p, 8);
  const EnergyHistory h = energy_history(s, p, 0.01, 10000);
  CHECK(h.samples.size() == 10001);
  CHECK(h.envelope_drift() < 1e-6);
  // bounded oscillation of order (omega dt)^2
  const double w = mode_frequency(p, 8) * 0.01;
  CHECK(h.max_deviation() < w * w);

  const ChainParams f = chain(65, ChainBoundary::FixedEnds);
  ChainState fs = zero_state(f);
  fs.u = mode_shape(f, 3);
  const EnergyHistory r = energy_history(fs, f, 0.02, 10000);
  CHECK(r.envelope_drift() < 1e-6);
}
