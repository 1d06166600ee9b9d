// Serial reference vs OpenMP kernel, walk update and chain accelerations.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "microlim/kernels.hpp"

using namespace microlim::kernels;

namespace {

std::vector<double> field(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

template <bool Parallel>
void walk(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a = field(n), b(n);
  const WalkWeights<double> w{0.25, 0.5, 0.25};
  const BoundaryPolicy<double> bc{};
  for (auto _ : state) {
    if constexpr (Parallel) {
      walk_step_parallel<double>(a, b, w, bc);
    } else {
      walk_step_serial<double>(a, b, w, bc);
    }
    a.swap(b);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}

template <bool Parallel>
void chain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> u = field(n);
  std::vector<double> acc(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      chain_accel_parallel(u, acc, 100.0, true);
    } else {
      chain_accel_serial(u, acc, 100.0, true);
    }
    benchmark::DoNotOptimize(acc.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}

}  // namespace

BENCHMARK(walk<false>)->Name("walk/serial")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(walk<true>)->Name("walk/openmp")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(chain<false>)->Name("chain/serial")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);
BENCHMARK(chain<true>)->Name("chain/openmp")->RangeMultiplier(16)->Range(1 << 10, 1 << 22);

BENCHMARK_MAIN();
