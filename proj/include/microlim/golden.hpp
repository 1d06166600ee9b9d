#pragma once

// The exact-arithmetic self-check behind `microlim check`: golden derivations, the symmetry
// stencil identity, scale identities, positivity, conservation, the binomial response and the
// scheme-language round trip.

#include <cstdint>
#include <string>
#include <vector>

namespace microlim {

struct GoldenResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct GoldenOptions {
  std::uint64_t seed = 20240517;
  int positivity_cases = 1000;
  int conservation_steps = 100;
  int round_trip_cases = 500;
};

std::vector<GoldenResult> run_golden_suite(const GoldenOptions& options = {});

// Individual checks; each returns a result with its id filled in.
GoldenResult check_golden_derivations();
GoldenResult check_symmetry_stencil();
GoldenResult check_scale_identities();
GoldenResult check_positivity(const GoldenOptions& options);
GoldenResult check_conservation(const GoldenOptions& options);
GoldenResult check_binomial();
GoldenResult check_scheme_language(const GoldenOptions& options);

}  // namespace microlim
