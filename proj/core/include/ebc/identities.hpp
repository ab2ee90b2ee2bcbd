#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ebc/model.hpp"

namespace ebc {

struct OneSidedFairSample {
  SystemConfig cfg;
  RateVector rates;
};

// delta sorted descending, p in (0,1), rates built down the chain so every
// pair satisfies both one-sided fairness conditions.
OneSidedFairSample random_one_sided_fair(int K, std::mt19937_64& g);
// Unconstrained delta in [0, 0.95) and p in [0, 1).
SystemConfig random_config(int K, std::mt19937_64& g);

struct IdentityCheck {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::int64_t cases = 0;
  std::int64_t violations = 0;  // for boolean checks
  bool passed() const { return max_residual < tolerance && violations == 0; }
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool passed() const;
  double max_residual() const;
};

// Randomized checks use K cycling through 2..max_K. Grid checks use their
// own fixed grids (delta in 0.1..0.9, K in 2..8).
IdentityReport run_identity_suite(int max_K, int samples, std::uint64_t seed);

// Individual checks, exposed for tests and the acceptance runner.
IdentityCheck check_alternating_sum(int max_K, int samples, std::uint64_t seed);
IdentityCheck check_aggregate_identity(int max_K, int samples, std::uint64_t seed);
IdentityCheck check_weights_lemma(int max_K, int samples, std::uint64_t seed);
IdentityCheck check_decomposition_grid();
IdentityCheck check_phase_recursion_grid();
IdentityCheck check_worst_user(int max_K, int samples, std::uint64_t seed);
IdentityCheck check_dominance(int max_K, int samples, std::uint64_t seed);
IdentityCheck check_plan_one_sided_fair(int min_K, int max_K, int samples, std::uint64_t seed);

}  // namespace ebc
