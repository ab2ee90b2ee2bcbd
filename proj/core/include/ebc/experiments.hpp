#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebc/delivery.hpp"
#include "ebc/model.hpp"
#include "ebc/placement.hpp"

namespace ebc {

// A trial that could not decode within its cleanup budget.
class DecodeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Worker count used when a `jobs` argument is 0.
int default_jobs();

// Runs fn(0..n-1) on up to `jobs` threads. Rethrows the exception of the
// lowest failing index, so failures are as deterministic as the results.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct MonteCarloOptions {
  int trials = 20;
  std::uint64_t seed = 0;
  int jobs = 0;
  PlacementScheme scheme = PlacementScheme::kDecentralized;
  SimOptions sim;  // on_slot is ignored
};

struct TrialSummary {
  std::uint64_t seed = 0;
  std::int64_t slots_total = 0;
  std::int64_t cleanup_slots = 0;
  bool decoded = false;
};

struct MonteCarloResult {
  double F = 0.0;     // normalizer: average file size
  double mean = 0.0;  // mean slots_total / F
  double stddev = 0.0;
  double stderr_mean = 0.0;
  double ci95 = 0.0;  // Student-t half-width; 0 for a single trial
  std::vector<TrialSummary> trials;

  std::int64_t total_slots() const;
  std::int64_t total_cleanup() const;
};

// Trial t uses seed trial_seed(opts.seed, t) for both placement and delivery.
// Throws DecodeFailure if any trial fails.
MonteCarloResult monte_carlo(const SystemConfig& cfg, const Demand& d, const MonteCarloOptions& opts);

enum class SweepParameter { kDelta, kMem, kUsers };
const char* to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& s);

struct SweepSpec {
  SweepParameter varying = SweepParameter::kMem;
  std::vector<double> grid;
  SystemConfig fixed;
  int trials = 20;
  std::uint64_t seed = 0;
  std::int64_t file_size = 10000;  // every file, overriding the template
  bool simulate = true;
  SimMode sim_mode = SimMode::kCount;
  int jobs = 0;
};

// Lengths are in file units (divided by F).
struct SweepRow {
  double param = 0.0;
  std::optional<double> t_fb;
  std::optional<double> t_nofb;
  std::optional<double> t_cent;
  std::optional<double> sim_mean;
  std::optional<double> sim_ci95;
  int trials = 0;
  std::int64_t F = 0;
  std::uint64_t seed = 0;
  std::string error;  // set when the grid point gives an invalid config
};

std::vector<SweepRow> sweep(const SweepSpec& spec);

struct MemoryAllocation {
  std::vector<double> mem;
  double objective = 0.0;  // T_tot / F
  double budget = 0.0;
};

struct MemoryOptimization {
  MemoryAllocation best;         // minimizes the delivery scheme's length
  MemoryAllocation lower_bound;  // minimizes the max-over-permutations closed form
  std::optional<double> symmetric_objective;  // M_k = budget/K, scheme length
  std::int64_t points = 0;
};

inline constexpr std::int64_t kMaxSearchPoints = 10'000'000;

// Exhaustive search over {M_k = n_k * step, sum = budget, 0 <= M_k <= N} plus the
// equal split M_k = budget / K.
// step <= 0 selects N/20. Demands are d_k = k.
MemoryOptimization optimize_memory(const SystemConfig& tmpl, double budget, double step = 0.0,
                                   int jobs = 0);

}  // namespace ebc
