#include "ebc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "ebc/analysis.hpp"
#include "ebc/rng.hpp"

namespace ebc {

int default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 0) jobs = default_jobs();
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::int64_t MonteCarloResult::total_slots() const {
  std::int64_t s = 0;
  for (const auto& t : trials) s += t.slots_total;
  return s;
}

std::int64_t MonteCarloResult::total_cleanup() const {
  std::int64_t s = 0;
  for (const auto& t : trials) s += t.cleanup_slots;
  return s;
}

MonteCarloResult monte_carlo(const SystemConfig& cfg, const Demand& d, const MonteCarloOptions& opts) {
  require_valid(cfg, d);
  if (opts.trials < 1) throw ConfigError("trials", "must be >= 1");
  std::optional<PlacementMap> shared;
  if (opts.scheme == PlacementScheme::kCentralized) shared = centralized_place(cfg);

  SimOptions sim = opts.sim;
  sim.on_slot = nullptr;
  MonteCarloResult out;
  out.F = cfg.average_file_size();
  out.trials.resize(static_cast<std::size_t>(opts.trials));
  std::vector<std::string> failures(out.trials.size());

  parallel_for(out.trials.size(), opts.jobs, [&](std::size_t t) {
    const std::uint64_t s = trial_seed(opts.seed, t);
    SimResult r;
    if (shared) {
      r = run_delivery(cfg, *shared, d, s, sim);
    } else {
      auto pm = decentralized_place(cfg, s, d.file_of);
      r = run_delivery(cfg, pm, d, s, sim);
    }
    out.trials[t] = {s, r.slots_total, r.cleanup_slots, r.all_decoded()};
    if (!r.all_decoded()) failures[t] = r.failure.empty() ? "decode failed" : r.failure;
  });
  for (std::size_t t = 0; t < failures.size(); ++t) {
    if (!failures[t].empty()) {
      throw DecodeFailure("trial " + std::to_string(t) + " (seed " +
                          std::to_string(out.trials[t].seed) + "): " + failures[t]);
    }
  }

  const double n = static_cast<double>(out.trials.size());
  std::vector<double> x;
  for (const auto& t : out.trials) {
    x.push_back(out.F > 0 ? static_cast<double>(t.slots_total) / out.F
                          : static_cast<double>(t.slots_total));
  }
  out.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / (n - 1));
    out.stderr_mean = out.stddev / std::sqrt(n);
    boost::math::students_t dist(n - 1);
    out.ci95 = boost::math::quantile(boost::math::complement(dist, 0.025)) * out.stderr_mean;
  }
  return out;
}

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kDelta: return "delta";
    case SweepParameter::kMem: return "mem";
    case SweepParameter::kUsers: return "K";
  }
  return "?";
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
  if (s == "delta") return SweepParameter::kDelta;
  if (s == "mem") return SweepParameter::kMem;
  if (s == "K") return SweepParameter::kUsers;
  throw ConfigError("vary", "expected delta, mem or K, got '" + s + "'");
}

namespace {

SystemConfig sweep_point(const SweepSpec& spec, double v) {
  SystemConfig cfg = spec.fixed;
  switch (spec.varying) {
    case SweepParameter::kDelta:
      cfg.delta.assign(cfg.K, v);
      break;
    case SweepParameter::kMem:
      cfg.mem.assign(cfg.K, v);
      break;
    case SweepParameter::kUsers: {
      if (v != std::floor(v) || v < 1) throw ConfigError("K", "grid value must be a positive integer");
      double d0 = cfg.delta.empty() ? 0.0 : cfg.delta[0];
      double m0 = cfg.mem.empty() ? 0.0 : cfg.mem[0];
      cfg.K = static_cast<int>(v);
      cfg.delta.assign(cfg.K, d0);
      cfg.mem.assign(cfg.K, m0);
      break;
    }
  }
  cfg.file_sizes.assign(static_cast<std::size_t>(std::max(cfg.N, 0)), spec.file_size);
  require_valid(cfg);
  return cfg;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) throw ConfigError("grid", "must be nonempty");
  if (spec.trials < 1) throw ConfigError("trials", "must be >= 1");
  if (spec.file_size < 1) throw ConfigError("F", "must be >= 1");
  std::vector<SweepRow> rows;
  for (double v : spec.grid) {
    SweepRow row;
    row.param = v;
    row.F = spec.file_size;
    row.seed = spec.seed;
    row.trials = spec.simulate ? spec.trials : 0;
    try {
      SystemConfig cfg = sweep_point(spec, v);
      const double F = static_cast<double>(spec.file_size);
      const Demand d = Demand::identity(cfg.K);
      row.t_fb = phase_plan(cfg, d, {false}).total / F;
      try {
        row.t_nofb = ttot_no_feedback(cfg, PlacementScheme::kDecentralized) / F;
      } catch (const ConfigError&) {
      }
      try {
        centralized_b(cfg);
        bool same_delta = std::all_of(cfg.delta.begin(), cfg.delta.end(),
                                      [&](double x) { return x == cfg.delta[0]; });
        if (same_delta) row.t_cent = ttot_centralized(cfg.K, cfg.delta[0], cfg.mem[0], cfg.N, F) / F;
      } catch (const ConfigError&) {
      }
      if (spec.simulate) {
        MonteCarloOptions mc;
        mc.trials = spec.trials;
        mc.seed = spec.seed;
        mc.jobs = spec.jobs;
        mc.sim.mode = spec.sim_mode;
        auto r = monte_carlo(cfg, d, mc);
        row.sim_mean = r.mean;
        row.sim_ci95 = r.ci95;
      }
    } catch (const ConfigError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

MemoryOptimization optimize_memory(const SystemConfig& tmpl, double budget, double step, int jobs) {
  require_valid(tmpl);
  const int K = tmpl.K;
  if (K > kMaxPermutationUsers) {
    throw ConfigError("K", "memory search needs K <= " + std::to_string(kMaxPermutationUsers));
  }
  if (step <= 0.0) step = tmpl.N / 20.0;
  if (!(budget >= 0.0 && budget <= static_cast<double>(K) * tmpl.N + 1e-9)) {
    throw ConfigError("budget", "must be in [0, K*N]");
  }
  const double units_f = budget / step;
  const auto units = static_cast<int>(std::llround(units_f));
  if (std::fabs(units_f - units) > 1e-9 * std::max(1.0, units_f)) {
    throw ConfigError("step", "must divide the budget");
  }
  const int cap = static_cast<int>(std::floor(tmpl.N / step + 1e-9));

  // ways[i][s]: compositions of s units into users i..K-1, each <= cap.
  std::vector<std::vector<double>> ways(K + 1, std::vector<double>(units + 1, 0.0));
  ways[K][0] = 1.0;
  for (int i = K - 1; i >= 0; --i) {
    for (int s = 0; s <= units; ++s) {
      for (int x = 0; x <= std::min(cap, s); ++x) ways[i][s] += ways[i + 1][s - x];
    }
  }
  if (ways[0][units] > static_cast<double>(kMaxSearchPoints)) {
    throw ConfigError("step", "search space exceeds " + std::to_string(kMaxSearchPoints) + " points");
  }
  if (ways[0][units] == 0.0) throw ConfigError("budget", "no allocation fits the budget");

  const double F = tmpl.average_file_size() > 0 ? tmpl.average_file_size() : 1.0;
  const std::vector<double> sizes = demand_sizes(tmpl, Demand::identity(K));
  auto evaluate = [&](const std::vector<double>& mem, double& scheme, double& bound) {
    SystemConfig cfg = tmpl;
    cfg.mem = mem;
    scheme = phase_plan(cfg, sizes, {false}).total / F;
    bound = ttot_closed_form(cfg, sizes).total / F;
  };

  MemoryOptimization out;
  out.best.objective = out.lower_bound.objective = std::numeric_limits<double>::infinity();
  out.best.budget = out.lower_bound.budget = budget;

  constexpr std::size_t kChunk = 4096;
  std::vector<std::vector<double>> chunk;
  auto flush = [&] {
    std::vector<double> scheme(chunk.size()), bound(chunk.size());
    parallel_for(chunk.size(), jobs, [&](std::size_t i) { evaluate(chunk[i], scheme[i], bound[i]); });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (scheme[i] < out.best.objective) out.best = {chunk[i], scheme[i], budget};
      if (bound[i] < out.lower_bound.objective) out.lower_bound = {chunk[i], bound[i], budget};
    }
    out.points += static_cast<std::int64_t>(chunk.size());
    chunk.clear();
  };

  std::vector<int> n(K, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == K - 1) {
      if (left > cap) return;
      n[i] = left;
      std::vector<double> mem(K);
      for (int k = 0; k < K; ++k) mem[k] = n[k] * step;
      chunk.push_back(std::move(mem));
      if (chunk.size() == kChunk) flush();
      return;
    }
    for (int x = 0; x <= std::min(cap, left); ++x) {
      n[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(0, units);
  if (!chunk.empty()) flush();

  // The equal split is a candidate too, even when budget / K is off the grid.
  if (budget / K <= tmpl.N + 1e-12) {
    std::vector<double> even(K, budget / K);
    double scheme = 0.0, bound = 0.0;
    evaluate(even, scheme, bound);
    out.symmetric_objective = scheme;
    if (scheme < out.best.objective) out.best = {even, scheme, budget};
    if (bound < out.lower_bound.objective) out.lower_bound = {even, bound, budget};
  }
  return out;
}

}  // namespace ebc
