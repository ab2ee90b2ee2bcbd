#include "ebc/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ebc/analysis.hpp"
#include "ebc/rng.hpp"

namespace ebc {

namespace {

double uniform(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * uniform01(g); }

int cycle_K(int s, int max_K) { return 2 + s % std::max(1, max_K - 1); }

SystemConfig with_p(int K, std::vector<double> delta, const std::vector<double>& p) {
  SystemConfig cfg;
  cfg.K = K;
  cfg.N = K;
  cfg.delta = std::move(delta);
  for (double x : p) cfg.mem.push_back(x * K);
  cfg.file_sizes.assign(K, 1);
  return cfg;
}

IdentityCheck randomized(const char* name, double tol, int max_K, int samples,
                         std::uint64_t seed, std::uint64_t salt,
                         const std::function<void(const SystemConfig&, std::mt19937_64&,
                                                  IdentityCheck&)>& body) {
  IdentityCheck c{name, 0.0, tol};
  auto g = make_stream(seed, Stream::kSampling, salt);
  for (int s = 0; s < samples; ++s) body(random_config(cycle_K(s, max_K), g), g, c);
  return c;
}

}  // namespace

OneSidedFairSample random_one_sided_fair(int K, std::mt19937_64& g) {
  std::vector<double> delta(K), p(K);
  for (auto& d : delta) d = uniform(g, 0.02, 0.95);
  std::sort(delta.begin(), delta.end(), std::greater<>());
  for (auto& x : p) x = uniform(g, 0.02, 0.98);
  std::vector<double> rho(K);
  for (int k = 0; k < K; ++k) rho[k] = (1 - p[k]) / p[k];
  std::vector<double> r(K);
  r[0] = uniform(g, 0.2, 2.0);
  for (int k = 1; k < K; ++k) {
    double cap = std::min(delta[k - 1] * r[k - 1] / delta[k], rho[k - 1] * r[k - 1] / rho[k]);
    r[k] = cap * uniform(g, 0.05, 1.0);
  }
  return {with_p(K, std::move(delta), p), RateVector{std::move(r)}};
}

SystemConfig random_config(int K, std::mt19937_64& g) {
  std::vector<double> delta(K), p(K);
  for (auto& d : delta) d = uniform(g, 0.0, 0.95);
  for (auto& x : p) x = uniform01(g);
  return with_p(K, std::move(delta), p);
}

bool IdentityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.max_residual);
  return m;
}

IdentityCheck check_alternating_sum(int max_K, int samples, std::uint64_t seed) {
  return randomized("alternating_sum", 1e-9, max_K, samples, seed, 1,
                    [](const SystemConfig& cfg, std::mt19937_64& g, IdentityCheck& c) {
                      std::vector<double> F(cfg.K);
                      for (auto& f : F) f = uniform(g, 0.5, 2.0);
                      auto plan = phase_plan(cfg, F, {false});
                      for (UserSet J : canonical_subsets(cfg.K)) {
                        for (int k : J) {
                          double alt = subphase_length_alternating(cfg, J, k, F[k]);
                          c.max_residual = std::max(c.max_residual, std::fabs(alt - plan.tk(J, k)));
                          ++c.cases;
                        }
                      }
                    });
}

IdentityCheck check_aggregate_identity(int max_K, int samples, std::uint64_t seed) {
  return randomized(
      "aggregate_length", 1e-9, max_K, samples, seed, 2,
      [](const SystemConfig& cfg, std::mt19937_64& g, IdentityCheck& c) {
        std::vector<double> F(cfg.K);
        for (auto& f : F) f = uniform(g, 0.5, 2.0);
        auto plan = phase_plan(cfg, F, {false});
        const UserSet all = UserSet::all(cfg.K);
        for (UserSet J : canonical_subsets(cfg.K)) {
          for (int k : J) {
            double lhs = 0.0;
            for_each_subset(J.without(k), [&](UserSet H) { lhs += plan.tk(H.with(k), k); });
            double rhs = weight(cfg, (all - J).with(k)) * F[k];
            c.max_residual = std::max(c.max_residual, std::fabs(lhs - rhs));
            ++c.cases;
          }
        }
      });
}

IdentityCheck check_weights_lemma(int max_K, int samples, std::uint64_t seed) {
  return randomized("weights_lemma", 1e-9, max_K, samples, seed, 3,
                    [](const SystemConfig& cfg, std::mt19937_64&, IdentityCheck& c) {
                      const UserSet all = UserSet::all(cfg.K);
                      for (UserSet J : canonical_subsets(cfg.K)) {
                        if (J == all) continue;  // w of the empty set is undefined
                        double lhs = 0.0;
                        for_each_subset(J, [&](UserSet I) {
                          for_each_subset(I, [&](UserSet H) {
                            double w = weight(cfg, (all - I) | H);
                            lhs += H.size() % 2 ? -w : w;
                          });
                        });
                        double rhs = weight(cfg, all - J);
                        c.max_residual = std::max(c.max_residual, std::fabs(lhs - rhs));
                        ++c.cases;
                      }
                    });
}

IdentityCheck check_decomposition_grid() {
  IdentityCheck c{"decomposition_residual", 0.0, 1e-9};
  for (int K = 2; K <= 8; ++K) {
    for (int i = 1; i <= 9; ++i) {
      for (double N1 : {1.0, 10.0}) {
        c.max_residual = std::max(c.max_residual, decomposition_identity_residual(K, i / 10.0, N1));
        ++c.cases;
      }
    }
  }
  return c;
}

IdentityCheck check_phase_recursion_grid() {
  IdentityCheck c{"phase_recursion", 0.0, 1e-9};
  for (int K = 2; K <= 8; ++K) {
    for (int i = 1; i <= 9; ++i) {
      for (double N1 : {1.0, 10.0}) {
        c.max_residual = std::max(c.max_residual, phase_recursion_residual(K, i / 10.0, N1));
        ++c.cases;
      }
    }
  }
  return c;
}

IdentityCheck check_worst_user(int max_K, int samples, std::uint64_t seed) {
  IdentityCheck c{"worst_user_is_min", 0.0, 1.0};
  auto g = make_stream(seed, Stream::kSampling, 4);
  for (int s = 0; s < samples; ++s) {
    auto sample = random_one_sided_fair(cycle_K(s, max_K), g);
    auto unit = phase_plan(sample.cfg, std::vector<double>(sample.cfg.K, 1.0), {false});
    for (UserSet J : canonical_subsets(sample.cfg.K)) {
      c.violations += worst_user(unit, J, sample.rates) != J.min();
      ++c.cases;
    }
  }
  return c;
}

IdentityCheck check_dominance(int max_K, int samples, std::uint64_t seed) {
  IdentityCheck c{"permutation_dominance", 0.0, 1.0};
  auto g = make_stream(seed, Stream::kSampling, 5);
  for (int s = 0; s < samples; ++s) {
    auto sample = random_one_sided_fair(cycle_K(s, max_K), g);
    c.violations += !permutation_dominance_check(sample.cfg, sample.rates).holds;
    ++c.cases;
  }
  return c;
}

IdentityCheck check_plan_one_sided_fair(int min_K, int max_K, int samples, std::uint64_t seed) {
  IdentityCheck c{"plan_vs_closed_form_one_sided_fair", 0.0, 1e-9};
  auto g = make_stream(seed, Stream::kSampling, 6);
  const int span = max_K - min_K + 1;
  for (int s = 0; s < samples; ++s) {
    auto sample = random_one_sided_fair(min_K + s % span, g);
    auto cmp = compare_plan(sample.cfg, sample.rates.rates);
    c.max_residual = std::max(c.max_residual, std::fabs(cmp.gap));
    ++c.cases;
  }
  return c;
}

IdentityReport run_identity_suite(int max_K, int samples, std::uint64_t seed) {
  if (max_K < 2 || max_K > kMaxPermutationUsers) {
    throw ConfigError("K", "identity suite needs 2 <= K <= " + std::to_string(kMaxPermutationUsers));
  }
  if (samples < 1) throw ConfigError("samples", "must be >= 1");
  IdentityReport r;
  r.checks.push_back(check_alternating_sum(max_K, samples, seed));
  r.checks.push_back(check_aggregate_identity(max_K, samples, seed));
  r.checks.push_back(check_weights_lemma(max_K, samples, seed));
  r.checks.push_back(check_decomposition_grid());
  r.checks.push_back(check_phase_recursion_grid());
  r.checks.push_back(check_worst_user(max_K, samples, seed));
  r.checks.push_back(check_dominance(max_K, samples, seed));
  r.checks.push_back(check_plan_one_sided_fair(2, max_K, samples, seed));
  return r;
}

}  // namespace ebc
