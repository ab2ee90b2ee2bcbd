// End-to-end acceptance runner. Prints one PASS/FAIL line per criterion,
// followed by indented sub-check details. Exit status is 0 only when every
// criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ebc/analysis.hpp"
#include "ebc/delivery.hpp"
#include "ebc/experiments.hpp"
#include "ebc/identities.hpp"
#include "ebc/placement.hpp"
#include "ebc/rng.hpp"

namespace ebc {
namespace {

struct Check {
  std::string what;
  bool pass;
  std::string detail;
};

struct Outcome {
  std::vector<Check> checks;
  void add(std::string what, bool pass, std::string detail) {
    checks.push_back({std::move(what), pass, std::move(detail)});
  }
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

std::string fmt(double x, int prec = 9) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

std::string pt(double a, double b) { return "(" + fmt(a) + ", " + fmt(b) + ")"; }

bool near(double got, double want, double tol) { return std::fabs(got - want) <= tol; }

SystemConfig make(int K, int N, std::vector<double> delta, std::vector<double> mem,
                  std::int64_t F) {
  SystemConfig c;
  c.K = K;
  c.N = N;
  c.delta = std::move(delta);
  c.mem = std::move(mem);
  c.file_sizes.assign(N, F);
  return c;
}

// 1. Two-user region.
Outcome two_user_region() {
  Outcome o;
  SystemConfig c = make(2, 3, {.25, .5}, {1, 2}, 1);
  double w1 = weight(c, UserSet::single(0)), w2 = weight(c, UserSet::single(1));
  double w12 = weight(c, UserSet::of({0, 1}));
  o.add("coefficients 8/9, 16/63, 2/3",
        near(w1, 8.0 / 9, 1e-12) && near(w12, 16.0 / 63, 1e-12) && near(w2, 2.0 / 3, 1e-12),
        fmt(w1, 15) + ", " + fmt(w12, 15) + ", " + fmt(w2, 15));
  auto v = vertices_two_user(c);
  o.add("vertex (9/8, 0)", near(v.axis1[0], 9.0 / 8, 1e-12) && near(v.axis1[1], 0, 1e-12),
        pt(v.axis1[0], v.axis1[1]));
  o.add("vertex (0, 63/16)", near(v.axis2[0], 0, 1e-12) && near(v.axis2[1], 63.0 / 16, 1e-12),
        "region corner on the R_2 axis is " + pt(v.axis2[0], v.axis2[1]) +
            "; (0, 63/16) violates the second inequality (lhs " + fmt(w2 * 63.0 / 16) + ")");
  o.add("intersection (0.78, 1.20) +- 5e-3",
        near(v.intersection[0], .78, 5e-3) && near(v.intersection[1], 1.20, 5e-3),
        pt(v.intersection[0], v.intersection[1]));
  o.add("sum rate 1.98 +- 5e-3", near(v.sum_rate(), 1.98, 5e-3), fmt(v.sum_rate()));
  o.add("ratio 20/13 +- 1e-6", near(v.ratio(), 20.0 / 13, 1e-6), fmt(v.ratio(), 12));

  SystemConfig n = make(2, 3, {.25, .5}, {0, 0}, 1);
  auto u = vertices_two_user(n);
  o.add("no-cache vertices (3/4, 0), (0, 1/2)",
        near(u.axis1[0], .75, 1e-12) && near(u.axis1[1], 0, 1e-12) && near(u.axis2[0], 0, 1e-12) &&
            near(u.axis2[1], .5, 1e-12),
        pt(u.axis1[0], u.axis1[1]) + ", " + pt(u.axis2[0], u.axis2[1]));
  o.add("no-cache intersection (0.63, 0.14) +- 5e-3",
        near(u.intersection[0], .63, 5e-3) && near(u.intersection[1], .14, 5e-3),
        pt(u.intersection[0], u.intersection[1]));
  o.add("no-cache sum 0.77 +- 5e-3", near(u.sum_rate(), .77, 5e-3), fmt(u.sum_rate()));
  o.add("no-cache ratio 2/9 +- 1e-6", near(u.ratio(), 2.0 / 9, 1e-6), fmt(u.ratio(), 12));
  return o;
}

// 2. Plan total vs closed form.
Outcome plan_vs_closed_form() {
  Outcome o;
  const std::vector<double> deltas{0, .25, .5, .75, .9};
  const std::vector<double> ps{0, .25, .5, .75, 1};
  const std::vector<double> sizes{1, 2, 3};
  for (int K : {2, 3}) {
    std::int64_t cases = 0, bad = 0, bad_fair = 0, fair = 0;
    double worst = 0;
    std::string example;
    std::vector<int> di(K), pi(K), si(K);
    std::function<void(int)> rec = [&](int level) {
      if (level == 3 * K) {
        SystemConfig c = make(K, 4, {}, {}, 1);
        std::vector<double> F(K);
        for (int k = 0; k < K; ++k) {
          c.delta.push_back(deltas[di[k]]);
          c.mem.push_back(ps[pi[k]] * 4);
          F[k] = sizes[si[k]];
        }
        auto cmp = compare_plan(c, F);
        double gap = std::fabs(cmp.gap);
        ++cases;
        bool ok = gap < 1e-9;
        if (!ok) {
          ++bad;
          if (gap > worst) {
            worst = gap;
            std::ostringstream os;
            os << "delta=(";
            for (int k = 0; k < K; ++k) os << (k ? "," : "") << c.delta[k];
            os << ") p=(";
            for (int k = 0; k < K; ++k) os << (k ? "," : "") << c.p(k);
            os << ") F=(";
            for (int k = 0; k < K; ++k) os << (k ? "," : "") << F[k];
            os << ") plan " << cmp.plan_total << " vs " << cmp.closed_form;
            example = os.str();
          }
        }
        bool osf = false;
        try {
          osf = is_one_sided_fair(c, RateVector{F});
        } catch (const std::domain_error&) {
        }
        if (osf) {
          ++fair;
          bad_fair += !ok;
        }
        return;
      }
      int k = level % K;
      if (level < K) {
        for (di[k] = 0; di[k] < static_cast<int>(deltas.size()); ++di[k]) rec(level + 1);
      } else if (level < 2 * K) {
        for (pi[k] = 0; pi[k] < static_cast<int>(ps.size()); ++pi[k]) rec(level + 1);
      } else {
        for (si[k] = 0; si[k] < static_cast<int>(sizes.size()); ++si[k]) rec(level + 1);
      }
    };
    rec(0);
    std::string detail = std::to_string(bad) + "/" + std::to_string(cases) +
                         " configs off by >= 1e-9 (max gap " + fmt(worst) + ")";
    if (!example.empty()) detail += "; worst " + example;
    detail += "; one-sided-fair subset: " + std::to_string(bad_fair) + "/" + std::to_string(fair);
    o.add("exhaustive K=" + std::to_string(K) + " grid", bad == 0, detail);
  }
  auto fair = check_plan_one_sided_fair(4, 5, 1000, 2024);
  o.add("1000 one-sided-fair K in {4,5}", fair.passed(),
        "max gap " + fmt(fair.max_residual) + " over " + std::to_string(fair.cases) + " configs");
  double worst = 0;
  std::int64_t cases = 0;
  for (int K = 2; K <= 8; ++K) {
    for (double d : {0.0, .1, .3, .5, .7, .9}) {
      for (double p : {0.0, .1, .3, .5, .7, .9, 1.0}) {
        SystemConfig c = make(K, 10, std::vector<double>(K, d), std::vector<double>(K, p * 10), 1);
        worst = std::max(worst, std::fabs(compare_plan(c, std::vector<double>(K, 1.0)).gap));
        ++cases;
      }
    }
  }
  o.add("symmetric K=2..8 grid", worst < 1e-9,
        "max gap " + fmt(worst) + " over " + std::to_string(cases) + " configs");
  return o;
}

// 3. Identity suite.
Outcome identity_suite() {
  Outcome o;
  for (const auto& c :
       {check_alternating_sum(6, 1000, 1), check_aggregate_identity(6, 1000, 2),
        check_weights_lemma(8, 1000, 3), check_decomposition_grid(), check_phase_recursion_grid(),
        check_worst_user(6, 1000, 4), check_dominance(6, 1000, 5)}) {
    std::string d = "max residual " + fmt(c.max_residual, 3) + ", " + std::to_string(c.cases) +
                    " cases";
    if (c.violations) d += ", " + std::to_string(c.violations) + " violations";
    o.add(c.name, c.passed(), d);
  }
  return o;
}

MonteCarloResult run_mc(const SystemConfig& c, int trials, std::uint64_t seed,
                        PlacementScheme scheme = PlacementScheme::kDecentralized,
                        int start_phase = 1) {
  MonteCarloOptions mc;
  mc.trials = trials;
  mc.seed = seed;
  mc.scheme = scheme;
  mc.sim.mode = SimMode::kCount;
  mc.sim.start_phase = start_phase;
  return monte_carlo(c, Demand::identity(c.K), mc);
}

std::string rel(double got, double want) {
  return fmt(got) + " vs " + fmt(want) + " (rel err " + fmt(std::fabs(got / want - 1), 3) + ")";
}

// 4. Monte Carlo convergence.
Outcome monte_carlo_convergence() {
  Outcome o;
  auto sym = run_mc(make(3, 3, {.5, .5, .5}, {1.5, 1.5, 1.5}, 100000), 20, 4);
  o.add("symmetric K=3 -> 31/21 within 1%", std::fabs(sym.mean / (31.0 / 21) - 1) < .01,
        rel(sym.mean, 31.0 / 21) + ", ci95 " + fmt(sym.ci95, 3));
  auto asym = run_mc(make(2, 3, {.25, .5}, {1, 2}, 100000), 20, 4);
  o.add("two-user example -> 8/7 within 1%", std::fabs(asym.mean / (8.0 / 7) - 1) < .01,
        rel(asym.mean, 8.0 / 7) + ", ci95 " + fmt(asym.ci95, 3));
  return o;
}

// 5. Exact decoding over a mixed batch of trials.
Outcome decodability() {
  Outcome o;
  struct Case {
    int K;
    PlacementScheme scheme;
    bool asym;
  };
  std::vector<Case> cases;
  for (int K : {2, 3, 4}) {
    for (auto s : {PlacementScheme::kDecentralized, PlacementScheme::kCentralized}) {
      for (bool a : {false, true}) cases.push_back({K, s, a});
    }
  }
  std::int64_t trials = 0, decoded = 0, mismatches = 0, slots = 0, cleanup = 0;
  double worst_ratio = 0;
  for (int t = 0; t < 100; ++t) {
    const Case& cs = cases[t % cases.size()];
    std::vector<double> delta(cs.K, .3);
    if (cs.asym) {
      for (int k = 0; k < cs.K; ++k) delta[k] = .2 * (k + 1);
    }
    // Centralized placement splits files into K parts (b = 1).
    std::int64_t F = cs.scheme == PlacementScheme::kCentralized ? 1000 - 1000 % cs.K : 1000;
    SystemConfig c = make(cs.K, cs.K, delta, std::vector<double>(cs.K, 1.0), F);
    std::uint64_t seed = trial_seed(5, t);
    PlacementMap pm = cs.scheme == PlacementScheme::kCentralized
                          ? centralized_place(c)
                          : decentralized_place(c, seed, Demand::identity(cs.K).file_of);
    SimOptions so;
    so.check_payloads = true;
    so.payload_len = 4;
    SimResult r = run_delivery(c, pm, Demand::identity(cs.K), seed, so);
    ++trials;
    decoded += r.all_decoded();
    mismatches += r.payload_mismatches;
    slots += r.slots_total;
    cleanup += r.cleanup_slots;
    if (r.slots_total > 0) {
      worst_ratio = std::max(worst_ratio, static_cast<double>(r.cleanup_slots) / r.slots_total);
    }
  }
  o.add("byte-exact recovery in every trial", decoded == trials && mismatches == 0,
        std::to_string(decoded) + "/" + std::to_string(trials) + " trials decoded, " +
            std::to_string(mismatches) + " payload mismatches");
  double agg = static_cast<double>(cleanup) / static_cast<double>(slots);
  o.add("cleanup_slots/slots_total < 1%", worst_ratio < .01,
        "aggregate " + fmt(agg, 3) + ", worst trial " + fmt(worst_ratio, 3) + " (" +
            std::to_string(cleanup) + " of " + std::to_string(slots) + " slots)");
  return o;
}

// 6. Order-j capacities.
Outcome order_j() {
  Outcome o;
  const std::int64_t F = 99999;
  for (int j : {2, 3}) {
    SystemConfig c = make(3, 3, {.5, .5, .5}, std::vector<double>(3, j - 1.0), F);
    auto mc = run_mc(c, 5, 6, PlacementScheme::kCentralized, j);
    const double msg = static_cast<double>(F) / binomial(3, j - 1);
    const double R = binomial(3, j) * msg / (mc.mean * F);
    const double want = j == 2 ? 9.0 / 16 : 0.5;
    o.add("R^" + std::to_string(j) + " = " + (j == 2 ? "9/16" : "1/2") + " within 1%",
          std::fabs(R / want - 1) < .01 && near(order_j_capacity(3, .5, j), want, 1e-12),
          rel(R, want));
  }
  auto mc = run_mc(make(3, 3, {.5, .5, .5}, {0, 0, 0}, F), 5, 6);
  const double R1 = 3.0 / mc.mean;
  o.add("R^1 = 63/94 within 1% (full scheme, p=0)",
        std::fabs(R1 / (63.0 / 94) - 1) < .01 && near(order_j_capacity(3, .5, 1), 63.0 / 94, 1e-12),
        rel(R1, 63.0 / 94));
  return o;
}

// 7. Centralized placement.
Outcome centralized() {
  Outcome o;
  double worst = 0;
  int cases = 0;
  for (int K = 1; K <= 12; ++K) {
    for (int b = 0; b <= K; ++b) {
      const int N = 60;
      const double M = static_cast<double>(b) * N / K;
      double got = ttot_centralized(K, 0.0, M, N, 1.0);
      double want = K * (1 - M / N) / (1 + K * M / N);
      worst = std::max(worst, std::fabs(got - want));
      ++cases;
    }
  }
  o.add("delta=0 closed form for all integer b", worst < 1e-12,
        "max abs err " + fmt(worst, 3) + " over " + std::to_string(cases) + " (K,b) pairs");
  // 10^5 is not divisible by C(3,1); the nearest size that is.
  const std::int64_t F = 99999;
  auto mc = run_mc(make(3, 3, {.5, .5, .5}, {1, 1, 1}, F), 10, 7, PlacementScheme::kCentralized);
  o.add("simulated K=3, b=1, delta=0.5 within 1% of 16/9", std::fabs(mc.mean / (16.0 / 9) - 1) < .01,
        rel(mc.mean, 16.0 / 9) + " with F=" + std::to_string(F));
  return o;
}

// 8. Baseline sweeps.
Outcome baselines() {
  Outcome o;
  for (double d : {0.0, .2, .6}) {
    SweepSpec s;
    s.fixed = make(10, 100, std::vector<double>(10, d), std::vector<double>(10, 0), 1);
    s.varying = SweepParameter::kMem;
    for (int m = 0; m <= 100; m += 5) s.grid.push_back(m);
    s.simulate = false;
    s.file_size = 1;
    auto rows = sweep(s);
    int bad = 0;
    double eq_gap = 0;
    for (const auto& r : rows) {
      if (!r.error.empty() || !r.t_fb || !r.t_nofb) {
        ++bad;
        continue;
      }
      const double tol = 1e-9 * std::max(1.0, *r.t_nofb);
      if (*r.t_fb > *r.t_nofb + tol) ++bad;
      if (d == 0 || r.param == 100) {
        double g = std::fabs(*r.t_fb - *r.t_nofb);
        eq_gap = std::max(eq_gap, g);
        if (g > tol) ++bad;
      }
    }
    o.add("K=10, N=100, delta=" + fmt(d) + ": T_fb <= T_nofb with equality where expected",
          bad == 0,
          std::to_string(rows.size()) + " memory points, " + std::to_string(bad) +
              " violations, max equality gap " + fmt(eq_gap, 3));
  }
  SystemConfig c = make(4, 20, {.2, .4, .6, .8}, {0, 0, 0, 0}, 1);
  int bad = 0, points = 0;
  double best_gain = 0;
  for (int budget = 0; budget <= 80; budget += 4) {
    auto m = optimize_memory(c, budget, 1.0);
    ++points;
    if (!m.symmetric_objective || m.best.objective > *m.symmetric_objective + 1e-12) ++bad;
    if (m.symmetric_objective) best_gain = std::max(best_gain, *m.symmetric_objective - m.best.objective);
  }
  o.add("K=4, N=20, delta_k=k/5: optimized T <= symmetric T", bad == 0,
        std::to_string(points) + " budgets, " + std::to_string(bad) +
            " violations, largest saving " + fmt(best_gain, 4) + " file units");
  return o;
}

}  // namespace
}  // namespace ebc

int main() {
  using namespace ebc;
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"two-user region", two_user_region},
      {"plan total vs closed form", plan_vs_closed_form},
      {"identity suite", identity_suite},
      {"Monte Carlo convergence", monte_carlo_convergence},
      {"end-to-end decodability", decodability},
      {"order-j capacities", order_j},
      {"centralized placement", centralized},
      {"baseline sweeps", baselines},
  };
  int failed = 0, i = 0;
  for (const auto& c : criteria) {
    ++i;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    std::string error;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = error.empty() && out.pass();
    failed += !pass;
    std::printf("%s %d %s (%.1fs)\n", pass ? "PASS" : "FAIL", i, c.name, secs);
    for (const auto& ch : out.checks) {
      std::printf("    %s %s: %s\n", ch.pass ? "ok  " : "FAIL", ch.what.c_str(), ch.detail.c_str());
    }
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", i - failed, i);
  return failed == 0 ? 0 : 1;
}
