#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ebc/analysis.hpp"
#include "ebc/identities.hpp"

namespace ebc {
namespace {

constexpr double kExact = 1e-12;

SystemConfig two_user(double d1, double d2, double M1, double M2, int N = 3) {
  SystemConfig c;
  c.K = 2;
  c.N = N;
  c.delta = {d1, d2};
  c.mem = {M1, M2};
  c.file_sizes.assign(N, 1);
  return c;
}

SystemConfig two_user_example() { return two_user(.25, .5, 1, 2); }

TEST(Weights, TwoUserExample) {
  SystemConfig c = two_user_example();
  EXPECT_NEAR(weight(c, UserSet::single(0)), 8.0 / 9, kExact);
  EXPECT_NEAR(weight(c, UserSet::of({0, 1})), 16.0 / 63, kExact);
  EXPECT_NEAR(weight(c, UserSet::single(1)), 2.0 / 3, kExact);
  EXPECT_THROW(weight(c, UserSet()), std::exception);
}

TEST(Region, CoefficientsFollowPermutationPrefixes) {
  RateRegion r = rate_region(two_user_example());
  ASSERT_EQ(r.inequalities.size(), 2u);
  for (const auto& ineq : r.inequalities) {
    if (ineq.perm == std::vector<int>{0, 1}) {
      EXPECT_NEAR(ineq.coeffs[0], 8.0 / 9, kExact);
      EXPECT_NEAR(ineq.coeffs[1], 16.0 / 63, kExact);
    } else {
      EXPECT_NEAR(ineq.coeffs[0], 2.0 / 3, kExact);
      EXPECT_NEAR(ineq.coeffs[1], 16.0 / 63, kExact);
    }
  }
}

TEST(Feasibility, Examples) {
  SystemConfig c = two_user_example();
  EXPECT_TRUE(feasible(c, RateVector{{.5, .5}}).feasible);
  auto f = feasible(c, RateVector{{1, 1}});
  EXPECT_FALSE(f.feasible);
  EXPECT_EQ(f.worst_perm, (std::vector<int>{0, 1}));
  EXPECT_NEAR(f.max_lhs, 8.0 / 7, kExact);
  // On the boundary within tolerance.
  EXPECT_TRUE(feasible(c, RateVector{{9.0 / 8, 0}}).feasible);
}

TEST(Vertices, CachedTwoUser) {
  auto v = vertices_two_user(two_user_example());
  EXPECT_NEAR(v.axis1[0], 9.0 / 8, kExact);
  // Both inequalities bound the R_2 axis; the tighter one is 1/w_2.
  EXPECT_NEAR(v.axis2[1], 3.0 / 2, kExact);
  EXPECT_NEAR(v.intersection[0], 0.78, 5e-3);
  EXPECT_NEAR(v.intersection[1], 1.20, 5e-3);
  EXPECT_NEAR(v.sum_rate(), 1.98, 5e-3);
  EXPECT_NEAR(v.ratio(), 20.0 / 13, 1e-6);
}

TEST(Vertices, NoCacheTwoUser) {
  auto v = vertices_two_user(two_user(.25, .5, 0, 0));
  EXPECT_NEAR(v.axis1[0], 3.0 / 4, kExact);
  EXPECT_NEAR(v.axis2[1], 1.0 / 2, kExact);
  EXPECT_NEAR(v.intersection[0], 0.63, 1e-12);
  EXPECT_NEAR(v.intersection[1], 0.14, 1e-12);
  EXPECT_NEAR(v.sum_rate(), 0.77, 1e-12);
  EXPECT_NEAR(v.ratio(), 2.0 / 9, 1e-12);
}

TEST(Vertices, NoiselessTwoUser) {
  auto v = vertices_two_user(two_user(0, 0, 1.5, 1.5));
  // w_1 = w_2 = 1/2, w_12 = 1/4.
  EXPECT_NEAR(v.intersection[0], 4.0 / 3, kExact);
  EXPECT_NEAR(v.intersection[1], 4.0 / 3, kExact);
  EXPECT_NEAR(v.axis1[0], 2.0, kExact);
}

TEST(Vertices, EnumerationAgreesWithTwoUserCorners) {
  SystemConfig c = two_user_example();
  auto v = vertices_two_user(c);
  auto all = enumerate_vertices(c);
  auto has = [&](double a, double b) {
    return std::any_of(all.begin(), all.end(), [&](const RateVector& r) {
      return std::fabs(r[0] - a) < 1e-9 && std::fabs(r[1] - b) < 1e-9;
    });
  };
  EXPECT_EQ(all.size(), 4u);
  EXPECT_TRUE(has(0, 0));
  EXPECT_TRUE(has(v.axis1[0], 0));
  EXPECT_TRUE(has(0, v.axis2[1]));
  EXPECT_TRUE(has(v.intersection[0], v.intersection[1]));
  for (const auto& r : all) EXPECT_TRUE(feasible(c, r).feasible);
}

TEST(ClosedForm, Examples) {
  auto t = ttot_closed_form(two_user_example(), {1, 1});
  EXPECT_NEAR(t.total, 8.0 / 7, kExact);
  EXPECT_EQ(t.perm, (std::vector<int>{0, 1}));
  SystemConfig s = symmetric_config(3, 3, .5, 1.5, 1);
  EXPECT_NEAR(ttot_closed_form(s, {1, 1, 1}).total, 31.0 / 21, kExact);
  SystemConfig q = symmetric_config(2, 4, 0, 2, 10);
  EXPECT_NEAR(ttot_closed_form(q, {10, 10}).total, 7.5, kExact);
}

TEST(ClosedForm, RefusesTooManyUsers) {
  SystemConfig c = symmetric_config(9, 9, .5, 1, 1);
  EXPECT_THROW(ttot_closed_form(c, std::vector<double>(9, 1.0)), std::exception);
}

TEST(PhasePlan, TwoUserSubphases) {
  PhasePlan p = phase_plan(two_user_example(), std::vector<double>{1, 1});
  EXPECT_NEAR(p.t(UserSet::single(0)), 16.0 / 63, kExact);
  EXPECT_NEAR(p.t(UserSet::single(1)), 16.0 / 63, kExact);
  EXPECT_NEAR(p.tk(UserSet::of({0, 1}), 0), 40.0 / 63, kExact);
  EXPECT_NEAR(p.tk(UserSet::of({0, 1}), 1), 26.0 / 63, kExact);
  EXPECT_NEAR(p.t(UserSet::of({0, 1})), 40.0 / 63, kExact);
  EXPECT_NEAR(p.total, 8.0 / 7, kExact);
  // Promotion of user 1's phase-1 packets: t * delta_1 * (1 - delta_2).
  EXPECT_NEAR(p.transfer(UserSet::single(0), UserSet::of({0, 1}), 0), 16.0 / 63 * .25 * .5, kExact);
}

TEST(PhasePlan, NoCacheAndFullCache) {
  SystemConfig c = two_user(.25, .5, 0, 0);
  PhasePlan p = phase_plan(c, std::vector<double>{1, 1});
  EXPECT_NEAR(p.total, ttot_closed_form(c, {1, 1}).total, 1e-12);
  EXPECT_NEAR(p.t(UserSet::single(0)), 1.0 / (1 - .125), kExact);
  c = two_user(.25, .5, 3, 3);
  EXPECT_NEAR(phase_plan(c, std::vector<double>{1, 1}).total, 0.0, kExact);
}

TEST(PhasePlan, TwoUserMatchesClosedFormEverywhere) {
  std::mt19937_64 g(8);
  for (int t = 0; t < 500; ++t) {
    SystemConfig c = random_config(2, g);
    std::uniform_real_distribution<double> f(0.1, 3);
    std::vector<double> sizes{f(g), f(g)};
    auto cmp = compare_plan(c, sizes);
    EXPECT_NEAR(cmp.gap, 0.0, 1e-9);
  }
}

TEST(PhasePlan, AlternatingSumMatchesRecursion) {
  std::mt19937_64 g(9);
  for (int t = 0; t < 50; ++t) {
    SystemConfig c = random_config(4, g);
    PhasePlan p = phase_plan(c, std::vector<double>(4, 2.0));
    for (std::uint32_t m = 1; m < 16; ++m) {
      UserSet J = UserSet::from_mask(m);
      for (int k : J) EXPECT_NEAR(subphase_length_alternating(c, J, k, 2.0), p.tk(J, k), 1e-9);
    }
  }
}

TEST(WorstUser, OneSidedFairPicksSmallestIndex) {
  std::mt19937_64 g(10);
  for (int t = 0; t < 200; ++t) {
    auto s = random_one_sided_fair(4, g);
    for (std::uint32_t m = 1; m < 16; ++m) {
      UserSet J = UserSet::from_mask(m);
      EXPECT_EQ(worst_user(s.cfg, J, s.rates), J.min());
    }
  }
}

TEST(Dominance, OneSidedFairImpliesAll) {
  std::mt19937_64 g(12);
  for (int t = 0; t < 100; ++t) {
    auto s = random_one_sided_fair(3 + t % 3, g);
    auto d = permutation_dominance_check(s.cfg, s.rates);
    EXPECT_TRUE(d.holds);
    EXPECT_LE(d.max_other_lhs, 1 + 1e-9);
  }
}

double oracle_binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(Symmetric, OrderJCapacities) {
  EXPECT_NEAR(order_j_capacity(3, .5, 2), 9.0 / 16, kExact);
  EXPECT_NEAR(order_j_capacity(3, .5, 3), 0.5, kExact);
  EXPECT_NEAR(order_j_capacity(3, .5, 1), 63.0 / 94, kExact);
  for (int K = 1; K <= 8; ++K) EXPECT_NEAR(order_j_capacity(K, .3, K), 0.7, kExact);
  for (int K = 2; K <= 8; ++K) {
    for (int j = 1; j <= K; ++j) {
      double den = 0;
      for (int k = 1; k <= K - j + 1; ++k) den += oracle_binom(K - k, j - 1) / (1 - std::pow(.4, k));
      EXPECT_NEAR(order_j_capacity(K, .4, j), oracle_binom(K, j) / den, 1e-12);
    }
  }
}

TEST(Symmetric, RatesAndVertices) {
  EXPECT_NEAR(symmetric_rate(3, .5, .5), 21.0 / 31, kExact);
  // p = 0 reduces to the no-cache symmetric capacity.
  EXPECT_NEAR(symmetric_rate(3, .5, 0), 1.0 / (2 + 4.0 / 3 + 8.0 / 7), kExact);
  RateVector v = symmetric_vertices(3, .5, .5, UserSet::of({0, 2}));
  EXPECT_EQ(v[1], 0.0);
  EXPECT_NEAR(v[0], 1.0 / (1 + 1.0 / 3), kExact);
}

TEST(Symmetric, ResidualGrids) {
  for (double d : {.1, .5, .9}) {
    EXPECT_LT(decomposition_identity_residual(5, d, 10), 1e-9);
    EXPECT_LT(phase_recursion_residual(5, d, 10), 1e-9);
  }
}

TEST(Centralized, ClosedForms) {
  EXPECT_NEAR(ttot_centralized(3, .5, 1, 3, 1), 16.0 / 9, kExact);
  for (int K = 1; K <= 8; ++K) {
    for (int b = 0; b <= K; ++b) {
      double M = static_cast<double>(b) * 10 / K;
      EXPECT_NEAR(ttot_centralized(K, 0, M, 10, 7), 7 * K * (1 - M / 10) / (1 + K * M / 10), 1e-12);
    }
  }
  EXPECT_THROW(ttot_centralized(3, .5, 1.5, 3, 1), ConfigError);
}

TEST(NoFeedback, BaselinesDominateFeedback) {
  for (double d : {0.0, .2, .6}) {
    for (double M : {0.0, 20.0, 50.0, 100.0}) {
      SystemConfig c = symmetric_config(4, 100, d, M, 1);
      double fb = ttot_closed_form(c, std::vector<double>(4, 1.0)).total;
      double nofb = ttot_no_feedback(c, PlacementScheme::kDecentralized);
      EXPECT_LE(fb, nofb + 1e-12);
      if (d == 0 || M == 100) EXPECT_NEAR(fb, nofb, 1e-12);
    }
  }
  SystemConfig c = symmetric_config(3, 3, .5, 1, 1);
  EXPECT_NEAR(ttot_no_feedback(c, PlacementScheme::kCentralized), 3 * (2.0 / 3) / 2 / .5, kExact);
  c.delta[1] = .4;
  EXPECT_THROW(ttot_no_feedback(c, PlacementScheme::kDecentralized), ConfigError);
}

TEST(Miso, DualSubstitution) {
  EXPECT_NEAR(miso_ttot(3, 1, MisoScheme::kCentralized), 5.0 / 6, kExact);
  EXPECT_NEAR(miso_ttot(2, 1, MisoScheme::kCentralized), 0.5, kExact);
  EXPECT_NEAR(miso_ttot(3, .5, MisoScheme::kDecentralized), .5 + .25 / 2 + .125 / 3, kExact);
}

TEST(Properties, LengthMonotoneInMemoryAndErasure) {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 200; ++t) {
    SystemConfig c = random_config(3, g);
    std::vector<double> sizes{1, 1, 1};
    double base = ttot_closed_form(c, sizes).total;
    SystemConfig more_mem = c;
    int k = t % 3;
    more_mem.mem[k] = c.mem[k] + (c.N - c.mem[k]) * u(g);
    EXPECT_LE(ttot_closed_form(more_mem, sizes).total, base + 1e-12);
    SystemConfig worse = c;
    worse.delta[k] = c.delta[k] + (0.99 - c.delta[k]) * u(g);
    EXPECT_GE(ttot_closed_form(worse, sizes).total, base - 1e-12);
  }
}

TEST(Properties, NoCacheWeightsAreErasureOnly) {
  std::mt19937_64 g(22);
  for (int t = 0; t < 100; ++t) {
    SystemConfig c = random_config(4, g);
    c.mem.assign(4, 0);
    for (std::uint32_t m = 1; m < 16; ++m) {
      UserSet J = UserSet::from_mask(m);
      double prod = 1;
      for (int j : J) prod *= c.delta[j];
      EXPECT_NEAR(weight(c, J), 1 / (1 - prod), 1e-12);
    }
  }
}

}  // namespace
}  // namespace ebc
