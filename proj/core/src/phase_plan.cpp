#include <algorithm>
#include <cmath>
#include <functional>

#include "ebc/analysis.hpp"

namespace ebc {

double PhasePlan::transfer(UserSet I, UserSet J, int k) const {
  auto it = transfers.find({I, J, k});
  return it == transfers.end() ? 0.0 : it->second;
}

namespace {

// placement(A, k): packets of user k's demanded file cached by exactly A.
using PlacementTerm = std::function<double(std::uint32_t A, int k)>;

PhasePlan build_plan(const SystemConfig& cfg, std::vector<double> sizes,
                     const PlacementTerm& placement, const PlanOptions& opts) {
  const int K = cfg.K;
  const std::uint32_t n = std::uint32_t{1} << K;
  const std::uint32_t full = n - 1;

  std::vector<double> dprod(n, 1.0), keep(n, 1.0);
  for (std::uint32_t m = 1; m < n; ++m) {
    int k = std::countr_zero(m);
    dprod[m] = dprod[m & (m - 1)] * cfg.delta[k];
    keep[m] = keep[m & (m - 1)] * (1.0 - cfg.delta[k]);
  }

  PhasePlan plan;
  plan.K = K;
  plan.sizes = std::move(sizes);
  plan.t_sub.assign(n, 0.0);
  plan.t_user.assign(static_cast<std::size_t>(n) * K, 0.0);

  // Transfers only flow into strictly larger sets, so cardinality order suffices.
  std::vector<std::uint32_t> order;
  for (std::uint32_t m = 1; m < n; ++m) order.push_back(m);
  std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });

  for (std::uint32_t J : order) {
    double t_max = 0.0;
    for (int k : UserSet::from_mask(J)) {
      const std::uint32_t kb = std::uint32_t{1} << k;
      const std::uint32_t E = (full & ~J) | kb;  // [K]\J plus k
      const std::uint32_t rest = J & ~kb;
      double num = placement(rest, k);
      // I ranges over proper subsets of J containing k.
      for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
        std::uint32_t I = sub | kb;
        if (I != J) {
          double x = plan.t_user[static_cast<std::size_t>(I) * K + k] * dprod[E] * keep[J & ~I];
          num += x;
          if (opts.record_transfers) {
            plan.transfers[{UserSet::from_mask(I), UserSet::from_mask(J), k}] = x;
          }
        }
        if (sub == 0) break;
      }
      double t = num / (1.0 - dprod[E]);
      plan.t_user[static_cast<std::size_t>(J) * K + k] = t;
      t_max = std::max(t_max, t);
    }
    plan.t_sub[J] = t_max;
    plan.total += t_max;
  }
  return plan;
}

}  // namespace

PhasePlan phase_plan(const SystemConfig& cfg, const std::vector<double>& sizes,
                     const PlanOptions& opts) {
  require_valid(cfg);
  if (static_cast<int>(sizes.size()) != cfg.K) throw ConfigError("sizes", "expected K entries");
  const int K = cfg.K;
  const std::uint32_t full = (std::uint32_t{1} << K) - 1;
  std::vector<double> p(K);
  for (int k = 0; k < K; ++k) p[k] = cfg.p(k);
  auto expected = [&](std::uint32_t A, int k) {
    // Expected |L_A(W_k)|: cached by every user in A and nobody else.
    double f = sizes[k];
    for (int j : UserSet::from_mask(A)) f *= p[j];
    for (int j : UserSet::from_mask(full & ~A)) f *= 1.0 - p[j];
    return f;
  };
  return build_plan(cfg, sizes, expected, opts);
}

PhasePlan phase_plan(const SystemConfig& cfg, const Demand& d, const PlanOptions& opts) {
  require_valid(cfg, d);
  return phase_plan(cfg, demand_sizes(cfg, d), opts);
}

PhasePlan phase_plan(const SystemConfig& cfg, const PlacementMap& pm, const Demand& d,
                     const PlanOptions& opts) {
  require_valid(cfg, d);
  const int K = cfg.K;
  const std::size_t n = std::size_t{1} << K;
  std::vector<std::vector<double>> hist(K, std::vector<double>(n, 0.0));
  for (int k = 0; k < K; ++k) {
    if (!pm.materialized(d[k])) {
      throw ConfigError("placement", "demanded file " + std::to_string(d[k] + 1) +
                                         " not materialized");
    }
    for (UserSet s : pm.file(d[k])) hist[k][s.mask()] += 1.0;
  }
  auto realized = [&](std::uint32_t A, int k) { return hist[k][A]; };
  return build_plan(cfg, demand_sizes(cfg, d), realized, opts);
}

double subphase_length_alternating(const SystemConfig& cfg, UserSet J, int k, double F_k) {
  if (!J.contains(k)) throw std::invalid_argument("subphase_length_alternating: k not in J");
  const UserSet base = (UserSet::all(cfg.K) - J).with(k);
  double s = 0.0;
  for_each_subset(J.without(k), [&](UserSet H) {
    double w = weight(cfg, base | H);
    s += (H.size() % 2 ? -w : w);
  });
  return s * F_k;
}

int worst_user(const PhasePlan& unit_plan, UserSet J, const RateVector& r) {
  if (J.empty()) throw std::invalid_argument("worst_user: empty set");
  int best = J.min();
  double best_v = r[best] * unit_plan.tk(J, best);
  for (int k : J) {
    double v = r[k] * unit_plan.tk(J, k);
    // Relative tolerance so that ties from rounding go to the smaller index.
    if (v > best_v + 1e-12 * std::max(std::fabs(v), std::fabs(best_v))) {
      best = k;
      best_v = v;
    }
  }
  return best;
}

int worst_user(const SystemConfig& cfg, UserSet J, const RateVector& r) {
  PlanOptions opts;
  opts.record_transfers = false;
  auto unit = phase_plan(cfg, std::vector<double>(cfg.K, 1.0), opts);
  return worst_user(unit, J, r);
}

PlanComparison compare_plan(const SystemConfig& cfg, const std::vector<double>& sizes) {
  PlanOptions opts;
  opts.record_transfers = false;
  PlanComparison c;
  c.plan_total = phase_plan(cfg, sizes, opts).total;
  c.closed_form = ttot_closed_form(cfg, sizes).total;
  c.gap = c.plan_total - c.closed_form;
  return c;
}

}  // namespace ebc
