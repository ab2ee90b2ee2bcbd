#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "ebc/analysis.hpp"

namespace ebc {

namespace {

void require_permutable(const SystemConfig& cfg) {
  require_valid(cfg);
  if (cfg.K > kMaxPermutationUsers) {
    throw ConfigError("K", "permutation enumeration limited to K <= " +
                               std::to_string(kMaxPermutationUsers));
  }
}

// w for every nonempty mask, in one pass.
std::vector<double> weight_table(const SystemConfig& cfg) {
  const std::uint32_t n = std::uint32_t{1} << cfg.K;
  std::vector<double> keep(n, 1.0), dprod(n, 1.0), w(n, 0.0);
  for (std::uint32_t m = 1; m < n; ++m) {
    int k = std::countr_zero(m);
    std::uint32_t rest = m & (m - 1);
    keep[m] = keep[rest] * (1.0 - cfg.p(k));
    dprod[m] = dprod[rest] * cfg.delta[k];
    w[m] = keep[m] / (1.0 - dprod[m]);
  }
  return w;
}

std::vector<int> identity_perm(int K) {
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  return perm;
}

double perm_lhs(const std::vector<double>& w, const std::vector<int>& perm,
                const std::vector<double>& x) {
  double lhs = 0.0;
  std::uint32_t prefix = 0;
  for (int k : perm) {
    prefix |= std::uint32_t{1} << k;
    lhs += w[prefix] * x[k];
  }
  return lhs;
}

}  // namespace

double delta_product(const SystemConfig& cfg, UserSet J) {
  double d = 1.0;
  for (int j : J) d *= cfg.delta[j];
  return d;
}

double weight(const SystemConfig& cfg, UserSet J) {
  if (J.empty()) throw std::invalid_argument("weight: empty user set");
  double keep = 1.0;
  for (int j : J) keep *= 1.0 - cfg.p(j);
  return keep / (1.0 - delta_product(cfg, J));
}

double RegionInequality::lhs(const RateVector& r) const {
  double s = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) s += coeffs[i] * r[perm[i]];
  return s;
}

RateRegion rate_region(const SystemConfig& cfg) {
  require_permutable(cfg);
  auto w = weight_table(cfg);
  RateRegion region;
  region.K = cfg.K;
  auto perm = identity_perm(cfg.K);
  do {
    RegionInequality ineq;
    ineq.perm = perm;
    std::uint32_t prefix = 0;
    for (int k : perm) {
      prefix |= std::uint32_t{1} << k;
      ineq.coeffs.push_back(w[prefix]);
    }
    region.inequalities.push_back(std::move(ineq));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return region;
}

FeasibilityResult feasible(const SystemConfig& cfg, const RateVector& r, double tol) {
  require_permutable(cfg);
  if (r.size() != cfg.K) throw ConfigError("rates", "expected K entries");
  for (int k = 0; k < cfg.K; ++k) {
    if (!(r[k] >= 0.0)) throw ConfigError("rates[" + std::to_string(k + 1) + "]", "must be >= 0");
  }
  auto w = weight_table(cfg);
  FeasibilityResult out;
  out.max_lhs = -1.0;
  auto perm = identity_perm(cfg.K);
  do {
    double lhs = perm_lhs(w, perm, r.rates);
    if (lhs > out.max_lhs) {
      out.max_lhs = lhs;
      out.worst_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.feasible = out.max_lhs <= 1.0 + tol;
  return out;
}

TwoUserVertices vertices_two_user(const SystemConfig& cfg) {
  require_valid(cfg);
  if (cfg.K != 2) throw ConfigError("K", "two-user vertices need K = 2");
  const double w1 = weight(cfg, UserSet::single(0));
  const double w2 = weight(cfg, UserSet::single(1));
  const double w12 = weight(cfg, UserSet::all(2));
  TwoUserVertices v;
  v.axis1 = {1.0 / std::max(w1, w12), 0.0};
  v.axis2 = {0.0, 1.0 / std::max(w2, w12)};
  // pi=(1,2): w1 R1 + w12 R2 = 1;  pi=(2,1): w12 R1 + w2 R2 = 1.
  const double det = w1 * w2 - w12 * w12;
  const double scale = std::max({w1 * w2, w12 * w12, 1e-300});
  if (std::fabs(det) <= 1e-12 * scale) {
    const double tol = 1e-12 * std::max({w1, w2, w12});
    if (std::fabs(w1 - w12) > tol || std::fabs(w2 - w12) > tol) {
      throw std::domain_error("two-user inequalities are parallel and distinct");
    }
    v.coincident = true;
    const double r = 1.0 / (w1 + w12);
    v.intersection = {r, r};
    return v;
  }
  v.intersection = {(w2 - w12) / det, (w1 - w12) / det};
  return v;
}

std::vector<RateVector> enumerate_vertices(const SystemConfig& cfg) {
  require_valid(cfg);
  if (cfg.K > 4) throw ConfigError("K", "vertex enumeration limited to K <= 4");
  const int K = cfg.K;
  auto region = rate_region(cfg);
  // Rows a.x <= b: the K! region inequalities, then -x_k <= 0.
  std::vector<Eigen::VectorXd> A;
  std::vector<double> b;
  for (const auto& ineq : region.inequalities) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(K);
    for (int i = 0; i < K; ++i) a[ineq.perm[i]] = ineq.coeffs[i];
    A.push_back(a);
    b.push_back(1.0);
  }
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(K);
    a[k] = -1.0;
    A.push_back(a);
    b.push_back(0.0);
  }
  const int m = static_cast<int>(A.size());
  std::vector<RateVector> out;
  std::vector<int> pick(K);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Eigen::MatrixXd M(K, K);
    Eigen::VectorXd rhs(K);
    for (int i = 0; i < K; ++i) {
      M.row(i) = A[pick[i]].transpose();
      rhs[i] = b[pick[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.rank() == K) {
      Eigen::VectorXd x = lu.solve(rhs);
      bool ok = true;
      for (int r = 0; r < m && ok; ++r) ok = A[r].dot(x) <= b[r] + 1e-9;
      if (ok) {
        RateVector rv{std::vector<double>(x.data(), x.data() + K)};
        for (auto& v : rv.rates) v = std::max(v, 0.0);
        bool dup = std::any_of(out.begin(), out.end(), [&](const RateVector& o) {
          for (int k = 0; k < K; ++k) {
            if (std::fabs(o[k] - rv[k]) > 1e-9) return false;
          }
          return true;
        });
        if (!dup) out.push_back(std::move(rv));
      }
    }
    // Next K-combination of constraint rows.
    int i = K - 1;
    while (i >= 0 && pick[i] == m - K + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < K; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(),
            [](const RateVector& a, const RateVector& b) { return a.rates < b.rates; });
  return out;
}

ClosedFormLength ttot_closed_form(const SystemConfig& cfg, const std::vector<double>& sizes) {
  require_permutable(cfg);
  if (static_cast<int>(sizes.size()) != cfg.K) throw ConfigError("sizes", "expected K entries");
  auto w = weight_table(cfg);
  ClosedFormLength out;
  out.total = -1.0;
  auto perm = identity_perm(cfg.K);
  do {
    double s = perm_lhs(w, perm, sizes);
    if (s > out.total) {
      out.total = s;
      out.perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

DominanceResult permutation_dominance_check(const SystemConfig& cfg, const RateVector& r) {
  require_permutable(cfg);
  auto w = weight_table(cfg);
  auto perm = identity_perm(cfg.K);
  const double base = perm_lhs(w, perm, r.rates);
  DominanceResult out;
  if (base <= 0.0) {
    out.holds = true;
    return out;
  }
  std::vector<double> scaled(r.rates);
  for (auto& x : scaled) x /= base;
  while (std::next_permutation(perm.begin(), perm.end())) {
    out.max_other_lhs = std::max(out.max_other_lhs, perm_lhs(w, perm, scaled));
  }
  out.holds = out.max_other_lhs <= 1.0 + 1e-12;
  return out;
}

}  // namespace ebc
