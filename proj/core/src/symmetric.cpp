#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/binomial.hpp>

#include "ebc/analysis.hpp"

namespace ebc {

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                   static_cast<unsigned>(k));
}

namespace {

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta", "must be in [0,1)");
}

bool is_symmetric(const SystemConfig& cfg) {
  for (int k = 1; k < cfg.K; ++k) {
    if (cfg.delta[k] != cfg.delta[0] || cfg.mem[k] != cfg.mem[0]) return false;
  }
  return true;
}

}  // namespace

double order_j_capacity(int K, double delta, int j) {
  require_delta(delta);
  if (j < 1 || j > K) throw ConfigError("j", "order must be in [1,K]");
  double denom = 0.0;
  for (int k = 1; k <= K - j + 1; ++k) denom += binomial(K - k, j - 1) / (1.0 - std::pow(delta, k));
  return binomial(K, j) / denom;
}

double decomposition_identity_residual(int K, double delta, double N1) {
  require_delta(delta);
  if (K < 2) throw ConfigError("K", "decomposition needs K >= 2");
  const double t1 = N1 / (1.0 - std::pow(delta, K));
  double denom = K * N1 / (1.0 - std::pow(delta, K));
  for (int i = 2; i <= K; ++i) {
    double n_1i = t1 * std::pow(delta, K - i + 1) * std::pow(1.0 - delta, i - 1);
    denom += binomial(K, i) * n_1i / order_j_capacity(K, delta, i);
  }
  return std::fabs(order_j_capacity(K, delta, 1) - K * N1 / denom);
}

std::vector<double> symmetric_phase_lengths(int K, double delta, int i, double n_i) {
  require_delta(delta);
  if (i < 1 || i > K) throw ConfigError("i", "phase must be in [1,K]");
  std::vector<double> t(K - i + 1, 0.0);
  t[0] = n_i / (1.0 - std::pow(delta, K - i + 1));
  for (int j = i + 1; j <= K; ++j) {
    const double erased_outside = std::pow(delta, K - j + 1);
    double s = 0.0;
    for (int l = i; l <= j - 1; ++l) {
      s += binomial(j - 1, l - 1) * t[l - i] * erased_outside * std::pow(1.0 - delta, j - l);
    }
    t[j - i] = s / (1.0 - erased_outside);
  }
  return t;
}

double phase_recursion_residual(int K, double delta, double N1) {
  auto t1 = symmetric_phase_lengths(K, delta, 1, N1);
  std::vector<double> sum(K + 1, 0.0);
  for (int i = 2; i <= K; ++i) {
    double n_i = t1[0] * std::pow(delta, K - i + 1) * std::pow(1.0 - delta, i - 1);
    auto ti = symmetric_phase_lengths(K, delta, i, n_i);
    for (int j = i; j <= K; ++j) sum[j] += ti[j - i];
  }
  double worst = 0.0;
  for (int j = 2; j <= K; ++j) worst = std::max(worst, std::fabs(t1[j - 1] - sum[j]));
  return worst;
}

double symmetric_rate(int n, double delta, double p) {
  require_delta(delta);
  if (n < 1) throw ConfigError("active", "empty active set");
  double s = 0.0;
  for (int k = 1; k <= n; ++k) s += std::pow(1.0 - p, k) / (1.0 - std::pow(delta, k));
  return 1.0 / s;
}

RateVector symmetric_vertices(int K, double delta, double p, UserSet active) {
  if (active.empty()) throw ConfigError("active", "empty active set");
  if (!active.subset_of(UserSet::all(K))) throw ConfigError("active", "users outside [K]");
  const double r = symmetric_rate(active.size(), delta, p);
  RateVector out{std::vector<double>(K, 0.0)};
  for (int k : active) out.rates[k] = r;
  return out;
}

double ttot_no_feedback(const SystemConfig& cfg, PlacementScheme scheme) {
  require_valid(cfg);
  if (!is_symmetric(cfg)) {
    throw ConfigError("delta", "no-feedback baselines need symmetric delta and mem");
  }
  const double F = cfg.average_file_size();
  const double q = 1.0 - cfg.mem[0] / cfg.N;
  const double link = 1.0 - cfg.delta[0];
  if (scheme == PlacementScheme::kCentralized) {
    return F * cfg.K * q / ((1.0 + cfg.K * cfg.mem[0] / cfg.N) * link);
  }
  double s = 0.0;
  for (int k = 1; k <= cfg.K; ++k) s += std::pow(q, k);
  return F * s / link;
}

double ttot_centralized(int K, double delta, double M, int N, double F) {
  require_delta(delta);
  const double b = M * K / N;
  if (std::fabs(b - std::round(b)) > 1e-9 || b < -1e-9 || b > K + 1e-9) {
    throw ConfigError("mem", "b = MK/N must be an integer in [0,K]");
  }
  const int bi = static_cast<int>(std::round(b));
  const double total = binomial(K, bi);
  double s = 0.0;
  for (int k = 1; k <= K - bi; ++k) {
    s += binomial(K - k, bi) / total / (1.0 - std::pow(delta, k));
  }
  return F * s;
}

double miso_dof_weight(int K, int k, double param, MisoScheme scheme) {
  if (k < 1 || k > K) throw ConfigError("k", "must be in [1,K]");
  if (scheme == MisoScheme::kDecentralized) return std::pow(1.0 - param, k) / k;
  const int b = static_cast<int>(std::lround(param));
  if (std::fabs(param - b) > 1e-9) throw ConfigError("b", "must be an integer");
  if (k > K - b) return 0.0;
  return binomial(K - k, b) / binomial(K, b) / k;
}

double miso_ttot(int K, double param, MisoScheme scheme) {
  double s = 0.0;
  for (int k = 1; k <= K; ++k) s += miso_dof_weight(K, k, param, scheme);
  return s;
}

}  // namespace ebc
