#include "ebc/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ebc {

std::string UserSet::to_string() const {
  std::string s = "[";
  bool first = true;
  for (int k : *this) {
    if (!first) s += ",";
    s += std::to_string(k + 1);
    first = false;
  }
  return s + "]";
}

bool canonical_less(UserSet a, UserSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  // Same size: compare sorted member lists. The first differing member
  // decides, and the set holding the smaller one comes first.
  std::uint32_t diff = a.mask() ^ b.mask();
  if (diff == 0) return false;
  int first = std::countr_zero(diff);
  return a.contains(first);
}

std::vector<UserSet> canonical_subsets(int K) {
  std::vector<UserSet> out;
  out.reserve((std::size_t{1} << K) - 1);
  for (std::uint32_t m = 1; m < (std::uint32_t{1} << K); ++m) out.push_back(UserSet::from_mask(m));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<UserSet> lexicographic_subsets(int K, int b) {
  std::vector<UserSet> out;
  if (b < 0 || b > K) return out;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << K); ++m) {
    if (std::popcount(m) == b) out.push_back(UserSet::from_mask(m));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

double SystemConfig::average_file_size() const {
  if (file_sizes.empty()) return 0.0;
  double sum = std::accumulate(file_sizes.begin(), file_sizes.end(), 0.0);
  return sum / static_cast<double>(file_sizes.size());
}

bool ValidationResult::mentions(const std::string& field) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ConfigIssue& i) { return i.field == field; });
}

std::string ValidationResult::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].field << ": " << issues[i].message;
  }
  return os.str();
}

namespace {

std::string indexed(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i + 1) + "]";
}

}  // namespace

ValidationResult validate_config(const SystemConfig& cfg) {
  ValidationResult r;
  auto fail = [&](std::string field, std::string msg) {
    r.issues.push_back({std::move(field), std::move(msg)});
  };
  if (cfg.K < 1 || cfg.K > UserSet::kMaxUsers) {
    fail("K", "user count must be in [1, " + std::to_string(UserSet::kMaxUsers) + "]");
  }
  if (cfg.N < cfg.K) fail("N", "file count must be at least K");

  const auto K = static_cast<std::size_t>(std::max(cfg.K, 0));
  if (cfg.delta.size() != K) {
    fail("delta", "expected " + std::to_string(K) + " entries");
  } else {
    for (std::size_t k = 0; k < K; ++k) {
      double d = cfg.delta[k];
      if (!(d >= 0.0 && d < 1.0)) fail(indexed("delta", k), "erasure probability must be in [0,1)");
    }
  }
  if (cfg.mem.size() != K) {
    fail("mem", "expected " + std::to_string(K) + " entries");
  } else {
    for (std::size_t k = 0; k < K; ++k) {
      double m = cfg.mem[k];
      if (!(m >= 0.0 && m <= cfg.N)) fail(indexed("mem", k), "cache size must be in [0,N]");
    }
  }
  if (cfg.file_sizes.size() != static_cast<std::size_t>(std::max(cfg.N, 0))) {
    fail("file_sizes", "expected " + std::to_string(std::max(cfg.N, 0)) + " entries");
  } else {
    for (std::size_t i = 0; i < cfg.file_sizes.size(); ++i) {
      if (cfg.file_sizes[i] < 0) fail(indexed("file_sizes", i), "packet count must be >= 0");
    }
  }
  int q = cfg.field_order;
  if (q < 2 || q > 256 || (q & (q - 1)) != 0) {
    fail("field_order", "must be a power of two in [2,256]");
  }
  return r;
}

void require_valid(const SystemConfig& cfg) {
  ValidationResult r = validate_config(cfg);
  if (!r.ok()) throw ConfigError(r.issues.front().field, r.summary());
}

Demand Demand::identity(int K) {
  Demand d;
  d.file_of.resize(K);
  std::iota(d.file_of.begin(), d.file_of.end(), 0);
  return d;
}

void require_valid(const SystemConfig& cfg, const Demand& d) {
  require_valid(cfg);
  if (static_cast<int>(d.file_of.size()) != cfg.K) {
    throw ConfigError("demand", "expected one file per user");
  }
  std::set<int> seen;
  for (std::size_t k = 0; k < d.file_of.size(); ++k) {
    int f = d.file_of[k];
    if (f < 0 || f >= cfg.N) throw ConfigError(indexed("demand", k), "file index out of range");
    if (!seen.insert(f).second) throw ConfigError(indexed("demand", k), "demands must be distinct");
  }
}

std::vector<double> demand_sizes(const SystemConfig& cfg, const Demand& d) {
  std::vector<double> out(cfg.K);
  for (int k = 0; k < cfg.K; ++k) out[k] = static_cast<double>(cfg.file_sizes[d[k]]);
  return out;
}

namespace {

bool geq(double a, double b) {
  return a >= b - 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

bool is_one_sided_fair(const SystemConfig& cfg, const RateVector& r) {
  if (r.size() != cfg.K) throw ConfigError("rates", "expected K entries");
  for (int k = 0; k < cfg.K; ++k) {
    for (int j = 0; j < cfg.K; ++j) {
      if (k == j || cfg.delta[k] < cfg.delta[j]) continue;
      double pk = cfg.p(k), pj = cfg.p(j);
      if ((pk == 0.0) != (pj == 0.0)) {
        throw std::domain_error("one-sided fairness undefined when only one of p_" +
                                std::to_string(k + 1) + ", p_" + std::to_string(j + 1) +
                                " is zero");
      }
      if (pk > 0.0 && !geq((1 - pk) / pk * r[k], (1 - pj) / pj * r[j])) return false;
      if (!geq(cfg.delta[k] * r[k], cfg.delta[j] * r[j])) return false;
    }
  }
  return true;
}

namespace {

template <class T>
std::vector<T> read_array(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(key, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(indexed(key, i), "expected a number");
    if constexpr (std::is_integral_v<T>) {
      double x = v[i].get<double>();
      if (x != std::floor(x)) throw ConfigError(indexed(key, i), "expected an integer");
      out.push_back(static_cast<T>(x));
    } else {
      out.push_back(v[i].get<T>());
    }
  }
  return out;
}

int read_int(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

}  // namespace

SystemConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"K", "N", "delta", "mem", "file_sizes",
                                              "field_order"};
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(key, "unknown key");
  }
  for (const char* key : {"K", "N", "delta", "mem", "file_sizes"}) {
    if (!j.contains(key)) throw ConfigError(key, "missing key");
  }
  SystemConfig cfg;
  cfg.K = read_int(j, "K");
  cfg.N = read_int(j, "N");
  cfg.delta = read_array<double>(j, "delta");
  cfg.mem = read_array<double>(j, "mem");
  cfg.file_sizes = read_array<std::int64_t>(j, "file_sizes");
  if (j.contains("field_order")) cfg.field_order = read_int(j, "field_order");
  require_valid(cfg);
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

SystemConfig symmetric_config(int K, int N, double delta, double mem, std::int64_t F) {
  SystemConfig cfg;
  cfg.K = K;
  cfg.N = N;
  cfg.delta.assign(K, delta);
  cfg.mem.assign(K, mem);
  cfg.file_sizes.assign(N, F);
  return cfg;
}

}  // namespace ebc
