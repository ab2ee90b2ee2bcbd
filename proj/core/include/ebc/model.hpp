#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ebc/user_set.hpp"

namespace ebc {

// Raised for any malformed configuration or argument. `field()` names the
// offending entry ("delta[2]", "mem[1]", ...) when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SystemConfig {
  int K = 0;
  int N = 0;
  std::vector<double> delta;             // per-user erasure probability
  std::vector<double> mem;               // per-user cache size, in files
  std::vector<std::int64_t> file_sizes;  // packets per file
  int field_order = 256;

  double p(int k) const { return mem[k] / N; }
  double average_file_size() const;
};

struct ConfigIssue {
  std::string field;
  std::string message;
};

struct ValidationResult {
  std::vector<ConfigIssue> issues;
  bool ok() const { return issues.empty(); }
  bool mentions(const std::string& field) const;
  std::string summary() const;
};

ValidationResult validate_config(const SystemConfig& cfg);
// Throws ConfigError naming the first violated field.
void require_valid(const SystemConfig& cfg);

// Which file each user requests (0-based internally).
struct Demand {
  std::vector<int> file_of;

  static Demand identity(int K);
  int operator[](int k) const { return file_of[k]; }
};

void require_valid(const SystemConfig& cfg, const Demand& d);
// F_{d_k} for every user k.
std::vector<double> demand_sizes(const SystemConfig& cfg, const Demand& d);

struct RateVector {
  std::vector<double> rates;

  double operator[](int k) const { return rates[k]; }
  int size() const { return static_cast<int>(rates.size()); }
};

// Throws std::domain_error when a compared pair mixes p = 0 with p > 0.
bool is_one_sided_fair(const SystemConfig& cfg, const RateVector& r);

SystemConfig config_from_json(const nlohmann::json& j);
SystemConfig load_config(const std::string& path);

// Convenience builder for symmetric configs with equal file sizes.
SystemConfig symmetric_config(int K, int N, double delta, double mem, std::int64_t F);

}  // namespace ebc
