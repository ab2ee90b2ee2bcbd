#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ebc/model.hpp"
#include "ebc/user_set.hpp"

namespace ebc {

enum class PlacementScheme { kDecentralized, kCentralized };

const char* to_string(PlacementScheme s);
PlacementScheme placement_scheme_from_string(const std::string& s);

// For every packet of every file, the set of users caching it. Files may be
// left unmaterialized (e.g. only the demanded ones are drawn for speed).
class PlacementMap {
 public:
  PlacementMap(PlacementScheme scheme, int K, int b, std::vector<std::int64_t> file_sizes);

  PlacementScheme scheme() const { return scheme_; }
  int K() const { return K_; }
  int b() const { return b_; }  // centralized only; -1 otherwise
  int num_files() const { return static_cast<int>(sizes_.size()); }
  std::int64_t file_size(int file) const { return sizes_[file]; }

  bool materialized(int file) const { return !sets_[file].empty() || sizes_[file] == 0; }
  UserSet cache_set(int file, std::int64_t packet) const { return sets_[file][packet]; }
  const std::vector<UserSet>& file(int file) const { return sets_[file]; }
  std::vector<UserSet>& mutable_file(int file) { return sets_[file]; }

  // Packets of `file` cached by exactly `J`, i.e. |L_J(W_file)|.
  std::int64_t subfile_size(int file, UserSet J) const;
  // Packets cached by user k over the materialized files.
  std::int64_t cached_count(int k) const;

 private:
  PlacementScheme scheme_;
  int K_;
  int b_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::vector<UserSet>> sets_;
};

// Each user caches each packet independently with probability p_k. With
// `files` set, only those files are materialized.
PlacementMap decentralized_place(const SystemConfig& cfg, std::uint64_t seed,
                                 const std::optional<std::vector<int>>& files = std::nullopt);

// Throws ConfigError when caches differ, b = MK/N is not an integer, or a
// file size is not divisible by C(K,b).
PlacementMap centralized_place(const SystemConfig& cfg);
int centralized_b(const SystemConfig& cfg);

// Fraction of `file` cached by none of `users`.
double unknown_fraction(const PlacementMap& pm, int file, UserSet users);

nlohmann::json placement_to_json(const PlacementMap& pm);

}  // namespace ebc
