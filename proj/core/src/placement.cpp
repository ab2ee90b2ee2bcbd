#include "ebc/placement.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "ebc/rng.hpp"

namespace ebc {

const char* to_string(PlacementScheme s) {
  return s == PlacementScheme::kCentralized ? "centralized" : "decentralized";
}

PlacementScheme placement_scheme_from_string(const std::string& s) {
  if (s == "decentralized") return PlacementScheme::kDecentralized;
  if (s == "centralized") return PlacementScheme::kCentralized;
  throw ConfigError("placement", "expected decentralized or centralized, got '" + s + "'");
}

PlacementMap::PlacementMap(PlacementScheme scheme, int K, int b, std::vector<std::int64_t> sizes)
    : scheme_(scheme), K_(K), b_(b), sizes_(std::move(sizes)), sets_(sizes_.size()) {}

std::int64_t PlacementMap::subfile_size(int file, UserSet J) const {
  std::int64_t n = 0;
  for (UserSet s : sets_[file]) n += (s == J);
  return n;
}

std::int64_t PlacementMap::cached_count(int k) const {
  std::int64_t n = 0;
  for (const auto& f : sets_) {
    for (UserSet s : f) n += s.contains(k);
  }
  return n;
}

PlacementMap decentralized_place(const SystemConfig& cfg, std::uint64_t seed,
                                 const std::optional<std::vector<int>>& files) {
  require_valid(cfg);
  PlacementMap pm(PlacementScheme::kDecentralized, cfg.K, -1, cfg.file_sizes);
  std::vector<int> which;
  if (files) {
    which = *files;
  } else {
    for (int i = 0; i < cfg.N; ++i) which.push_back(i);
  }
  std::vector<double> p(cfg.K);
  for (int k = 0; k < cfg.K; ++k) p[k] = cfg.p(k);
  for (int i : which) {
    if (i < 0 || i >= cfg.N) throw ConfigError("files", "file index out of range");
    // One stream per file: a file's placement does not depend on which other
    // files are materialized.
    auto g = make_stream(seed, Stream::kPlacement, static_cast<std::uint64_t>(i));
    auto& sets = pm.mutable_file(i);
    sets.resize(static_cast<std::size_t>(cfg.file_sizes[i]));
    for (auto& s : sets) {
      std::uint32_t m = 0;
      for (int k = 0; k < cfg.K; ++k) {
        if (uniform01(g) < p[k]) m |= std::uint32_t{1} << k;
      }
      s = UserSet::from_mask(m);
    }
  }
  return pm;
}

int centralized_b(const SystemConfig& cfg) {
  require_valid(cfg);
  for (int k = 1; k < cfg.K; ++k) {
    if (cfg.mem[k] != cfg.mem[0]) throw ConfigError("mem", "centralized placement needs equal caches");
  }
  double b = cfg.mem[0] * cfg.K / cfg.N;
  double rb = std::round(b);
  if (std::fabs(b - rb) > 1e-9) throw ConfigError("mem", "b = MK/N must be an integer");
  return static_cast<int>(rb);
}

PlacementMap centralized_place(const SystemConfig& cfg) {
  int b = centralized_b(cfg);
  auto subsets = lexicographic_subsets(cfg.K, b);
  const auto runs = static_cast<std::int64_t>(subsets.size());
  PlacementMap pm(PlacementScheme::kCentralized, cfg.K, b, cfg.file_sizes);
  for (int i = 0; i < cfg.N; ++i) {
    std::int64_t F = cfg.file_sizes[i];
    if (F % runs != 0) {
      throw ConfigError("file_sizes[" + std::to_string(i + 1) + "]",
                        "must be divisible by C(K,b) = " + std::to_string(runs));
    }
    std::int64_t run = F / runs;
    auto& sets = pm.mutable_file(i);
    sets.resize(static_cast<std::size_t>(F));
    for (std::int64_t f = 0; f < F; ++f) sets[f] = subsets[f / run];
  }
  return pm;
}

double unknown_fraction(const PlacementMap& pm, int file, UserSet users) {
  if (file < 0 || file >= pm.num_files()) throw ConfigError("file", "file index out of range");
  const auto& sets = pm.file(file);
  if (sets.empty()) return 1.0;
  std::int64_t unknown = 0;
  for (UserSet s : sets) unknown += (s & users).empty();
  return static_cast<double>(unknown) / static_cast<double>(sets.size());
}

nlohmann::json placement_to_json(const PlacementMap& pm) {
  nlohmann::json files = nlohmann::json::array();
  for (int i = 0; i < pm.num_files(); ++i) {
    nlohmann::json packets = nlohmann::json::array();
    for (UserSet s : pm.file(i)) {
      nlohmann::json members = nlohmann::json::array();
      for (int k : s) members.push_back(k + 1);
      packets.push_back(std::move(members));
    }
    files.push_back(std::move(packets));
  }
  std::string scheme = to_string(pm.scheme());
  if (pm.scheme() == PlacementScheme::kCentralized) scheme += "(" + std::to_string(pm.b()) + ")";
  return {{"scheme", scheme}, {"files", std::move(files)}};
}

}  // namespace ebc
