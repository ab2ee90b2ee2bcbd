#pragma once

#include <cstdint>
#include <random>

namespace ebc {

// Independent named streams so that, for a given seed, the erasure pattern
// does not depend on how many coefficients or payload bytes were drawn.
enum class Stream : std::uint32_t {
  kPlacement = 1,
  kErasure = 2,
  kCoefficients = 3,
  kPayload = 4,
  kTrial = 5,
  kSampling = 6,
};

inline std::mt19937_64 make_stream(std::uint64_t seed, Stream s, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Seed of trial t under base seed `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) {
  auto g = make_stream(seed, Stream::kTrial, t);
  return g();
}

}  // namespace ebc
