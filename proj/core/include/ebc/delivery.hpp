#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ebc/model.hpp"
#include "ebc/placement.hpp"
#include "ebc/user_set.hpp"

namespace ebc {

inline constexpr int kMaxSimUsers = 16;

// Per-slot receiver sets: user k receives with probability 1 - delta_k,
// independently across users and slots. A scripted channel replays a fixed
// list instead and throws once it runs out.
class ErasureChannel {
 public:
  ErasureChannel(std::vector<double> delta, std::uint64_t seed);
  static ErasureChannel scripted(std::vector<UserSet> receivers);

  UserSet draw();
  std::int64_t draws() const { return draws_; }

 private:
  ErasureChannel() = default;
  std::vector<double> delta_;
  std::mt19937_64 rng_;
  std::optional<std::vector<UserSet>> script_;
  std::int64_t draws_ = 0;
};

enum class SimMode {
  kExact,  // payloads, coded symbols and per-user decoding
  kCount,  // need counters only; same slot sequence, no decoding
};

enum class SlotAction { kDeliver, kPromote, kWaste };
const char* to_string(SlotAction a);

struct SlotEvent {
  std::int64_t slot = 0;  // 1-based
  UserSet subphase;
  UserSet receivers;
  SlotAction action = SlotAction::kWaste;
  bool cleanup = false;
};

struct SimOptions {
  int start_phase = 1;
  SimMode mode = SimMode::kExact;
  std::size_t payload_len = 1;
  // Recompute every coded payload from ground truth after the run.
  bool check_payloads = false;
  std::int64_t cleanup_budget = -1;  // < 0 selects 64 * K
  std::function<void(const SlotEvent&)> on_slot;
  std::optional<std::vector<UserSet>> scripted_receivers;
};

struct SlotUse {
  std::int64_t needing = 0;  // slots of sub-phase J in which k still needed packets
  std::int64_t useful = 0;   // of those, slots that reduced k's need in J
};

struct SimResult {
  std::uint64_t seed = 0;
  SimMode mode = SimMode::kExact;
  std::int64_t slots_total = 0;
  std::vector<std::pair<UserSet, std::int64_t>> slots_per_subphase;  // execution order
  std::vector<bool> decode_ok;
  std::int64_t cleanup_slots = 0;
  std::map<std::tuple<UserSet, UserSet, int>, std::int64_t> realized_transfers;
  std::map<std::pair<UserSet, int>, SlotUse> usage;
  // Exact mode: per user, demanded packets left unresolved after cleanup.
  std::vector<std::int64_t> unresolved;
  std::int64_t payload_mismatches = 0;  // only with check_payloads
  std::string failure;                  // nonempty after a hard failure

  bool all_decoded() const;
  std::int64_t subphase_slots(UserSet J) const;
};

// Everything observable on the channel during one exact-mode run, plus the
// ground-truth packet values. Symbol ids: raw packets of the demanded files
// first (user k's file occupies [offset[k], offset[k] + size[k])), then coded
// symbols in transmission order.
struct Transcript {
  struct Coded {
    UserSet pool;
    std::vector<std::pair<std::uint32_t, std::uint8_t>> terms;
    UserSet receivers;
  };

  int K = 0;
  std::size_t payload_len = 1;
  std::vector<std::uint32_t> offset;
  std::vector<std::uint32_t> size;
  std::vector<UserSet> raw_cache;  // cache set of each raw packet
  std::vector<UserSet> raw_heard;  // users that received the raw packet over the air
  std::vector<Coded> coded;
  std::vector<std::uint8_t> values;  // per symbol, payload_len bytes

  std::uint32_t raw_count() const { return static_cast<std::uint32_t>(raw_cache.size()); }
  std::uint32_t symbol_count() const { return raw_count() + static_cast<std::uint32_t>(coded.size()); }
  const std::uint8_t* value(std::uint32_t id) const { return values.data() + id * payload_len; }
};

struct DecodeOutcome {
  bool ok = false;
  std::vector<std::uint8_t> file;         // size * payload_len bytes when ok
  std::vector<std::uint32_t> unresolved;  // packet indices within the demanded file
};

// Decodes user k's demanded file from what k cached and received. Raw
// values are read only for packets k cached or heard, and for received
// coded symbols.
DecodeOutcome decode_user(const Transcript& tr, int k);

// Number of coded symbols whose payload differs from the combination of the
// values of their terms. Zero means every coded payload equals the stated
// combination of ground-truth packets.
std::int64_t payload_identity_violations(const Transcript& tr);

// Runs sub-phases start_phase..K. Throws ConfigError on invalid input and on
// start_phase > 1 with nonempty lower-order pools.
SimResult run_delivery(const SystemConfig& cfg, const PlacementMap& pm, const Demand& d,
                       std::uint64_t seed, const SimOptions& opts = {},
                       Transcript* transcript = nullptr);

}  // namespace ebc
