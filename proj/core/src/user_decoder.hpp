#pragma once

#include <unordered_map>
#include <vector>

#include "ebc/delivery.hpp"
#include "ebc/linear_system.hpp"

namespace ebc::detail {

// Incremental decoder for one user. Columns are the user's own demanded
// packets it neither cached nor heard raw; everything else it can see is
// folded into constants.
class UserDecoder {
 public:
  UserDecoder(const Transcript& tr, int k);

  // Adds the equation carried by coded symbol `index` if k received it and
  // the symbol was sent to a set containing k.
  void absorb(std::size_t index);
  void absorb_all();

  int user() const { return k_; }
  std::size_t unknowns() const { return el_.columns(); }
  bool complete() const { return el_.full_rank(); }
  // Demanded-file packet indices still undetermined.
  std::vector<std::uint32_t> unresolved() const;
  DecodeOutcome finish() const;

 private:
  struct Expansion {
    std::vector<std::uint8_t> coeffs;  // empty when all zero
    std::vector<std::uint8_t> constant;
  };

  void accumulate(std::uint32_t id, std::uint8_t c, Expansion& acc);
  const Expansion& expand(std::uint32_t id);

  const Transcript& tr_;
  int k_;
  std::uint32_t first_;  // first raw id of k's file
  std::vector<int> column_of_;
  std::vector<std::uint32_t> packet_of_column_;
  Eliminator el_;
  std::unordered_map<std::uint32_t, Expansion> memo_;
};

}  // namespace ebc::detail
