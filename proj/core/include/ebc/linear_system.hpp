#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ebc/gf256.hpp"

namespace ebc {

// Contradictory equations. Every equation in the simulator is generated from
// true packet values, so this always indicates a bug.
class InconsistentSystem : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Incremental Gaussian elimination over GF(2^8) on a dense column space.
// Rows are kept in echelon form; back substitution runs only when values
// are requested.
class Eliminator {
 public:
  Eliminator(std::size_t columns, std::size_t payload_len);

  // Adds the equation coeffs . x = payload. Returns true when the rank grew.
  bool insert(std::vector<std::uint8_t> coeffs, std::vector<std::uint8_t> payload);

  std::size_t columns() const { return n_; }
  std::size_t payload_len() const { return len_; }
  std::size_t rank() const { return rows_.size(); }
  bool full_rank() const { return rank() == n_; }

  struct Solution {
    std::vector<bool> resolved;        // per column
    std::vector<std::uint8_t> values;  // columns x payload_len, zero where unresolved
  };
  // Values of every column that the current equations pin down uniquely.
  Solution solve() const;

 private:
  std::size_t n_;
  std::size_t len_;
  std::vector<int> pivot_of_col_;
  std::vector<std::size_t> pivot_col_;
  std::vector<std::vector<std::uint8_t>> rows_;
  std::vector<std::vector<std::uint8_t>> payloads_;
};

struct LinearRow {
  gf::SparseVector coeffs;
  std::vector<std::uint8_t> payload;
};

struct LinearSystem {
  std::vector<LinearRow> rows;
  std::vector<std::uint32_t> unknowns;
  std::size_t payload_len = 1;
};

struct SolveResult {
  std::map<std::uint32_t, std::vector<std::uint8_t>> values;  // resolved unknowns
  std::vector<std::uint32_t> unresolved;
  bool complete() const { return unresolved.empty(); }
};

// Throws std::invalid_argument when a row references an id outside
// `unknowns`, and InconsistentSystem on contradictory rows.
SolveResult solve(const LinearSystem& sys);

}  // namespace ebc
