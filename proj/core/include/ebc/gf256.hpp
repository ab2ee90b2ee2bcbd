#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ebc::gf {

// GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1 (0x11B).
inline constexpr unsigned kPolynomial = 0x11B;

namespace detail {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
  std::array<std::array<std::uint8_t, 256>, 256> mul{};
};

constexpr std::uint8_t xtime_mul(std::uint8_t a, std::uint8_t b) {
  unsigned x = a, y = b, r = 0;
  while (y) {
    if (y & 1u) r ^= x;
    y >>= 1;
    x <<= 1;
    if (x & 0x100u) x ^= kPolynomial;
  }
  return static_cast<std::uint8_t>(r);
}

constexpr Tables build_tables() {
  Tables t;
  std::uint8_t x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    x = xtime_mul(x, 0x03);  // 0x03 generates the multiplicative group
  }
  for (int i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
  for (int a = 1; a < 256; ++a) {
    for (int b = 1; b < 256; ++b) t.mul[a][b] = t.exp[t.log[a] + t.log[b]];
  }
  return t;
}

inline constexpr Tables kTables = build_tables();

}  // namespace detail

constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }
constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) { return detail::kTables.mul[a][b]; }
// Inverse of a nonzero element; inv(0) is 0 by convention.
constexpr std::uint8_t inv(std::uint8_t a) {
  return a == 0 ? 0 : detail::kTables.exp[255 - detail::kTables.log[a]];
}
constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

// dst[i] ^= c * src[i]
void axpy(std::span<std::uint8_t> dst, std::uint8_t c, std::span<const std::uint8_t> src);
// v[i] *= c
void scale(std::span<std::uint8_t> v, std::uint8_t c);

// Coefficient vector over a global packet-id space. Entries are kept sorted
// by id and never hold a zero coefficient.
class SparseVector {
 public:
  struct Entry {
    std::uint32_t id;
    std::uint8_t coeff;
  };

  SparseVector() = default;
  static SparseVector unit(std::uint32_t id) {
    SparseVector v;
    v.entries_.push_back({id, 1});
    return v;
  }

  std::uint8_t get(std::uint32_t id) const;
  void set(std::uint32_t id, std::uint8_t coeff);
  // this += c * other
  void add_scaled(const SparseVector& other, std::uint8_t c);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const SparseVector& a, const SparseVector& b);

 private:
  std::vector<Entry> entries_;
};

}  // namespace ebc::gf
