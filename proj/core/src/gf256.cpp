#include "ebc/gf256.hpp"

#include <algorithm>

namespace ebc::gf {

void axpy(std::span<std::uint8_t> dst, std::uint8_t c, std::span<const std::uint8_t> src) {
  if (c == 0) return;
  const std::size_t n = std::min(dst.size(), src.size());
  if (c == 1) {
    for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
    return;
  }
  const auto& row = detail::kTables.mul[c];
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= row[src[i]];
}

void scale(std::span<std::uint8_t> v, std::uint8_t c) {
  if (c == 1) return;
  const auto& row = detail::kTables.mul[c];
  for (auto& x : v) x = row[x];
}

std::uint8_t SparseVector::get(std::uint32_t id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, std::uint32_t v) { return e.id < v; });
  return (it != entries_.end() && it->id == id) ? it->coeff : 0;
}

void SparseVector::set(std::uint32_t id, std::uint8_t coeff) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, std::uint32_t v) { return e.id < v; });
  if (it != entries_.end() && it->id == id) {
    if (coeff == 0) {
      entries_.erase(it);
    } else {
      it->coeff = coeff;
    }
  } else if (coeff != 0) {
    entries_.insert(it, {id, coeff});
  }
}

void SparseVector::add_scaled(const SparseVector& other, std::uint8_t c) {
  if (c == 0 || other.empty()) return;
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->id < b->id)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->id < a->id) {
      merged.push_back({b->id, mul(c, b->coeff)});
      ++b;
    } else {
      std::uint8_t v = a->coeff ^ mul(c, b->coeff);
      if (v) merged.push_back({a->id, v});
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
}

bool operator==(const SparseVector& a, const SparseVector& b) {
  return std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
                    [](const auto& x, const auto& y) { return x.id == y.id && x.coeff == y.coeff; });
}

}  // namespace ebc::gf
