#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace ebc {

// Subset of users {0, ..., K-1} stored as a bitmask. Internally 0-based;
// to_string() prints the 1-based form "[1,3]" used in all I/O.
class UserSet {
 public:
  static constexpr int kMaxUsers = 30;

  constexpr UserSet() = default;
  static constexpr UserSet from_mask(std::uint32_t mask) { return UserSet(mask); }
  static constexpr UserSet single(int k) { return UserSet(std::uint32_t{1} << k); }
  static constexpr UserSet all(int K) {
    return UserSet(K >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << K) - 1);
  }
  static UserSet of(std::initializer_list<int> users) {
    UserSet s;
    for (int k : users) s = s.with(k);
    return s;
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int k) const { return (mask_ >> k) & 1u; }
  constexpr bool subset_of(UserSet o) const { return (mask_ & ~o.mask_) == 0; }
  // Smallest member; undefined on the empty set.
  constexpr int min() const { return std::countr_zero(mask_); }

  constexpr UserSet with(int k) const { return UserSet(mask_ | (std::uint32_t{1} << k)); }
  constexpr UserSet without(int k) const { return UserSet(mask_ & ~(std::uint32_t{1} << k)); }

  friend constexpr UserSet operator|(UserSet a, UserSet b) { return UserSet(a.mask_ | b.mask_); }
  friend constexpr UserSet operator&(UserSet a, UserSet b) { return UserSet(a.mask_ & b.mask_); }
  friend constexpr UserSet operator-(UserSet a, UserSet b) { return UserSet(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(UserSet a, UserSet b) = default;
  // Numeric order on masks; use canonical_less for the (size, lexicographic) order.
  friend constexpr auto operator<=>(UserSet a, UserSet b) { return a.mask_ <=> b.mask_; }

  class iterator {
   public:
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint32_t rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator t = *this;
      ++*this;
      return t;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint32_t rest_ = 0;
  };
  constexpr iterator begin() const { return iterator(mask_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int k : *this) out.push_back(k);
    return out;
  }
  std::string to_string() const;

 private:
  constexpr explicit UserSet(std::uint32_t m) : mask_(m) {}
  std::uint32_t mask_ = 0;
};

// Order by cardinality, then lexicographically on the sorted member list.
bool canonical_less(UserSet a, UserSet b);

// All nonempty subsets of [K] in canonical order (the delivery sub-phase order).
std::vector<UserSet> canonical_subsets(int K);

// All b-subsets of [K] in lexicographic order.
std::vector<UserSet> lexicographic_subsets(int K, int b);

// Calls fn(sub) for every subset of s, including the empty set and s itself.
template <class Fn>
void for_each_subset(UserSet s, Fn&& fn) {
  std::uint32_t m = s.mask();
  std::uint32_t sub = m;
  while (true) {
    fn(UserSet::from_mask(sub));
    if (sub == 0) break;
    sub = (sub - 1) & m;
  }
}

}  // namespace ebc
