#include <algorithm>
#include <stdexcept>
#include <string>

#include "ebc/gf256.hpp"
#include "user_decoder.hpp"

namespace ebc {

namespace detail {

namespace {

std::size_t count_unknowns(const Transcript& tr, int k) {
  std::size_t n = 0;
  for (std::uint32_t i = 0; i < tr.size[k]; ++i) {
    std::uint32_t id = tr.offset[k] + i;
    n += !tr.raw_cache[id].contains(k) && !tr.raw_heard[id].contains(k);
  }
  return n;
}

}  // namespace

UserDecoder::UserDecoder(const Transcript& tr, int k)
    : tr_(tr), k_(k), first_(tr.offset[k]), el_(count_unknowns(tr, k), tr.payload_len) {
  column_of_.assign(tr.size[k], -1);
  for (std::uint32_t i = 0; i < tr.size[k]; ++i) {
    std::uint32_t id = first_ + i;
    if (tr.raw_cache[id].contains(k) || tr.raw_heard[id].contains(k)) continue;
    column_of_[i] = static_cast<int>(packet_of_column_.size());
    packet_of_column_.push_back(i);
  }
}

void UserDecoder::accumulate(std::uint32_t id, std::uint8_t c, Expansion& acc) {
  const std::size_t L = tr_.payload_len;
  std::span<const std::uint8_t> val(tr_.value(id), L);
  if (id < tr_.raw_count()) {
    if (id >= first_ && id < first_ + tr_.size[k_]) {
      int col = column_of_[id - first_];
      if (col < 0) {
        gf::axpy(acc.constant, c, val);
      } else {
        if (acc.coeffs.empty()) acc.coeffs.assign(el_.columns(), 0);
        acc.coeffs[col] ^= c;
      }
      return;
    }
    if (!tr_.raw_cache[id].contains(k_) && !tr_.raw_heard[id].contains(k_)) {
      throw std::logic_error("user " + std::to_string(k_ + 1) +
                             " would need foreign packet " + std::to_string(id) +
                             " it never saw");
    }
    gf::axpy(acc.constant, c, val);
    return;
  }
  const auto& sym = tr_.coded[id - tr_.raw_count()];
  if (sym.receivers.contains(k_)) {
    gf::axpy(acc.constant, c, val);
    return;
  }
  const Expansion& e = expand(id);
  if (!e.coeffs.empty()) {
    if (acc.coeffs.empty()) acc.coeffs.assign(el_.columns(), 0);
    gf::axpy(acc.coeffs, c, e.coeffs);
  }
  gf::axpy(acc.constant, c, e.constant);
}

const UserDecoder::Expansion& UserDecoder::expand(std::uint32_t id) {
  if (auto it = memo_.find(id); it != memo_.end()) return it->second;
  Expansion e;
  e.constant.assign(tr_.payload_len, 0);
  for (const auto& [term, c] : tr_.coded[id - tr_.raw_count()].terms) accumulate(term, c, e);
  return memo_.emplace(id, std::move(e)).first->second;
}

void UserDecoder::absorb(std::size_t index) {
  const auto& sym = tr_.coded[index];
  if (!sym.pool.contains(k_) || !sym.receivers.contains(k_)) return;
  Expansion row;
  row.constant.assign(tr_.payload_len, 0);
  for (const auto& [term, c] : sym.terms) accumulate(term, c, row);
  if (row.coeffs.empty()) return;  // nothing new for k
  // coeffs . x + constant = value
  std::vector<std::uint8_t> rhs(tr_.value(tr_.raw_count() + static_cast<std::uint32_t>(index)),
                                tr_.value(tr_.raw_count() + static_cast<std::uint32_t>(index)) +
                                    tr_.payload_len);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] ^= row.constant[i];
  el_.insert(std::move(row.coeffs), std::move(rhs));
}

void UserDecoder::absorb_all() {
  for (std::size_t i = 0; i < tr_.coded.size(); ++i) absorb(i);
}

std::vector<std::uint32_t> UserDecoder::unresolved() const {
  std::vector<std::uint32_t> out;
  if (complete()) return out;
  auto sol = el_.solve();
  for (std::size_t c = 0; c < sol.resolved.size(); ++c) {
    if (!sol.resolved[c]) out.push_back(packet_of_column_[c]);
  }
  return out;
}

DecodeOutcome UserDecoder::finish() const {
  DecodeOutcome out;
  const std::size_t L = tr_.payload_len;
  auto sol = el_.solve();
  for (std::size_t c = 0; c < sol.resolved.size(); ++c) {
    if (!sol.resolved[c]) out.unresolved.push_back(packet_of_column_[c]);
  }
  if (!out.unresolved.empty()) return out;
  out.file.resize(tr_.size[k_] * L);
  for (std::uint32_t i = 0; i < tr_.size[k_]; ++i) {
    const std::uint8_t* src = column_of_[i] < 0 ? tr_.value(first_ + i)
                                                : sol.values.data() + column_of_[i] * L;
    std::copy(src, src + L, out.file.begin() + i * L);
  }
  out.ok = true;
  return out;
}

}  // namespace detail

DecodeOutcome decode_user(const Transcript& tr, int k) {
  if (k < 0 || k >= tr.K) throw std::invalid_argument("decode_user: user out of range");
  detail::UserDecoder dec(tr, k);
  dec.absorb_all();
  return dec.finish();
}

std::int64_t payload_identity_violations(const Transcript& tr) {
  // Each coded value is checked against the stored values of its direct
  // terms. Terms precede the symbol, so by induction every symbol that passes
  // equals the corresponding combination of raw packets.
  const std::size_t L = tr.payload_len;
  std::vector<std::uint8_t> expect(L);
  std::int64_t bad = 0;
  for (std::size_t i = 0; i < tr.coded.size(); ++i) {
    std::fill(expect.begin(), expect.end(), 0);
    for (const auto& [term, c] : tr.coded[i].terms) gf::axpy(expect, c, std::span(tr.value(term), L));
    const std::uint8_t* got = tr.value(tr.raw_count() + static_cast<std::uint32_t>(i));
    bad += !std::equal(expect.begin(), expect.end(), got);
  }
  return bad;
}

}  // namespace ebc
