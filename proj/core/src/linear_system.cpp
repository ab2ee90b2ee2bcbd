#include "ebc/linear_system.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ebc {

Eliminator::Eliminator(std::size_t columns, std::size_t payload_len)
    : n_(columns), len_(payload_len), pivot_of_col_(columns, -1) {}

bool Eliminator::insert(std::vector<std::uint8_t> coeffs, std::vector<std::uint8_t> payload) {
  if (coeffs.size() != n_ || payload.size() != len_) {
    throw std::invalid_argument("Eliminator::insert: dimension mismatch");
  }
  std::size_t lead = n_;
  for (std::size_t c = 0; c < n_; ++c) {
    std::uint8_t a = coeffs[c];
    if (a == 0) continue;
    int r = pivot_of_col_[c];
    if (r < 0) {
      if (lead == n_) lead = c;
      continue;
    }
    // Pivot rows are zero left of their pivot, so only [c, n) changes.
    const auto& prow = rows_[r];
    gf::axpy(std::span(coeffs).subspan(c), a, std::span(prow).subspan(c));
    gf::axpy(payload, a, payloads_[r]);
  }
  if (lead == n_) {
    if (std::any_of(payload.begin(), payload.end(), [](std::uint8_t v) { return v != 0; })) {
      throw InconsistentSystem("contradictory equation: zero coefficients, nonzero payload");
    }
    return false;
  }
  // Earlier non-pivot entries may have been cancelled after `lead` was chosen.
  while (coeffs[lead] == 0) ++lead;
  std::uint8_t s = gf::inv(coeffs[lead]);
  gf::scale(coeffs, s);
  gf::scale(payload, s);
  pivot_of_col_[lead] = static_cast<int>(rows_.size());
  pivot_col_.push_back(lead);
  rows_.push_back(std::move(coeffs));
  payloads_.push_back(std::move(payload));
  return true;
}

Eliminator::Solution Eliminator::solve() const {
  Solution sol;
  sol.resolved.assign(n_, false);
  sol.values.assign(n_ * len_, 0);

  if (full_rank()) {
    // Upper triangular after permuting rows by pivot column.
    for (std::size_t c = n_; c-- > 0;) {
      const auto& row = rows_[pivot_of_col_[c]];
      auto out = std::span(sol.values).subspan(c * len_, len_);
      std::copy(payloads_[pivot_of_col_[c]].begin(), payloads_[pivot_of_col_[c]].end(),
                out.begin());
      for (std::size_t j = c + 1; j < n_; ++j) {
        if (row[j]) gf::axpy(out, row[j], std::span(sol.values).subspan(j * len_, len_));
      }
      sol.resolved[c] = true;
    }
    return sol;
  }

  // Reduced copy: clear every pivot column from all other rows, then a pivot
  // column is determined iff its row has no free-column entries left.
  std::vector<std::vector<std::uint8_t>> rows = rows_;
  std::vector<std::vector<std::uint8_t>> pay = payloads_;
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pivot_col_[a] > pivot_col_[b]; });
  for (std::size_t r : order) {
    std::size_t c = pivot_col_[r];
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c] == 0) continue;
      std::uint8_t a = rows[o][c];
      gf::axpy(std::span(rows[o]).subspan(c), a, std::span(rows[r]).subspan(c));
      gf::axpy(pay[o], a, pay[r]);
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t c = pivot_col_[r];
    bool free_entry = false;
    for (std::size_t j = 0; j < n_ && !free_entry; ++j) {
      free_entry = j != c && rows[r][j] != 0;
    }
    if (free_entry) continue;
    sol.resolved[c] = true;
    std::copy(pay[r].begin(), pay[r].end(), sol.values.begin() + c * len_);
  }
  return sol;
}

SolveResult solve(const LinearSystem& sys) {
  std::map<std::uint32_t, std::size_t> column;
  for (std::uint32_t id : sys.unknowns) {
    if (!column.emplace(id, column.size()).second) {
      throw std::invalid_argument("duplicate unknown id " + std::to_string(id));
    }
  }
  Eliminator el(column.size(), sys.payload_len);
  for (const auto& row : sys.rows) {
    std::vector<std::uint8_t> dense(column.size(), 0);
    for (const auto& e : row.coeffs) {
      auto it = column.find(e.id);
      if (it == column.end()) {
        throw std::invalid_argument("row references id " + std::to_string(e.id) +
                                    " outside the unknown set");
      }
      dense[it->second] = e.coeff;
    }
    el.insert(std::move(dense), row.payload);
  }
  auto sol = el.solve();
  SolveResult out;
  for (const auto& [id, c] : column) {
    if (sol.resolved[c]) {
      auto first = sol.values.begin() + static_cast<std::ptrdiff_t>(c * sys.payload_len);
      out.values[id] = std::vector<std::uint8_t>(first, first + sys.payload_len);
    } else {
      out.unresolved.push_back(id);
    }
  }
  return out;
}

}  // namespace ebc
