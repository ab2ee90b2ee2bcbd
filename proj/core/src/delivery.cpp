#include "ebc/delivery.hpp"

#include <algorithm>
#include <stdexcept>

#include "ebc/gf256.hpp"
#include "ebc/rng.hpp"
#include "user_decoder.hpp"

namespace ebc {

ErasureChannel::ErasureChannel(std::vector<double> delta, std::uint64_t seed)
    : delta_(std::move(delta)), rng_(make_stream(seed, Stream::kErasure)) {}

ErasureChannel ErasureChannel::scripted(std::vector<UserSet> receivers) {
  ErasureChannel ch;
  ch.script_ = std::move(receivers);
  return ch;
}

UserSet ErasureChannel::draw() {
  if (script_) {
    if (draws_ >= static_cast<std::int64_t>(script_->size())) {
      throw std::out_of_range("scripted channel exhausted after " + std::to_string(draws_) +
                              " slots");
    }
    return (*script_)[draws_++];
  }
  ++draws_;
  std::uint32_t m = 0;
  for (std::size_t k = 0; k < delta_.size(); ++k) {
    if (uniform01(rng_) >= delta_[k]) m |= std::uint32_t{1} << k;
  }
  return UserSet::from_mask(m);
}

const char* to_string(SlotAction a) {
  switch (a) {
    case SlotAction::kDeliver: return "deliver";
    case SlotAction::kPromote: return "promote";
    case SlotAction::kWaste: return "waste";
  }
  return "?";
}

bool SimResult::all_decoded() const {
  return failure.empty() && std::all_of(decode_ok.begin(), decode_ok.end(), [](bool b) { return b; });
}

std::int64_t SimResult::subphase_slots(UserSet J) const {
  for (const auto& [s, n] : slots_per_subphase) {
    if (s == J) return n;
  }
  return 0;
}

namespace {

struct Item {
  std::uint32_t id;
  UserSet needed_by;
};

class Session {
 public:
  Session(const SystemConfig& cfg, const PlacementMap& pm, const Demand& d, std::uint64_t seed,
          const SimOptions& opts, Transcript* tr)
      : cfg_(cfg), pm_(pm), d_(d), opts_(opts), K_(cfg.K), exact_(opts.mode == SimMode::kExact),
        n_pools_(std::size_t{1} << cfg.K),
        channel_(opts.scripted_receivers ? ErasureChannel::scripted(*opts.scripted_receivers)
                                         : ErasureChannel(cfg.delta, seed)),
        coef_rng_(make_stream(seed, Stream::kCoefficients)),
        need_(n_pools_ * K_, 0),
        usage_(n_pools_ * K_),
        tr_(tr) {
    result_.seed = seed;
    result_.mode = opts.mode;
    if (exact_) items_.resize(n_pools_);
  }

  SimResult run() {
    seed_pools();
    for (UserSet J : canonical_subsets(K_)) {
      if (J.size() < opts_.start_phase) continue;
      std::int64_t before = result_.slots_total;
      run_pool(J);
      result_.slots_per_subphase.emplace_back(J, result_.slots_total - before);
    }
    collect_stats();
    if (exact_) {
      decode_all();
    } else {
      result_.decode_ok.assign(K_, true);
      result_.unresolved.assign(K_, 0);
    }
    return std::move(result_);
  }

 private:
  std::int64_t& need(std::uint32_t J, int k) { return need_[J * K_ + k]; }

  void seed_pools() {
    if (exact_) {
      tr_->K = K_;
      tr_->payload_len = opts_.payload_len;
      tr_->offset.resize(K_);
      tr_->size.resize(K_);
      std::uint32_t next = 0;
      for (int k = 0; k < K_; ++k) {
        tr_->offset[k] = next;
        tr_->size[k] = static_cast<std::uint32_t>(pm_.file_size(d_[k]));
        next += tr_->size[k];
        for (UserSet s : pm_.file(d_[k])) tr_->raw_cache.push_back(s);
      }
      tr_->raw_heard.assign(next, UserSet());
      tr_->values.resize(static_cast<std::size_t>(next) * opts_.payload_len);
      auto g = make_stream(result_.seed, Stream::kPayload);
      for (auto& b : tr_->values) b = static_cast<std::uint8_t>(g());
    }
    for (int k = 0; k < K_; ++k) {
      const auto& sets = pm_.file(d_[k]);
      for (std::size_t f = 0; f < sets.size(); ++f) {
        UserSet A = sets[f];
        if (A.contains(k)) continue;
        std::uint32_t J = A.with(k).mask();
        if (std::popcount(J) < opts_.start_phase) {
          throw ConfigError("start_phase", "sub-phase " + UserSet::from_mask(J).to_string() +
                                               " below the start phase holds packets");
        }
        ++need(J, k);
        if (exact_) {
          items_[J].push_back({tr_->offset[k] + static_cast<std::uint32_t>(f), UserSet::single(k)});
        }
      }
    }
  }

  UserSet needing(UserSet J) {
    UserSet n;
    for (int k : J) {
      if (need(J.mask(), k) > 0) n = n.with(k);
    }
    return n;
  }

  std::uint8_t coefficient() {
    const auto q = static_cast<std::uint64_t>(cfg_.field_order);
    return static_cast<std::uint8_t>(1 + coef_rng_() % (q - 1));
  }

  // Uniform over the whole field, zero included.
  std::uint8_t any_coefficient() {
    return static_cast<std::uint8_t>(coef_rng_() % static_cast<std::uint64_t>(cfg_.field_order));
  }

  // Random combination of the pool's items wanted by `active`; returns its id.
  std::uint32_t transmit_combination(UserSet J, UserSet active) {
    Transcript::Coded sym;
    sym.pool = J;
    const std::size_t L = opts_.payload_len;
    std::vector<std::uint8_t> value(L, 0);
    for (const Item& it : items_[J.mask()]) {
      if ((it.needed_by & active).empty()) continue;
      std::uint8_t c = coefficient();
      sym.terms.emplace_back(it.id, c);
      gf::axpy(value, c, std::span(tr_->value(it.id), L));
    }
    std::uint32_t id = tr_->symbol_count();
    tr_->coded.push_back(std::move(sym));
    tr_->values.insert(tr_->values.end(), value.begin(), value.end());
    return id;
  }

  void run_pool(UserSet J) {
    const std::uint32_t jm = J.mask();
    const bool raw = J.size() == 1;
    std::size_t head = 0;  // phase 1: next raw packet
    while (true) {
      UserSet N = needing(J);
      if (N.empty()) break;
      ++result_.slots_total;

      std::uint32_t sent = 0;
      if (exact_) {
        if (raw) {
          sent = items_[jm][head].id;
        } else {
          sent = transmit_combination(J, N);
        }
      }
      UserSet S = channel_.draw();
      if (exact_) {
        if (raw) {
          tr_->raw_heard[sent] = tr_->raw_heard[sent] | S;
        } else {
          tr_->coded.back().receivers = S;
        }
      }

      UserSet got = N & S;
      UserSet missing = N - S;
      bool promote = !(S - J).empty() && !missing.empty();
      for (int k : N) {
        auto& u = usage_[jm * K_ + k];
        ++u.needing;
        u.useful += S.contains(k) || promote;
      }
      for (int k : got) --need(jm, k);
      SlotAction action = got.empty() ? SlotAction::kWaste : SlotAction::kDeliver;
      if (promote) {
        UserSet target = J | S;
        for (int k : missing) {
          --need(jm, k);
          ++need(target.mask(), k);
          ++result_.realized_transfers[{J, target, k}];
        }
        if (exact_) items_[target.mask()].push_back({sent, missing});
        action = SlotAction::kPromote;
      }
      if (raw && (!got.empty() || promote)) ++head;
      if (opts_.on_slot) opts_.on_slot({result_.slots_total, J, S, action, false});
    }
  }

  void collect_stats() {
    for (std::uint32_t J = 1; J < n_pools_; ++J) {
      for (int k = 0; k < K_; ++k) {
        const auto& u = usage_[J * K_ + k];
        if (u.needing > 0) result_.usage[{UserSet::from_mask(J), k}] = u;
      }
    }
  }

  void decode_all() {
    std::int64_t budget = opts_.cleanup_budget < 0 ? 64 * K_ : opts_.cleanup_budget;
    result_.decode_ok.assign(K_, false);
    result_.unresolved.assign(K_, 0);
    const std::size_t main_symbols = tr_->coded.size();
    for (int k = 0; k < K_; ++k) {
      detail::UserDecoder dec(*tr_, k);
      for (std::size_t i = 0; i < main_symbols; ++i) dec.absorb(i);
      while (!dec.complete() && budget > 0) {
        cleanup_slot(dec);
        --budget;
      }
      DecodeOutcome out = dec.finish();
      result_.unresolved[k] = static_cast<std::int64_t>(out.unresolved.size());
      if (!out.ok) {
        result_.failure = "user " + std::to_string(k + 1) + ": " +
                          std::to_string(out.unresolved.size()) +
                          " packets unresolved after cleanup budget";
        continue;
      }
      const std::uint8_t* truth = tr_->value(tr_->offset[k]);
      bool same = std::equal(out.file.begin(), out.file.end(), truth);
      if (!same) {
        result_.failure = "user " + std::to_string(k + 1) + ": decoded bytes differ";
      }
      result_.decode_ok[k] = same;
    }
    if (opts_.check_payloads) result_.payload_mismatches = payload_identity_violations(*tr_);
  }

  // One fresh combination of the user's unresolved packets, sent to {k}.
  // Coefficients may be zero so that small fields do not resend the same sum.
  void cleanup_slot(detail::UserDecoder& dec) {
    const int k = dec.user();
    const UserSet J = UserSet::single(k);
    Transcript::Coded sym;
    sym.pool = J;
    const std::size_t L = opts_.payload_len;
    std::vector<std::uint8_t> value(L, 0);
    const auto pending = dec.unresolved();
    while (sym.terms.empty()) {
      for (std::uint32_t f : pending) {
        std::uint8_t c = any_coefficient();
        if (c != 0) sym.terms.emplace_back(tr_->offset[k] + f, c);
      }
    }
    for (auto [id, c] : sym.terms) gf::axpy(value, c, std::span(tr_->value(id), L));
    UserSet S = channel_.draw();
    sym.receivers = S;
    tr_->coded.push_back(std::move(sym));
    tr_->values.insert(tr_->values.end(), value.begin(), value.end());
    dec.absorb(tr_->coded.size() - 1);
    ++result_.slots_total;
    ++result_.cleanup_slots;
    if (opts_.on_slot) {
      SlotAction a = S.contains(k) ? SlotAction::kDeliver : SlotAction::kWaste;
      opts_.on_slot({result_.slots_total, J, S, a, true});
    }
  }

  const SystemConfig& cfg_;
  const PlacementMap& pm_;
  const Demand& d_;
  const SimOptions& opts_;
  const int K_;
  const bool exact_;
  const std::size_t n_pools_;
  ErasureChannel channel_;
  std::mt19937_64 coef_rng_;
  std::vector<std::int64_t> need_;
  std::vector<SlotUse> usage_;
  std::vector<std::vector<Item>> items_;
  Transcript* tr_;
  SimResult result_;
};

}  // namespace

SimResult run_delivery(const SystemConfig& cfg, const PlacementMap& pm, const Demand& d,
                       std::uint64_t seed, const SimOptions& opts, Transcript* transcript) {
  require_valid(cfg, d);
  if (cfg.K > kMaxSimUsers) {
    throw ConfigError("K", "simulation limited to K <= " + std::to_string(kMaxSimUsers));
  }
  if (opts.start_phase < 1 || opts.start_phase > cfg.K) {
    throw ConfigError("start_phase", "must be in [1,K]");
  }
  if (opts.payload_len < 1) throw ConfigError("payload_len", "must be >= 1");
  if (pm.K() != cfg.K) throw ConfigError("placement", "user count differs from config");
  for (int k = 0; k < cfg.K; ++k) {
    if (!pm.materialized(d[k]) || pm.file_size(d[k]) != cfg.file_sizes[d[k]]) {
      throw ConfigError("placement", "demanded file " + std::to_string(d[k] + 1) +
                                         " not placed for this config");
    }
  }
  Transcript local;
  Transcript* tr = nullptr;
  if (opts.mode == SimMode::kExact) {
    tr = transcript ? transcript : &local;
    *tr = Transcript{};
  }
  Session s(cfg, pm, d, seed, opts, tr);
  return s.run();
}

}  // namespace ebc
