#include "qcache/claims.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qcache {

const char* claim_mode_name(ClaimMode m) {
  switch (m) {
    case ClaimMode::Miss: return "MISS";
    case ClaimMode::Hit: return "HIT";
    case ClaimMode::BlockMiss: return "BLOCK_MISS";
    case ClaimMode::BlockHit: return "BLOCK_HIT";
  }
  return "?";
}

ClaimMode claim_mode_from_name(const std::string& name) {
  if (name == "MISS") return ClaimMode::Miss;
  if (name == "HIT") return ClaimMode::Hit;
  if (name == "BLOCK_MISS") return ClaimMode::BlockMiss;
  if (name == "BLOCK_HIT") return ClaimMode::BlockHit;
  throw std::invalid_argument("unknown claim mode: " + name);
}

std::string CompetitivenessClaim::to_string() const {
  std::ostringstream os;
  os << policy_name(policy_p.kind) << "(" << policy_p.assoc << ") vs "
     << policy_name(policy_q.kind) << "(" << policy_q.assoc << ") "
     << claim_mode_name(mode) << " (" << rat_to_string(r) << "," << rat_to_string(c) << ")";
  return os.str();
}

namespace {

bool is_block_mode(ClaimMode m) {
  return m == ClaimMode::BlockMiss || m == ClaimMode::BlockHit;
}

bool is_hit_mode(ClaimMode m) { return m == ClaimMode::Hit || m == ClaimMode::BlockHit; }

// Exact evaluation of the defining inequality on already-simulated counts.
ClaimCheck evaluate(const CompetitivenessClaim& claim, long lhs_misses, long lhs_hits,
                    long rhs_misses, long rhs_hits) {
  ClaimCheck res;
  if (is_hit_mode(claim.mode)) {
    res.lhs = lhs_hits;
    res.rhs = claim.r * rhs_hits - claim.c;
    res.holds = Rat(lhs_hits) >= res.rhs;
  } else {
    res.lhs = lhs_misses;
    res.rhs = claim.r * rhs_misses + claim.c;
    res.holds = Rat(lhs_misses) <= res.rhs;
  }
  return res;
}

}  // namespace

ClaimCheck check_claim(const CompetitivenessClaim& claim, const AccessSequence& sigma,
                       const PolicyState& p, std::optional<BlockId> block) {
  if (state_kind(p) != claim.policy_p.kind || state_capacity(p) != claim.policy_p.assoc)
    throw std::invalid_argument("check_claim: state does not match policy P");
  if (is_block_mode(claim.mode) && !block) throw MissingBlock();
  SimResult rp = simulate(p, sigma);
  SimResult rq = simulate(empty_state(claim.policy_q.kind, claim.policy_q.assoc), sigma);
  if (is_block_mode(claim.mode)) {
    BlockId b = *block;
    return evaluate(claim, rp.misses_to(b), rp.hits_to(b), rq.misses_to(b), rq.hits_to(b));
  }
  return evaluate(claim, rp.misses, rp.hits, rq.misses, rq.hits);
}

// ---------------------------------------------------------------------------
// Exhaustive verification

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && r < 0) ? q - 1 : q;
}

long long rat_to_ll(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("claim factor too large for fast path");
  return z.get_si();
}

struct PreparedClaim {
  std::size_t index = 0;
  CompetitivenessClaim claim;
  int q_slot = 0;
  long long A = 1, B = 0, C = 0;  // A = r_den*c_den, B = r_num*c_den, C = c_num*r_den
  bool done = false;
  std::optional<Counterexample> result;
};

struct QRef {
  PolicyKind kind;
  int assoc;
  bool operator<(const QRef& o) const {
    return kind != o.kind ? kind < o.kind : assoc < o.assoc;
  }
};

// One enumeration pass shared by all claims with the same policy P.
// States live in flat per-level buffers; each DFS node extends the current
// canonical sequence by one block and advances every carried state.
class GroupVerifier {
 public:
  GroupVerifier(PolicyKind pk, int k, const SearchBudget& budget) : pk_(pk), k_(k), budget_(budget) {
    // Counts live in bytes; the search is meant for desk-scale budgets.
    if (budget.max_len > 200 || budget.max_blocks > 64 || budget.max_state_depth > 200)
      throw InvalidParams("search budget too large for exhaustive verification");
    if (budget.max_len < 0 || budget.max_blocks < 0 || budget.max_state_depth < 0)
      throw InvalidParams("search budget fields must be nonnegative");
    m_ = std::max(budget.max_blocks, 0);
    universe_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) universe_[static_cast<std::size_t>(i)] = static_cast<BlockId>(i);
    reachable_ = reachable_states(pk, k, universe_, budget.max_state_depth);
    S_ = static_cast<int>(reachable_.size());
  }

  void run(std::vector<PreparedClaim>& claims) {
    claims_ = &claims;
    // Q slots, deterministic order.
    std::map<QRef, int> slot_of;
    for (auto& pc : claims) {
      QRef ref{pc.claim.policy_q.kind, pc.claim.policy_q.assoc};
      auto [it, inserted] = slot_of.emplace(ref, 0);
      (void)inserted;
    }
    int next = 0;
    for (auto& [ref, slot] : slot_of) {
      slot = next++;
      qrefs_.push_back(ref);
    }
    for (auto& pc : claims) pc.q_slot = slot_of.at(QRef{pc.claim.policy_q.kind, pc.claim.policy_q.assoc});
    nq_ = static_cast<int>(qrefs_.size());
    qk_ = 1;
    for (const auto& r : qrefs_) qk_ = std::max(qk_, r.assoc);

    init_levels();
    check_root();
    if (!all_done() && budget_.max_len > 0 && m_ > 0) dfs(0, 0);
    claims_ = nullptr;
  }

 private:
  struct Level {
    std::vector<std::uint32_t> pblocks;  // S*k
    std::vector<std::uint8_t> paux;      // S (len) or S*k (mru bits)
    std::vector<std::uint8_t> pbm;       // S*m, misses of P per block
    std::vector<std::uint8_t> pm;        // S, total misses of P
    std::vector<std::uint32_t> qblocks;  // nq*qk
    std::vector<std::uint8_t> qaux;      // nq*(qk+1): len byte then bits
    std::vector<std::uint8_t> qbm;       // nq*m
    std::vector<std::uint8_t> qm;        // nq
    std::vector<std::uint8_t> acc;       // m, accesses per block
  };

  bool mru_p() const { return pk_ == PolicyKind::Mru; }

  void init_levels() {
    levels_.assign(static_cast<std::size_t>(budget_.max_len) + 1, Level{});
    Level& l0 = levels_[0];
    l0.pblocks.assign(static_cast<std::size_t>(S_) * k_, core::kEmptySlot);
    l0.paux.assign(static_cast<std::size_t>(S_) * (mru_p() ? k_ : 1), 0);
    l0.pbm.assign(static_cast<std::size_t>(S_) * m_, 0);
    l0.pm.assign(static_cast<std::size_t>(S_), 0);
    for (int s = 0; s < S_; ++s) encode_flat(reachable_[static_cast<std::size_t>(s)], s, l0);
    l0.qblocks.assign(static_cast<std::size_t>(nq_) * qk_, core::kEmptySlot);
    l0.qaux.assign(static_cast<std::size_t>(nq_) * (qk_ + 1), 0);
    l0.qbm.assign(static_cast<std::size_t>(nq_) * m_, 0);
    l0.qm.assign(static_cast<std::size_t>(nq_), 0);
    l0.acc.assign(static_cast<std::size_t>(m_), 0);
    for (std::size_t d = 1; d < levels_.size(); ++d) levels_[d] = l0;
  }

  void encode_flat(const PolicyState& st, int s, Level& lv) {
    std::uint32_t* blocks = &lv.pblocks[static_cast<std::size_t>(s) * k_];
    if (const auto* lru = std::get_if<LruState>(&st)) {
      lv.paux[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(lru->lines.size());
      std::copy(lru->lines.begin(), lru->lines.end(), blocks);
    } else if (const auto* fifo = std::get_if<FifoState>(&st)) {
      lv.paux[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(fifo->queue.size());
      std::copy(fifo->queue.begin(), fifo->queue.end(), blocks);
    } else {
      const auto& mru = std::get<MruState>(st);
      std::uint8_t* bits = &lv.paux[static_cast<std::size_t>(s) * k_];
      for (int i = 0; i < k_; ++i) {
        if (mru.slots[static_cast<std::size_t>(i)]) {
          blocks[i] = mru.slots[static_cast<std::size_t>(i)]->block;
          bits[i] = mru.slots[static_cast<std::size_t>(i)]->used ? 1 : 0;
        }
      }
    }
  }

  void advance(int d, std::uint32_t nb) {
    Level& cur = levels_[static_cast<std::size_t>(d)];
    Level& nxt = levels_[static_cast<std::size_t>(d) + 1];
    nxt = cur;
    std::uint8_t k8 = static_cast<std::uint8_t>(k_);
    if (pk_ == PolicyKind::Lru) {
      for (int s = 0; s < S_; ++s) {
        if (!core::lru_step(&nxt.pblocks[static_cast<std::size_t>(s) * k_],
                            nxt.paux[static_cast<std::size_t>(s)], k8, nb)) {
          ++nxt.pbm[static_cast<std::size_t>(s) * m_ + nb];
          ++nxt.pm[static_cast<std::size_t>(s)];
        }
      }
    } else if (pk_ == PolicyKind::Fifo) {
      for (int s = 0; s < S_; ++s) {
        if (!core::fifo_step(&nxt.pblocks[static_cast<std::size_t>(s) * k_],
                             nxt.paux[static_cast<std::size_t>(s)], k8, nb)) {
          ++nxt.pbm[static_cast<std::size_t>(s) * m_ + nb];
          ++nxt.pm[static_cast<std::size_t>(s)];
        }
      }
    } else {
      for (int s = 0; s < S_; ++s) {
        if (!core::mru_step(&nxt.pblocks[static_cast<std::size_t>(s) * k_],
                            &nxt.paux[static_cast<std::size_t>(s) * k_], k8, nb)) {
          ++nxt.pbm[static_cast<std::size_t>(s) * m_ + nb];
          ++nxt.pm[static_cast<std::size_t>(s)];
        }
      }
    }
    for (int qi = 0; qi < nq_; ++qi) {
      const QRef& ref = qrefs_[static_cast<std::size_t>(qi)];
      std::uint32_t* qb = &nxt.qblocks[static_cast<std::size_t>(qi) * qk_];
      std::uint8_t* aux = &nxt.qaux[static_cast<std::size_t>(qi) * (qk_ + 1)];
      bool hit;
      std::uint8_t qa = static_cast<std::uint8_t>(ref.assoc);
      switch (ref.kind) {
        case PolicyKind::Lru: hit = core::lru_step(qb, aux[0], qa, nb); break;
        case PolicyKind::Fifo: hit = core::fifo_step(qb, aux[0], qa, nb); break;
        case PolicyKind::Mru: hit = core::mru_step(qb, aux + 1, qa, nb); break;
        default: hit = false; break;
      }
      if (!hit) {
        ++nxt.qbm[static_cast<std::size_t>(qi) * m_ + nb];
        ++nxt.qm[static_cast<std::size_t>(qi)];
      }
    }
    ++nxt.acc[nb];
  }

  bool all_done() const {
    for (const auto& pc : *claims_)
      if (!pc.done) return false;
    return true;
  }

  void record(PreparedClaim& pc, int state_idx, std::optional<BlockId> block, long lhs, Rat rhs) {
    Counterexample ce;
    ce.sigma = prefix_;
    ce.initial_state_p = reachable_[static_cast<std::size_t>(state_idx)];
    ce.block = block;
    ce.lhs = lhs;
    ce.rhs = std::move(rhs);
    pc.result = std::move(ce);
    pc.done = true;
  }

  void check_root() {
    for (auto& pc : *claims_) {
      if (pc.done) continue;
      // Empty sequence: every count is zero, so each mode reduces to 0 <= c
      // (miss) or 0 >= -c (hit); violated exactly when c < 0.
      if (pc.claim.c < 0) {
        std::optional<BlockId> blk;
        if (is_block_mode(pc.claim.mode)) blk = 0;
        Rat rhs = is_hit_mode(pc.claim.mode) ? Rat(-pc.claim.c) : Rat(pc.claim.c);
        record(pc, 0, blk, 0, rhs);
      }
    }
  }

  void check_node(int len, std::uint32_t nb) {
    for (auto& pc : *claims_) {
      if (pc.done) continue;
      const Level& lv = levels_[static_cast<std::size_t>(len)];
      long long A = pc.A, B = pc.B, C = pc.C;
      std::size_t slot = static_cast<std::size_t>(pc.q_slot);
      switch (pc.claim.mode) {
        case ClaimMode::BlockMiss: {
          long long q = lv.qbm[slot * m_ + nb];
          long long thr = floor_div(B * q + C, A) + 1;
          if (thr > 255) break;
          for (int s = 0; s < S_; ++s) {
            long long mp = lv.pbm[static_cast<std::size_t>(s) * m_ + nb];
            if (mp >= thr) {
              record(pc, s, nb, static_cast<long>(mp), pc.claim.r * static_cast<long>(q) + pc.claim.c);
              break;
            }
          }
          break;
        }
        case ClaimMode::BlockHit: {
          long long a = lv.acc[nb];
          long long qh = a - lv.qbm[slot * m_ + nb];
          long long thr = floor_div(a * A - B * qh + C, A) + 1;
          if (thr > 255) break;
          for (int s = 0; s < S_; ++s) {
            long long mp = lv.pbm[static_cast<std::size_t>(s) * m_ + nb];
            if (mp >= thr) {
              record(pc, s, nb, static_cast<long>(a - mp), pc.claim.r * static_cast<long>(qh) - pc.claim.c);
              break;
            }
          }
          break;
        }
        case ClaimMode::Miss: {
          long long q = lv.qm[slot];
          long long thr = floor_div(B * q + C, A) + 1;
          if (thr > 255) break;
          for (int s = 0; s < S_; ++s) {
            long long mp = lv.pm[static_cast<std::size_t>(s)];
            if (mp >= thr) {
              record(pc, s, std::nullopt, static_cast<long>(mp), pc.claim.r * static_cast<long>(q) + pc.claim.c);
              break;
            }
          }
          break;
        }
        case ClaimMode::Hit: {
          long long n = len;
          long long qh = n - lv.qm[slot];
          long long thr = floor_div(n * A - B * qh + C, A) + 1;
          if (thr > 255) break;
          for (int s = 0; s < S_; ++s) {
            long long mp = lv.pm[static_cast<std::size_t>(s)];
            if (mp >= thr) {
              record(pc, s, std::nullopt, static_cast<long>(n - mp), pc.claim.r * static_cast<long>(qh) - pc.claim.c);
              break;
            }
          }
          break;
        }
      }
    }
  }

  void dfs(int d, std::uint32_t distinct) {
    std::uint32_t limit = std::min<std::uint32_t>(distinct, static_cast<std::uint32_t>(m_ - 1));
    for (std::uint32_t nb = 0; nb <= limit; ++nb) {
      if (all_done()) return;
      advance(d, nb);
      prefix_.push_back(nb);
      check_node(d + 1, nb);
      if (d + 1 < budget_.max_len)
        dfs(d + 1, distinct + (nb == distinct ? 1 : 0));
      prefix_.pop_back();
    }
  }

  PolicyKind pk_;
  int k_;
  SearchBudget budget_;
  int m_ = 0;
  std::vector<BlockId> universe_;
  std::vector<PolicyState> reachable_;
  int S_ = 0;
  std::vector<QRef> qrefs_;
  int nq_ = 0;
  int qk_ = 1;
  std::vector<Level> levels_;
  AccessSequence prefix_;
  std::vector<PreparedClaim>* claims_ = nullptr;
};

PreparedClaim prepare(std::size_t index, const CompetitivenessClaim& claim) {
  PreparedClaim pc;
  pc.index = index;
  pc.claim = claim;
  long long r_num = rat_to_ll(claim.r.get_num());
  long long r_den = rat_to_ll(claim.r.get_den());
  long long c_num = rat_to_ll(claim.c.get_num());
  long long c_den = rat_to_ll(claim.c.get_den());
  pc.A = r_den * c_den;
  pc.B = r_num * c_den;
  pc.C = c_num * r_den;
  return pc;
}

}  // namespace

std::vector<std::optional<Counterexample>> verify_claims(
    const std::vector<CompetitivenessClaim>& claims, const SearchBudget& budget) {
  std::vector<std::optional<Counterexample>> results(claims.size());
  // Group by policy P; each group shares one enumeration pass.
  std::map<std::pair<int, int>, std::vector<PreparedClaim>> groups;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    auto key = std::make_pair(static_cast<int>(claims[i].policy_p.kind), claims[i].policy_p.assoc);
    groups[key].push_back(prepare(i, claims[i]));
  }
  for (auto& [key, group] : groups) {
    GroupVerifier verifier(static_cast<PolicyKind>(key.first), key.second, budget);
    verifier.run(group);
    for (auto& pc : group) results[pc.index] = std::move(pc.result);
  }
  return results;
}

std::optional<Counterexample> verify_exhaustive(const CompetitivenessClaim& claim,
                                                const SearchBudget& budget) {
  return verify_claims({claim}, budget)[0];
}

// ---------------------------------------------------------------------------
// Witness constructions

AccessSequence fifo_block_miss_witness(int k, int l, int n) {
  if (l < 2 || k < l) throw InvalidParams("fifo_block_miss_witness requires k >= l >= 2");
  if (n < 1) throw InvalidParams("fifo_block_miss_witness requires n >= 1");
  AccessSequence sigma;
  sigma.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(l));
  BlockId filler = 1;
  for (int i = 0; i < n; ++i) {
    sigma.push_back(0);
    for (int j = 0; j < l - 1; ++j) sigma.push_back(filler++);
  }
  return sigma;
}

namespace {

struct MruScratch {
  std::vector<std::uint32_t> blocks;
  std::vector<std::uint8_t> bits;
  int k;

  explicit MruScratch(const MruState& st) : k(st.capacity) {
    blocks.assign(static_cast<std::size_t>(k), core::kEmptySlot);
    bits.assign(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
      if (st.slots[static_cast<std::size_t>(i)]) {
        blocks[static_cast<std::size_t>(i)] = st.slots[static_cast<std::size_t>(i)]->block;
        bits[static_cast<std::size_t>(i)] = st.slots[static_cast<std::size_t>(i)]->used ? 1 : 0;
      }
    }
  }

  // Returns {hit, position touched, flip happened}.
  std::tuple<bool, int, bool> access(std::uint32_t b) {
    std::vector<std::uint8_t> before = bits;
    bool hit = core::mru_step(blocks.data(), bits.data(), static_cast<std::uint8_t>(k), b);
    int pos = -1;
    for (int i = 0; i < k; ++i)
      if (blocks[static_cast<std::size_t>(i)] == b) pos = i;
    int set_bits = 0;
    for (int i = 0; i < k; ++i) set_bits += bits[static_cast<std::size_t>(i)] ? 1 : 0;
    // After a flip only the touched line's bit remains set.
    bool flipped = set_bits == 1 && bits[static_cast<std::size_t>(pos)] &&
                   std::count(before.begin(), before.end(), 1) == k - 1;
    return {hit, pos, flipped};
  }
};

}  // namespace

AccessSequence mru_block_hit_witness(int k, int l, const MruState& target, BlockId b, int h) {
  if (l < 3 || k < l) throw InvalidParams("mru_block_hit_witness requires k >= l >= 3");
  if (target.capacity != k) throw InvalidParams("target state capacity must equal k");
  if (h < 0) throw InvalidParams("repetition count must be >= 0");

  BlockId fresh = b + 1;
  for (const auto& slot : target.slots)
    if (slot) fresh = std::max(fresh, slot->block + 1);

  AccessSequence sigma;
  MruScratch cache(target);
  for (int rep = 0; rep < h; ++rep) {
    // Fresh misses until a global bit flip lands on the last position and
    // every line is fresh; from then on positions 0..k-2 carry zero bits.
    std::vector<std::uint32_t> fresh_blocks;
    int guard = 6 * k + 8;
    while (guard-- > 0) {
      std::uint32_t nb = fresh++;
      fresh_blocks.push_back(nb);
      sigma.push_back(nb);
      auto [hit, pos, flipped] = cache.access(nb);
      assert(!hit);
      (void)hit;
      if (flipped && pos == k - 1) {
        bool all_fresh = true;
        for (int i = 0; i < k; ++i)
          if (std::find(fresh_blocks.begin(), fresh_blocks.end(),
                        cache.blocks[static_cast<std::size_t>(i)]) == fresh_blocks.end())
            all_fresh = false;
        if (all_fresh) break;
      }
    }
    if (guard <= 0) throw std::logic_error("mru_block_hit_witness: no flip at last position");
    // Hits on positions 2..k-2 set all bits except positions 0 and 1.
    for (int i = 2; i <= k - 2; ++i) sigma.push_back(cache.blocks[static_cast<std::size_t>(i)]);
    std::uint32_t line0 = cache.blocks[0];
    std::uint32_t line1 = cache.blocks[1];
    for (int i = 2; i <= k - 2; ++i) {
      auto [hit, pos, flipped] = cache.access(cache.blocks[static_cast<std::size_t>(i)]);
      assert(hit && !flipped);
      (void)hit;
      (void)flipped;
      (void)pos;
    }
    // b misses into position 0; the hit on line1 causes the flip; line0
    // misses back into position 0 and evicts b; the final access to b misses.
    sigma.push_back(b);
    sigma.push_back(line1);
    sigma.push_back(line0);
    sigma.push_back(b);
    for (std::uint32_t x : {static_cast<std::uint32_t>(b), line1, line0, static_cast<std::uint32_t>(b)})
      cache.access(x);
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Claim catalog

namespace {

Rat ratio(long num, long den) { return make_rat(num, den); }

long ceil_div_l(long a, long b) { return (a + b - 1) / b; }

}  // namespace

const std::vector<ClaimCatalogEntry>& catalog() {
  static const std::vector<ClaimCatalogEntry> entries = [] {
    std::vector<ClaimCatalogEntry> v;
    v.push_back({PolicyKind::Fifo, ClaimMode::Miss, "fifo-miss", false,
                 [](int k, int l) { return k >= l && l >= 1; },
                 [](int k, int l) { return std::make_pair(ratio(k, k - l + 1), Rat(0)); }});
    v.push_back({PolicyKind::Fifo, ClaimMode::BlockMiss, "fifo-block-miss-refuted", true,
                 [](int k, int l) { return k >= l && l >= 2; }, nullptr});
    auto fifo_hit_factor = [](int k, int l) {
      long ce = ceil_div_l(k, l - 1);
      return std::make_pair(ratio(ce - 1, ce), Rat(0));
    };
    v.push_back({PolicyKind::Fifo, ClaimMode::BlockHit, "fifo-block-hit", false,
                 [](int k, int l) { return k >= l && l >= 2; }, fifo_hit_factor});
    v.push_back({PolicyKind::Fifo, ClaimMode::Hit, "fifo-hit", false,
                 [](int k, int l) { return k >= l && l >= 2; }, fifo_hit_factor});
    v.push_back({PolicyKind::Mru, ClaimMode::BlockHit, "mru-block-hit-small-l", false,
                 [](int k, int l) { return k >= 2 && l >= 1 && l <= 2; },
                 [](int, int) { return std::make_pair(Rat(1), Rat(0)); }});
    v.push_back({PolicyKind::Mru, ClaimMode::BlockMiss, "mru-block-miss-small-l", false,
                 [](int k, int l) { return k >= 2 && l >= 1 && l <= 2; },
                 [](int, int) { return std::make_pair(Rat(1), Rat(0)); }});
    v.push_back({PolicyKind::Mru, ClaimMode::BlockMiss, "mru-block-miss", false,
                 [](int k, int l) { return k >= l && l >= 3; },
                 [](int, int l) { return std::make_pair(Rat(l), Rat(0)); }});
    v.push_back({PolicyKind::Mru, ClaimMode::Miss, "mru-miss", false,
                 [](int k, int l) { return k >= l && l >= 2; },
                 [](int k, int l) { return std::make_pair(ratio(k - 1, k - l + 1), Rat(l - 2)); }});
    v.push_back({PolicyKind::Mru, ClaimMode::Hit, "mru-hit", false,
                 [](int k, int l) { return l >= 1 && k >= 2 * l; },
                 [](int k, int l) {
                   long ce = ceil_div_l(k, 2L * l);
                   Rat r = ratio(ce - 1, ce);
                   return std::make_pair(r, Rat(r * (l - 1)));
                 }});
    v.push_back({PolicyKind::Mru, ClaimMode::BlockHit, "mru-block-hit-refuted", true,
                 [](int k, int l) { return k >= l && l >= 3; }, nullptr});
    for (ClaimMode mode : {ClaimMode::Miss, ClaimMode::Hit, ClaimMode::BlockMiss, ClaimMode::BlockHit})
      v.push_back({PolicyKind::Lru, mode, "lru-stack", false,
                   [](int k, int l) { return k >= l && l >= 1; },
                   [](int, int) { return std::make_pair(Rat(1), Rat(0)); }});
    return v;
  }();
  return entries;
}

std::optional<CompetitivenessClaim> instantiate(const ClaimCatalogEntry& entry, int k, int l) {
  if (entry.refuted || !entry.applicable || !entry.applicable(k, l)) return std::nullopt;
  auto [r, c] = entry.factors(k, l);
  CompetitivenessClaim claim;
  claim.policy_p = PolicyRef{entry.policy, k};
  claim.policy_q = PolicyRef{PolicyKind::Lru, l};
  claim.mode = entry.mode;
  claim.r = std::move(r);
  claim.c = std::move(c);
  return claim;
}

std::vector<CompetitivenessClaim> applicable_claims(PolicyKind policy, int k) {
  std::vector<CompetitivenessClaim> out;
  for (const auto& entry : catalog()) {
    if (entry.policy != policy || entry.refuted) continue;
    for (int l = 1; l <= k; ++l)
      if (auto claim = instantiate(entry, k, l)) out.push_back(std::move(*claim));
  }
  return out;
}

std::vector<CompetitivenessClaim> parse_claim_file(const std::string& text) {
  std::vector<CompetitivenessClaim> claims;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string p, q, mode, r, c;
    int k = 0, l = 0;
    if (!(ls >> p)) continue;
    if (!(ls >> k >> q >> l >> mode >> r >> c))
      throw std::runtime_error("claim file line " + std::to_string(lineno) + ": expected `P k Q l MODE r c`");
    CompetitivenessClaim claim;
    claim.policy_p = PolicyRef{policy_from_name(p), k};
    claim.policy_q = PolicyRef{policy_from_name(q), l};
    claim.mode = claim_mode_from_name(mode);
    claim.r = parse_rat(r);
    claim.c = parse_rat(c);
    if (k < 1 || l < 1)
      throw std::runtime_error("claim file line " + std::to_string(lineno) + ": associativities must be >= 1");
    claims.push_back(std::move(claim));
  }
  return claims;
}

std::string format_claim_line(const CompetitivenessClaim& claim) {
  std::ostringstream os;
  os << policy_name(claim.policy_p.kind) << " " << claim.policy_p.assoc << " "
     << policy_name(claim.policy_q.kind) << " " << claim.policy_q.assoc << " "
     << claim_mode_name(claim.mode) << " " << claim.r.get_num() << "/" << claim.r.get_den() << " "
     << claim.c.get_num() << "/" << claim.c.get_den();
  return os.str();
}

}  // namespace qcache
