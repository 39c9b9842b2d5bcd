#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "qcache/claims.hpp"

using namespace qcache;

namespace {

constexpr BlockId A = 0, B = 1, C = 2, D = 3, E = 4, F = 5;
const AccessSequence kExampleSeq = {A, B, C, C, B, D, B, E, B, F, F, B};

CompetitivenessClaim claim(PolicyKind p, int k, int l, ClaimMode mode, Rat r, Rat c) {
  return CompetitivenessClaim{{p, k}, {PolicyKind::Lru, l}, mode, std::move(r), std::move(c)};
}

// All sequences over `blocks` of length <= max_len, lexicographic.
void for_each_sequence(int blocks, int max_len, const std::function<void(const AccessSequence&)>& fn) {
  AccessSequence seq;
  std::function<void()> rec = [&] {
    fn(seq);
    if (static_cast<int>(seq.size()) == max_len) return;
    for (int b = 0; b < blocks; ++b) {
      seq.push_back(static_cast<BlockId>(b));
      rec();
      seq.pop_back();
    }
  };
  rec();
}

}  // namespace

TEST_CASE("check_claim on the worked example") {
  // FIFO(2) sees 3 misses to block b where LRU(2) sees only 1.
  auto res = check_claim(claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)),
                         kExampleSeq, empty_state(PolicyKind::Fifo, 2), B);
  CHECK_FALSE(res.holds);
  CHECK(res.lhs == 3);
  CHECK(res.rhs == Rat(1));
}

TEST_CASE("check_claim trivia") {
  auto ok = check_claim(claim(PolicyKind::Fifo, 2, 2, ClaimMode::Miss, Rat(1), Rat(0)), {},
                        empty_state(PolicyKind::Fifo, 2), std::nullopt);
  CHECK(ok.holds);  // both sides zero
  CHECK_THROWS_AS(check_claim(claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)),
                              {}, empty_state(PolicyKind::Fifo, 2), std::nullopt),
                  MissingBlock);
  CHECK_THROWS(check_claim(claim(PolicyKind::Fifo, 2, 2, ClaimMode::Miss, Rat(1), Rat(0)), {},
                           empty_state(PolicyKind::Lru, 2), std::nullopt));
}

TEST_CASE("mru(4) is (1,0)-block-miss-competitive vs lru(2) on short sequences") {
  // Exhaustive over 4 blocks, length <= 8, from the empty state.
  CompetitivenessClaim cl = claim(PolicyKind::Mru, 4, 2, ClaimMode::BlockMiss, Rat(1), Rat(0));
  bool all_hold = true;
  for_each_sequence(4, 8, [&](const AccessSequence& seq) {
    for (BlockId b = 0; b < 4; ++b) {
      auto res = check_claim(cl, seq, empty_state(PolicyKind::Mru, 4), b);
      if (!res.holds) all_hold = false;
    }
  });
  CHECK(all_hold);
}

TEST_CASE("verify_exhaustive positive and negative") {
  SearchBudget budget{4, 8, 6};
  SUBCASE("mru(3) block-hit vs lru(2)") {
    auto ce = verify_exhaustive(claim(PolicyKind::Mru, 3, 2, ClaimMode::BlockHit, Rat(1), Rat(0)), budget);
    CHECK_FALSE(ce.has_value());
  }
  SUBCASE("fifo(2) block-miss vs lru(2) is refuted") {
    auto ce = verify_exhaustive(claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)), budget);
    REQUIRE(ce.has_value());
    // Replaying the counterexample violates the inequality.
    auto res = check_claim(claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)),
                           ce->sigma, ce->initial_state_p, ce->block);
    CHECK_FALSE(res.holds);
    CHECK(res.lhs == ce->lhs);
    CHECK(res.rhs == ce->rhs);
  }
  SUBCASE("fifo(3) miss vs lru(2) at 3/2") {
    auto ce = verify_exhaustive(claim(PolicyKind::Fifo, 3, 2, ClaimMode::Miss, make_rat(3, 2), Rat(0)), budget);
    CHECK_FALSE(ce.has_value());
  }
  SUBCASE("claiming (1,0) miss for fifo(2) vs lru(2) is refuted") {
    // The catalog factor is 2 here; (1,0) is too strong and a length-7
    // sequence over four blocks already breaks it.
    auto ce = verify_exhaustive(claim(PolicyKind::Fifo, 2, 2, ClaimMode::Miss, Rat(1), Rat(0)), budget);
    CHECK(ce.has_value());
  }
  SUBCASE("negative additive constant is caught on the empty sequence") {
    auto ce = verify_exhaustive(claim(PolicyKind::Fifo, 2, 2, ClaimMode::Miss, Rat(1), Rat(-1)), budget);
    REQUIRE(ce.has_value());
    CHECK(ce->sigma.empty());
  }
  SUBCASE("deterministic counterexample") {
    auto a = verify_exhaustive(claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)), budget);
    auto b = verify_exhaustive(claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)), budget);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->sigma == b->sigma);
    CHECK(a->block == b->block);
    CHECK(a->lhs == b->lhs);
  }
}

TEST_CASE("batched verification matches single claims") {
  SearchBudget budget{4, 7, 5};
  std::vector<CompetitivenessClaim> claims = {
      claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)),
      claim(PolicyKind::Fifo, 2, 2, ClaimMode::BlockHit, make_rat(1, 2), Rat(0)),
      claim(PolicyKind::Mru, 2, 2, ClaimMode::BlockMiss, Rat(1), Rat(0)),
  };
  auto batch = verify_claims(claims, budget);
  for (std::size_t i = 0; i < claims.size(); ++i) {
    auto single = verify_exhaustive(claims[i], budget);
    CHECK(single.has_value() == batch[i].has_value());
    if (single && batch[i]) CHECK(single->sigma == batch[i]->sigma);
  }
}

TEST_CASE("fifo block-miss witness") {
  SUBCASE("lru sees exactly one miss to b for any n") {
    for (int n = 1; n <= 6; ++n) {
      AccessSequence sigma = fifo_block_miss_witness(2, 2, n);
      CHECK(simulate(empty_state(PolicyKind::Lru, 2), sigma).misses_to(0) == 1);
    }
  }
  SUBCASE("fifo misses to b grow with n") {
    long prev = 0;
    for (int n = 1; n <= 6; ++n) {
      AccessSequence sigma = fifo_block_miss_witness(2, 2, n);
      long m = simulate(empty_state(PolicyKind::Fifo, 2), sigma).misses_to(0);
      CHECK(m >= prev);
      prev = m;
    }
    CHECK(simulate(empty_state(PolicyKind::Fifo, 2), fifo_block_miss_witness(2, 2, 5)).misses_to(0) >= 2);
  }
  SUBCASE("n=1 with k=3,l=2 gives a two-access sequence") {
    AccessSequence sigma = fifo_block_miss_witness(3, 2, 1);
    CHECK(sigma.size() == 2);
    CHECK(simulate(empty_state(PolicyKind::Fifo, 3), sigma).misses_to(0) == 1);
    CHECK(simulate(empty_state(PolicyKind::Lru, 2), sigma).misses_to(0) == 1);
  }
  SUBCASE("grows for larger k and l") {
    for (int k = 2; k <= 4; ++k) {
      for (int l = 2; l <= k; ++l) {
        long prev = -1;
        bool lru_always_one = true;
        for (int n = 1; n <= 5; ++n) {
          AccessSequence sigma = fifo_block_miss_witness(k, l, n);
          long mf = simulate(empty_state(PolicyKind::Fifo, k), sigma).misses_to(0);
          long ml = simulate(empty_state(PolicyKind::Lru, l), sigma).misses_to(0);
          if (ml != 1) lru_always_one = false;
          CHECK(mf >= prev);
          prev = mf;
        }
        CHECK(lru_always_one);
        AccessSequence big = fifo_block_miss_witness(k, l, 4 * k);
        CHECK(simulate(empty_state(PolicyKind::Fifo, k), big).misses_to(0) > 2);
      }
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(fifo_block_miss_witness(2, 1, 3), InvalidParams);
    CHECK_THROWS_AS(fifo_block_miss_witness(2, 3, 3), InvalidParams);
    CHECK_THROWS_AS(fifo_block_miss_witness(2, 2, 0), InvalidParams);
  }
}

TEST_CASE("mru block-hit witness") {
  SUBCASE("single repetition from the empty state") {
    AccessSequence sigma = mru_block_hit_witness(3, 3, MruState::empty(3), B, 1);
    CHECK(simulate(empty_state(PolicyKind::Mru, 3), sigma).hits_to(B) == 0);
    CHECK(simulate(empty_state(PolicyKind::Lru, 3), sigma).hits_to(B) == 1);
  }
  SUBCASE("h repetitions give exactly h lru hits and zero mru hits") {
    for (int h : {1, 2, 3}) {
      for (auto [k, l] : {std::pair{3, 3}, std::pair{4, 3}}) {
        AccessSequence sigma = mru_block_hit_witness(k, l, MruState::empty(k), B, h);
        CHECK(simulate(empty_state(PolicyKind::Mru, k), sigma).hits_to(B) == 0);
        CHECK(simulate(empty_state(PolicyKind::Lru, l), sigma).hits_to(B) == h);
      }
    }
  }
  SUBCASE("works from every reachable state, including states holding b") {
    for (int k : {3, 4}) {
      auto states = reachable_states(PolicyKind::Mru, k, {A, B, C, D}, 5);
      for (const auto& st : states) {
        const MruState& q = std::get<MruState>(st);
        AccessSequence sigma = mru_block_hit_witness(k, 3, q, B, 1);
        SimResult mru = simulate(st, sigma);
        SimResult lru = simulate(empty_state(PolicyKind::Lru, 3), sigma);
        CHECK(mru.hits_to(B) == 0);
        CHECK(lru.hits_to(B) == 1);
      }
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(mru_block_hit_witness(3, 2, MruState::empty(3), B, 1), InvalidParams);
    CHECK_THROWS_AS(mru_block_hit_witness(2, 3, MruState::empty(2), B, 1), InvalidParams);
    CHECK_THROWS_AS(mru_block_hit_witness(3, 3, MruState::empty(4), B, 1), InvalidParams);
  }
}

TEST_CASE("catalog instantiations") {
  const auto& entries = catalog();

  auto find = [&](PolicyKind p, ClaimMode m, bool refuted) -> const ClaimCatalogEntry* {
    for (const auto& e : entries)
      if (e.policy == p && e.mode == m && e.refuted == refuted) return &e;
    return nullptr;
  };

  SUBCASE("fifo miss factor k/(k-l+1)") {
    const auto* e = find(PolicyKind::Fifo, ClaimMode::Miss, false);
    REQUIRE(e);
    auto c = instantiate(*e, 4, 2);
    REQUIRE(c.has_value());
    CHECK(c->r == make_rat(4, 3));
    CHECK(c->c == Rat(0));
  }
  SUBCASE("fifo block-hit at (2,2) is one half") {
    const auto* e = find(PolicyKind::Fifo, ClaimMode::BlockHit, false);
    REQUIRE(e);
    auto c = instantiate(*e, 2, 2);
    REQUIRE(c.has_value());
    CHECK(c->r == make_rat(1, 2));
    // undefined at l = 1
    CHECK_FALSE(instantiate(*e, 2, 1).has_value());
  }
  SUBCASE("mru block-miss (l,0) for l >= 3") {
    bool found = false;
    for (const auto& e : entries) {
      if (e.policy != PolicyKind::Mru || e.mode != ClaimMode::BlockMiss || e.refuted) continue;
      auto c = instantiate(e, 4, 4);
      if (c && c->r == Rat(4) && c->c == Rat(0)) found = true;
    }
    CHECK(found);
  }
  SUBCASE("mru hit at (8,3) is (1/2, 1)") {
    const auto* e = find(PolicyKind::Mru, ClaimMode::Hit, false);
    REQUIRE(e);
    auto c = instantiate(*e, 8, 3);
    REQUIRE(c.has_value());
    CHECK(c->r == make_rat(1, 2));
    CHECK(c->c == Rat(1));
    CHECK_FALSE(instantiate(*e, 5, 3).has_value());  // needs k >= 2l
  }
  SUBCASE("mru miss ((k-1)/(k-l+1), l-2)") {
    const auto* e = find(PolicyKind::Mru, ClaimMode::Miss, false);
    REQUIRE(e);
    auto c = instantiate(*e, 4, 3);
    REQUIRE(c.has_value());
    CHECK(c->r == make_rat(3, 2));
    CHECK(c->c == Rat(1));
  }
  SUBCASE("refuted rows exist") {
    CHECK(find(PolicyKind::Fifo, ClaimMode::BlockMiss, true) != nullptr);
    CHECK(find(PolicyKind::Mru, ClaimMode::BlockHit, true) != nullptr);
    const auto* e = find(PolicyKind::Mru, ClaimMode::BlockHit, true);
    CHECK(e->applicable(3, 3));
    CHECK_FALSE(e->applicable(3, 2));
  }
  SUBCASE("applicable_claims covers every associativity") {
    auto claims = applicable_claims(PolicyKind::Mru, 4);
    CHECK(!claims.empty());
    for (const auto& c : claims) {
      CHECK(c.policy_q.kind == PolicyKind::Lru);
      CHECK(c.policy_q.assoc >= 1);
      CHECK(c.policy_q.assoc <= 4);
    }
    // No block-miss claims exist for FIFO.
    for (const auto& c : applicable_claims(PolicyKind::Fifo, 4))
      CHECK(c.mode != ClaimMode::BlockMiss);
  }
}

TEST_CASE("equivalence of (1,0) block-hit and block-miss on every instance") {
  // Per instance both policies see the same access count to b, so
  // m_P <= m_Q iff h_P >= h_Q; checked by explicit enumeration.
  for (PolicyKind p : {PolicyKind::Fifo, PolicyKind::Mru}) {
    for (int kl : {2, 3}) {
      CompetitivenessClaim miss = claim(p, kl, kl, ClaimMode::BlockMiss, Rat(1), Rat(0));
      CompetitivenessClaim hit = claim(p, kl, kl, ClaimMode::BlockHit, Rat(1), Rat(0));
      auto states = reachable_states(p, kl, {A, B, C}, 4);
      long discrepancies = 0;
      for_each_sequence(3, 5, [&](const AccessSequence& seq) {
        for (const auto& st : states) {
          for (BlockId b = 0; b < 3; ++b) {
            bool m = check_claim(miss, seq, st, b).holds;
            bool h = check_claim(hit, seq, st, b).holds;
            if (m != h) ++discrepancies;
          }
        }
      });
      CHECK(discrepancies == 0);
    }
  }
}

TEST_CASE("an (r,0) block claim carries over to the aggregate claim") {
  // Aggregate counts are sums of per-block counts, so a violation-free
  // (r,0) block claim must leave the aggregate claim violation-free on the
  // same budget. Consistency check over several catalog instances.
  SearchBudget budget{4, 7, 5};
  struct Pair {
    PolicyKind p;
    int k, l;
    ClaimMode block_mode, agg_mode;
    Rat r;
  };
  std::vector<Pair> pairs = {
      {PolicyKind::Mru, 3, 2, ClaimMode::BlockMiss, ClaimMode::Miss, Rat(1)},
      {PolicyKind::Mru, 3, 2, ClaimMode::BlockHit, ClaimMode::Hit, Rat(1)},
      {PolicyKind::Fifo, 3, 2, ClaimMode::BlockHit, ClaimMode::Hit, make_rat(1, 2)},
      {PolicyKind::Fifo, 4, 2, ClaimMode::BlockHit, ClaimMode::Hit, make_rat(1, 2)},
  };
  for (const auto& pr : pairs) {
    auto block = verify_exhaustive(claim(pr.p, pr.k, pr.l, pr.block_mode, pr.r, Rat(0)), budget);
    REQUIRE_FALSE(block.has_value());
    auto agg = verify_exhaustive(claim(pr.p, pr.k, pr.l, pr.agg_mode, pr.r, Rat(0)), budget);
    CHECK_FALSE(agg.has_value());
  }
}

TEST_CASE("claim file round trip") {
  std::string text =
      "# catalog excerpt\n"
      "FIFO 4 LRU 2 MISS 4/3 0/1\n"
      "MRU 4 LRU 3 BLOCK_MISS 3/1 0/1\n"
      "MRU 8 LRU 3 HIT 1/2 1/1\n";
  auto claims = parse_claim_file(text);
  REQUIRE(claims.size() == 3);
  CHECK(claims[0].policy_p.kind == PolicyKind::Fifo);
  CHECK(claims[0].r == make_rat(4, 3));
  CHECK(claims[2].mode == ClaimMode::Hit);
  for (const auto& c : claims) {
    auto reparsed = parse_claim_file(format_claim_line(c) + "\n");
    REQUIRE(reparsed.size() == 1);
    CHECK(reparsed[0].policy_p == c.policy_p);
    CHECK(reparsed[0].policy_q == c.policy_q);
    CHECK(reparsed[0].mode == c.mode);
    CHECK(reparsed[0].r == c.r);
    CHECK(reparsed[0].c == c.c);
  }
  CHECK_THROWS(parse_claim_file("FIFO 2 LRU\n"));
}
