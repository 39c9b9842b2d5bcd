#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "qcache/lru_analysis.hpp"
#include "qcache/oracle.hpp"

using namespace qcache;

namespace {

ProgramGraph straight(const std::vector<BlockId>& accesses) {
  std::string text = "entry n0\nexit n1\nedge n0 n1 access ";
  for (std::size_t i = 0; i < accesses.size(); ++i)
    text += (i ? "," : "") + std::to_string(accesses[i]);
  text += "\n";
  return parse_program(text);
}

// Soundness against concrete LRU(k) simulation of every path: each
// classified access must behave as classified on every path it occurs on.
void check_sound(const ProgramGraph& g, const SetAssocConfig& cfg, const Classification& cls) {
  std::vector<PolicyState> init;
  for (int s = 0; s < cfg.nb_sets; ++s) init.push_back(empty_state(PolicyKind::Lru, cfg.assoc));
  for_each_path(g, 1 << 10, [&](const ConcretePath& p) {
    std::vector<PolicyState> sets = init;
    for (int e : p.edges) {
      const ProgramEdge& edge = g.edges[static_cast<std::size_t>(e)];
      for (int j = 0; j < static_cast<int>(edge.accesses.size()); ++j) {
        BlockId b = edge.accesses[static_cast<std::size_t>(j)];
        AccessOutcome o = step(sets[static_cast<std::size_t>(cfg.set_of(b))], b);
        AccessClass c = cls.of(AccessRef{e, j});
        if (c == AccessClass::AlwaysHit) CHECK(o == AccessOutcome::Hit);
        if (c == AccessClass::AlwaysMiss) CHECK(o == AccessOutcome::Miss);
      }
    }
  });
}

}  // namespace

TEST_CASE("repeat access is always-hit") {
  ProgramGraph g = straight({5, 5});
  Classification cls = must_may_analysis(g, SetAssocConfig(1, 1));
  CHECK(cls.of(AccessRef{0, 0}) == AccessClass::AlwaysMiss);  // cold start
  CHECK(cls.of(AccessRef{0, 1}) == AccessClass::AlwaysHit);
}

TEST_CASE("eviction makes the reuse an always-miss") {
  // a,b,c,a with k=2 in one set: a has aged out in both may and must.
  ProgramGraph g = straight({0, 1, 2, 0});
  Classification cls = must_may_analysis(g, SetAssocConfig(1, 2));
  CHECK(cls.of(AccessRef{0, 3}) == AccessClass::AlwaysMiss);
  check_sound(g, SetAssocConfig(1, 2), cls);
}

TEST_CASE("diamond join makes the reuse unknown") {
  ProgramGraph g = parse_program(
      "entry a\nexit d\nnode b1\nnode b2\nnode c\n"
      "edge a b1 access 1\nedge a b2\nedge b1 c\nedge b2 c\nedge c d access 1\n");
  Classification cls = must_may_analysis(g, SetAssocConfig(1, 2));
  CHECK(cls.of(AccessRef{4, 0}) == AccessClass::Unknown);
  check_sound(g, SetAssocConfig(1, 2), cls);
}

TEST_CASE("must/may agrees with simulation on straight lines") {
  // On a single path the abstraction is exact.
  std::vector<std::vector<BlockId>> cases = {
      {0, 1, 0, 2, 1, 0}, {3, 3, 3}, {0, 1, 2, 3, 0, 1, 2, 3}, {1, 2, 1, 2, 1}};
  for (const auto& seq : cases) {
    for (int k = 1; k <= 3; ++k) {
      for (int sets = 1; sets <= 2; ++sets) {
        SetAssocConfig cfg(sets, k);
        ProgramGraph g = straight(seq);
        Classification cls = must_may_analysis(g, cfg);
        std::vector<PolicyState> st;
        for (int s = 0; s < sets; ++s) st.push_back(empty_state(PolicyKind::Lru, k));
        for (std::size_t j = 0; j < seq.size(); ++j) {
          AccessOutcome o = step(st[static_cast<std::size_t>(cfg.set_of(seq[j]))], seq[j]);
          AccessClass expect =
              o == AccessOutcome::Hit ? AccessClass::AlwaysHit : AccessClass::AlwaysMiss;
          CHECK(cls.of(AccessRef{0, static_cast<int>(j)}) == expect);
        }
      }
    }
  }
}

TEST_CASE("classification soundness on a loop with a diamond") {
  ProgramGraph g = parse_program(
      "entry n0\nexit n9\nnode h\nnode t1\nnode t2\nnode j\n"
      "edge n0 h access 0\n"
      "edge h t1 access 1\n"
      "edge h t2 access 2,3\n"
      "edge t1 j access 4\n"
      "edge t2 j\n"
      "edge j h access 0\n"
      "edge h n9 access 1\n"
      "loop l header h bound 3 parent none back j->h entryedges n0->h\n");
  for (int k = 1; k <= 4; ++k) {
    Classification cls = must_may_analysis(g, SetAssocConfig(1, k));
    check_sound(g, SetAssocConfig(1, k), cls);
    Classification dm = must_only_analysis(g, SetAssocConfig(1, 1));
    for (const auto& [ref, c] : dm.per_access) CHECK(c != AccessClass::AlwaysMiss);
  }
}

TEST_CASE("persistence of a single-block loop") {
  ProgramGraph g = parse_program(
      "entry n0\nexit n3\nnode h\nnode b\n"
      "edge n0 h\nedge h b access 7\nedge b h\nedge h n3\n"
      "loop l header h bound 9 parent none back b->h entryedges n0->h\n");
  PersistenceResult pr = persistence_analysis(g, SetAssocConfig(1, 2));
  // |CS| = 1, so persistent already at a = 1 and (monotonicity) at a = 2.
  CHECK(pr.persistent_set(7, 1, 1).size() == 1);
  CHECK(pr.persistent_set(7, 1, 2).size() == 1);
  CHECK(pr.persistent_set(7, 0, 1).size() == 1);  // whole-program scope too
  // Outermost scope wins: the loop is subsumed by the program scope.
  CHECK(pr.essential_scopes(7, 1) == std::vector<int>{0});
}

TEST_CASE("three conflicting blocks need associativity three") {
  ProgramGraph g = parse_program(
      "entry n0\nexit n3\nnode h\nnode b\n"
      "edge n0 h\nedge h b access 0,3,6\nedge b h\nedge h n3\n"
      "loop l header h bound 5 parent none back b->h entryedges n0->h\n");
  PersistenceResult pr = persistence_analysis(g, SetAssocConfig(3, 3));
  // All of 0,3,6 map to set 0: conflict set size 3.
  CHECK(pr.persistent_set(0, 1, 2).empty());
  CHECK(pr.persistent_set(0, 1, 3).size() == 1);
  CHECK(pr.persistent_set(3, 1, 3).size() == 1);

  // Cross-check with exhaustive LRU path simulation: at a = 3 at most one
  // miss to block 0 per entry into the loop.
  SetAssocConfig cfg(3, 3);
  for_each_path(g, 1 << 10, [&](const ConcretePath& p) {
    SimResult r = simulate_set_assoc(cfg, {empty_state(PolicyKind::Lru, 3),
                                           empty_state(PolicyKind::Lru, 3),
                                           empty_state(PolicyKind::Lru, 3)},
                                     p.accesses);
    CHECK(r.misses_to(0) <= 1);
  });
}

TEST_CASE("nested scopes and the essential-scope rule") {
  // Inner loop touches {1,2}; the outer loop adds {3,4}.
  ProgramGraph g = parse_program(
      "entry n0\nexit n5\nnode oh\nnode ih\nnode ib\nnode ot\n"
      "edge n0 oh\n"
      "edge oh ih access 3\n"
      "edge ih ib access 1,2\n"
      "edge ib ih\n"
      "edge ih ot access 4\n"
      "edge ot oh\n"
      "edge oh n5\n"
      "loop outer header oh bound 4 parent none back ot->oh entryedges n0->oh\n"
      "loop inner header ih bound 3 parent outer back ib->ih entryedges oh->ih\n");
  PersistenceResult pr = persistence_analysis(g, SetAssocConfig(1, 4));
  // a=2: block 1 persistent only in the inner scope (conflict {1,2}).
  CHECK(pr.persistent_set(1, 2, 2).size() == 1);
  CHECK(pr.persistent_set(1, 1, 2).empty());
  CHECK(pr.essential_scopes(1, 2) == std::vector<int>{2});
  // a=4: outer scope covers everything, inner is subsumed.
  CHECK(pr.persistent_set(1, 1, 4).size() == 1);
  CHECK(pr.essential_scopes(1, 4) == std::vector<int>{0});
  // Monotonicity in associativity.
  for (BlockId b : {1u, 2u, 3u, 4u}) {
    for (int s = 0; s < pr.scopes; ++s) {
      for (int a = 1; a < 4; ++a) {
        auto small = pr.persistent_set(b, s, a);
        auto big = pr.persistent_set(b, s, a + 1);
        CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
      }
    }
  }
}

TEST_CASE("essential scopes match their defining formula") {
  ProgramGraph g = parse_program(
      "entry n0\nexit n5\nnode oh\nnode ih\nnode ib\nnode ot\n"
      "edge n0 oh\n"
      "edge oh ih access 3\n"
      "edge ih ib access 1,2\n"
      "edge ib ih\n"
      "edge ih ot access 4,5\n"
      "edge ot oh\n"
      "edge oh n5\n"
      "loop outer header oh bound 4 parent none back ot->oh entryedges n0->oh\n"
      "loop inner header ih bound 3 parent outer back ib->ih entryedges oh->ih\n");
  SetAssocConfig cfg(2, 3);
  PersistenceResult pr = persistence_analysis(g, cfg);
  for (BlockId b : g.all_blocks()) {
    for (int a = 1; a <= cfg.assoc; ++a) {
      std::vector<int> expect;
      for (int s = 0; s < pr.scopes; ++s) {
        auto ps = pr.persistent_set(b, s, a);
        if (ps.empty()) continue;
        bool subsumed = false;
        for (int anc = pr.scope_parent_of[static_cast<std::size_t>(s)]; anc >= 0;
             anc = pr.scope_parent_of[static_cast<std::size_t>(anc)]) {
          auto outer = pr.persistent_set(b, anc, a);
          if (std::includes(outer.begin(), outer.end(), ps.begin(), ps.end())) subsumed = true;
        }
        if (!subsumed) expect.push_back(s);
      }
      CHECK(pr.essential_scopes(b, a) == expect);
    }
  }
}

TEST_CASE("persistence soundness: misses per scope entry") {
  // For every path, misses to b among persistent accesses under LRU(a)
  // are bounded by the number of entries into the scope.
  ProgramGraph g = parse_program(
      "entry n0\nexit n4\nnode h\nnode x\nnode y\n"
      "edge n0 h\n"
      "edge h x access 0,1\n"
      "edge x y access 2\n"
      "edge y h\n"
      "edge h n4 access 0\n"
      "loop l header h bound 4 parent none back y->h entryedges n0->h\n");
  SetAssocConfig cfg(1, 3);
  PersistenceResult pr = persistence_analysis(g, cfg);
  for (int a = 1; a <= 3; ++a) {
    for (BlockId b : g.all_blocks()) {
      for (int scope = 0; scope < pr.scopes; ++scope) {
        auto pset = pr.persistent_set(b, scope, a);
        if (pset.empty()) continue;
        for_each_path(g, 1 << 10, [&](const ConcretePath& p) {
          PolicyState st = empty_state(PolicyKind::Lru, a);
          long entries = scope == 0 ? 1 : 0;
          long persistent_misses = 0;
          const Loop* loop = scope == 0 ? nullptr : &g.loops[static_cast<std::size_t>(scope - 1)];
          for (int e : p.edges) {
            if (loop && std::find(loop->entry_edges.begin(), loop->entry_edges.end(), e) !=
                            loop->entry_edges.end())
              ++entries;
            const ProgramEdge& edge = g.edges[static_cast<std::size_t>(e)];
            for (int j = 0; j < static_cast<int>(edge.accesses.size()); ++j) {
              AccessOutcome o = step(st, edge.accesses[static_cast<std::size_t>(j)]);
              if (o == AccessOutcome::Miss &&
                  std::find(pset.begin(), pset.end(), AccessRef{e, j}) != pset.end())
                ++persistent_misses;
            }
          }
          CHECK(persistent_misses <= entries);
        });
      }
    }
  }
}

TEST_CASE("baselines") {
  ProgramGraph g = straight({0, 0, 1, 2, 1});
  SetAssocConfig cfg(1, 2);
  SUBCASE("all-miss marks everything") {
    auto res = baseline_classifications(g, cfg, BaselineMode::AllMiss);
    for (const auto& [ref, c] : res.classification.per_access) CHECK(c == AccessClass::AlwaysMiss);
    CHECK(res.classification.per_access.size() == 5);
  }
  SUBCASE("all-hit marks everything") {
    auto res = baseline_classifications(g, cfg, BaselineMode::AllHit);
    for (const auto& [ref, c] : res.classification.per_access) CHECK(c == AccessClass::AlwaysHit);
  }
  SUBCASE("dm-must catches the immediate repeat only") {
    auto res = baseline_classifications(g, cfg, BaselineMode::DmMust);
    CHECK(res.classification.of(AccessRef{0, 1}) == AccessClass::AlwaysHit);
    CHECK(res.classification.of(AccessRef{0, 4}) == AccessClass::Unknown);  // no may at assoc 1
    CHECK_FALSE(res.persistence.has_value());
  }
  SUBCASE("dm-must-pers adds associativity-1 persistence") {
    ProgramGraph loop = parse_program(
        "entry n0\nexit n3\nnode h\nnode b\n"
        "edge n0 h\nedge h b access 7,7,7\nedge b h\nedge h n3\n"
        "loop l header h bound 3 parent none back b->h entryedges n0->h\n");
    auto res = baseline_classifications(loop, cfg, BaselineMode::DmMustPers);
    REQUIRE(res.persistence.has_value());
    CHECK(res.persistence->max_assoc == 1);
    CHECK(res.persistence->persistent_set(7, 1, 1).size() == 3);
  }
}

TEST_CASE("classification and persistence dumps") {
  ProgramGraph g = straight({0, 0});
  Classification cls = must_may_analysis(g, SetAssocConfig(1, 2));
  std::string csv = classification_csv(g, cls);
  CHECK(csv.find("always_hit") != std::string::npos);
  CHECK(csv.find("always_miss") != std::string::npos);

  ProgramGraph loop = parse_program(
      "entry n0\nexit n3\nnode h\nnode b\n"
      "edge n0 h\nedge h b access 7\nedge b h\nedge h n3\n"
      "loop l header h bound 3 parent none back b->h entryedges n0->h\n");
  PersistenceResult pr = persistence_analysis(loop, SetAssocConfig(1, 2));
  std::string pcsv = pr.to_csv();
  CHECK(pcsv.find("block,scope,assoc,access_count,essential") != std::string::npos);
  CHECK(pcsv.find("7,0,1,1,true") != std::string::npos);
}
