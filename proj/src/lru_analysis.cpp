#include "qcache/lru_analysis.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace qcache {

namespace {

// One abstract cache per cache set: block -> age bound (< assoc).
using AgeMap = std::map<BlockId, int>;

struct AbstractState {
  bool reachable = false;
  std::vector<AgeMap> must;  // upper bounds, intersection domain
  std::vector<AgeMap> may;   // lower bounds, union domain
};

void must_update(AgeMap& m, BlockId b, int assoc) {
  auto it = m.find(b);
  if (it != m.end()) {
    int age = it->second;
    for (auto& [x, a] : m)
      if (x != b && a < age) ++a;
  } else {
    for (auto fit = m.begin(); fit != m.end();) {
      if (++fit->second >= assoc)
        fit = m.erase(fit);
      else
        ++fit;
    }
  }
  m[b] = 0;
}

void may_update(AgeMap& m, BlockId b, int assoc) {
  auto it = m.find(b);
  if (it != m.end()) {
    int age = it->second;
    for (auto fit = m.begin(); fit != m.end();) {
      if (fit->first != b && fit->second <= age) {
        if (++fit->second >= assoc) {
          fit = m.erase(fit);
          continue;
        }
      }
      ++fit;
    }
  } else {
    for (auto fit = m.begin(); fit != m.end();) {
      if (++fit->second >= assoc)
        fit = m.erase(fit);
      else
        ++fit;
    }
  }
  m[b] = 0;
}

AgeMap must_join(const AgeMap& a, const AgeMap& b) {
  AgeMap out;
  for (const auto& [blk, age] : a) {
    auto it = b.find(blk);
    if (it != b.end()) out[blk] = std::max(age, it->second);
  }
  return out;
}

AgeMap may_join(const AgeMap& a, const AgeMap& b) {
  AgeMap out = a;
  for (const auto& [blk, age] : b) {
    auto it = out.find(blk);
    if (it == out.end())
      out[blk] = age;
    else
      it->second = std::min(it->second, age);
  }
  return out;
}

AbstractState join(const AbstractState& a, const AbstractState& b) {
  if (!a.reachable) return b;
  if (!b.reachable) return a;
  AbstractState out;
  out.reachable = true;
  out.must.resize(a.must.size());
  out.may.resize(a.may.size());
  for (std::size_t s = 0; s < a.must.size(); ++s) {
    out.must[s] = must_join(a.must[s], b.must[s]);
    out.may[s] = may_join(a.may[s], b.may[s]);
  }
  return out;
}

void transfer_access(AbstractState& st, BlockId b, const SetAssocConfig& cfg) {
  int set = cfg.set_of(b);
  must_update(st.must[static_cast<std::size_t>(set)], b, cfg.assoc);
  may_update(st.may[static_cast<std::size_t>(set)], b, cfg.assoc);
}

bool state_equal(const AbstractState& a, const AbstractState& b) {
  return a.reachable == b.reachable && a.must == b.must && a.may == b.may;
}

std::vector<AbstractState> fixpoint(const ProgramGraph& g, const SetAssocConfig& cfg) {
  int n = g.num_nodes();
  std::vector<AbstractState> in_state(static_cast<std::size_t>(n));
  AbstractState init;
  init.reachable = true;
  init.must.resize(static_cast<std::size_t>(cfg.nb_sets));
  init.may.resize(static_cast<std::size_t>(cfg.nb_sets));
  in_state[static_cast<std::size_t>(g.entry)] = init;

  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(n));
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    out_edges[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].src)].push_back(e);

  std::deque<int> work{g.entry};
  std::vector<bool> queued(static_cast<std::size_t>(n), false);
  queued[static_cast<std::size_t>(g.entry)] = true;
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    queued[static_cast<std::size_t>(v)] = false;
    for (int e : out_edges[static_cast<std::size_t>(v)]) {
      const ProgramEdge& edge = g.edges[static_cast<std::size_t>(e)];
      AbstractState st = in_state[static_cast<std::size_t>(v)];
      if (!st.reachable) continue;
      for (BlockId b : edge.accesses) transfer_access(st, b, cfg);
      AbstractState merged = join(in_state[static_cast<std::size_t>(edge.dst)], st);
      if (!state_equal(merged, in_state[static_cast<std::size_t>(edge.dst)])) {
        in_state[static_cast<std::size_t>(edge.dst)] = std::move(merged);
        if (!queued[static_cast<std::size_t>(edge.dst)]) {
          queued[static_cast<std::size_t>(edge.dst)] = true;
          work.push_back(edge.dst);
        }
      }
    }
  }
  return in_state;
}

Classification classify(const ProgramGraph& g, const SetAssocConfig& cfg, bool use_may) {
  std::vector<AbstractState> in_state = fixpoint(g, cfg);
  Classification cls;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const ProgramEdge& edge = g.edges[static_cast<std::size_t>(e)];
    AbstractState st = in_state[static_cast<std::size_t>(edge.src)];
    for (int j = 0; j < static_cast<int>(edge.accesses.size()); ++j) {
      BlockId b = edge.accesses[static_cast<std::size_t>(j)];
      int set = cfg.set_of(b);
      AccessClass c = AccessClass::Unknown;
      if (st.must[static_cast<std::size_t>(set)].count(b))
        c = AccessClass::AlwaysHit;
      else if (use_may && !st.may[static_cast<std::size_t>(set)].count(b))
        c = AccessClass::AlwaysMiss;
      cls.per_access[AccessRef{e, j}] = c;
      transfer_access(st, b, cfg);
    }
  }
  return cls;
}

}  // namespace

Classification must_may_analysis(const ProgramGraph& g, const SetAssocConfig& cfg) {
  return classify(g, cfg, true);
}

Classification must_only_analysis(const ProgramGraph& g, const SetAssocConfig& cfg) {
  return classify(g, cfg, false);
}

PersistenceResult persistence_analysis(const ProgramGraph& g, const SetAssocConfig& cfg) {
  PersistenceResult pr;
  pr.max_assoc = cfg.assoc;
  pr.scopes = num_scopes(g);
  pr.scope_parent_of.resize(static_cast<std::size_t>(pr.scopes));
  for (int s = 0; s < pr.scopes; ++s) pr.scope_parent_of[static_cast<std::size_t>(s)] = scope_parent(g, s);

  for (int s = 0; s < pr.scopes; ++s) {
    std::map<int, std::set<BlockId>> blocks_per_set;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      if (!scope_contains_edge(g, s, e)) continue;
      const ProgramEdge& edge = g.edges[static_cast<std::size_t>(e)];
      for (int j = 0; j < static_cast<int>(edge.accesses.size()); ++j) {
        BlockId b = edge.accesses[static_cast<std::size_t>(j)];
        blocks_per_set[cfg.set_of(b)].insert(b);
        pr.accesses_of_block_in_scope[{b, s}].push_back(AccessRef{e, j});
      }
    }
    for (const auto& [set, blocks] : blocks_per_set)
      for (BlockId b : blocks) pr.conflict_set_size[{b, s}] = static_cast<int>(blocks.size());
  }

  // ES_{b,a}: scopes with a nonempty persistent set not contained in any
  // outer scope's persistent set.
  for (const auto& entry : pr.accesses_of_block_in_scope) {
    BlockId b = entry.first.first;
    for (int a = 1; a <= pr.max_assoc; ++a) {
      auto ekey = std::make_pair(b, a);
      if (pr.essential.count(ekey)) continue;
      std::vector<int> scopes;
      for (int s = 0; s < pr.scopes; ++s) {
        auto ps = pr.persistent_set(b, s, a);
        if (ps.empty()) continue;
        bool subsumed = false;
        for (int anc = pr.scope_parent_of[static_cast<std::size_t>(s)]; anc >= 0;
             anc = pr.scope_parent_of[static_cast<std::size_t>(anc)]) {
          auto outer = pr.persistent_set(b, anc, a);
          if (std::includes(outer.begin(), outer.end(), ps.begin(), ps.end())) {
            subsumed = true;
            break;
          }
        }
        if (!subsumed) scopes.push_back(s);
      }
      pr.essential[ekey] = std::move(scopes);
    }
  }
  return pr;
}

std::vector<AccessRef> PersistenceResult::persistent_set(BlockId b, int scope, int assoc) const {
  auto it = accesses_of_block_in_scope.find({b, scope});
  if (it == accesses_of_block_in_scope.end()) return {};
  auto cs = conflict_set_size.find({b, scope});
  if (cs == conflict_set_size.end() || cs->second > assoc) return {};
  std::vector<AccessRef> out = it->second;
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<int>& PersistenceResult::essential_scopes(BlockId b, int assoc) const {
  static const std::vector<int> kEmpty;
  auto it = essential.find({b, assoc});
  return it == essential.end() ? kEmpty : it->second;
}

std::string PersistenceResult::to_csv() const {
  std::ostringstream os;
  os << "block,scope,assoc,access_count,essential\n";
  for (const auto& entry : accesses_of_block_in_scope) {
    const auto& [block, scope] = entry.first;
    for (int a = 1; a <= max_assoc; ++a) {
      auto ps = persistent_set(block, scope, a);
      if (ps.empty()) continue;
      const auto& ess = essential_scopes(block, a);
      bool is_ess = std::find(ess.begin(), ess.end(), scope) != ess.end();
      os << block << "," << scope << "," << a << "," << ps.size() << ","
         << (is_ess ? "true" : "false") << "\n";
    }
  }
  return os.str();
}

BaselineResult baseline_classifications(const ProgramGraph& g, const SetAssocConfig& cfg,
                                        BaselineMode mode) {
  BaselineResult res;
  switch (mode) {
    case BaselineMode::AllHit:
    case BaselineMode::AllMiss: {
      AccessClass c = mode == BaselineMode::AllHit ? AccessClass::AlwaysHit : AccessClass::AlwaysMiss;
      for (const AccessRef& ref : g.all_accesses()) res.classification.per_access[ref] = c;
      break;
    }
    case BaselineMode::DmMust:
    case BaselineMode::DmMustPers: {
      SetAssocConfig dm(cfg.nb_sets, 1);
      res.classification = must_only_analysis(g, dm);
      if (mode == BaselineMode::DmMustPers) res.persistence = persistence_analysis(g, dm);
      break;
    }
  }
  return res;
}

std::string classification_csv(const ProgramGraph& g, const Classification& cls) {
  std::ostringstream os;
  os << "edge,access_index,block,class\n";
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const ProgramEdge& edge = g.edges[static_cast<std::size_t>(e)];
    for (int j = 0; j < static_cast<int>(edge.accesses.size()); ++j) {
      const char* name = "unknown";
      switch (cls.of(AccessRef{e, j})) {
        case AccessClass::AlwaysHit: name = "always_hit"; break;
        case AccessClass::AlwaysMiss: name = "always_miss"; break;
        case AccessClass::Unknown: name = "unknown"; break;
      }
      os << g.node_names[static_cast<std::size_t>(edge.src)] << "->"
         << g.node_names[static_cast<std::size_t>(edge.dst)] << "," << j << ","
         << edge.accesses[static_cast<std::size_t>(j)] << "," << name << "\n";
    }
  }
  return os.str();
}

}  // namespace qcache
