#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "qcache/exec_graph.hpp"
#include "qcache/program.hpp"
#include "qcache/types.hpp"

namespace qcache {

// Conflict-set persistence: an access to b inside scope s is persistent for
// associativity a iff at most a distinct blocks of b's cache set are
// accessible within the scope's edges. Sound for LRU(a): once loaded, b
// cannot gather a distinct conflicts inside the scope, so it misses at most
// once per scope entry.
struct PersistenceResult {
  int max_assoc = 1;
  int scopes = 1;
  std::vector<int> scope_parent_of;

  // P_{b,s,a} keyed by (block, scope); set empty unless |CS(b,s)| <= a.
  std::map<std::pair<BlockId, int>, std::vector<AccessRef>> accesses_of_block_in_scope;
  std::map<std::pair<BlockId, int>, int> conflict_set_size;

  // ES_{b,a}: outermost scopes whose persistent set is not subsumed.
  std::map<std::pair<BlockId, int>, std::vector<int>> essential;

  std::vector<AccessRef> persistent_set(BlockId b, int scope, int assoc) const;
  const std::vector<int>& essential_scopes(BlockId b, int assoc) const;

  std::string to_csv() const;  // block,scope,assoc,access_count,essential
};

// Classical LRU may/must fixpoint over the CFG from an empty cache;
// ALWAYS_HIT iff the block is in the must state, ALWAYS_MISS iff it is
// absent from the may state.
Classification must_may_analysis(const ProgramGraph& g, const SetAssocConfig& cfg);

// Must-only variant (no ALWAYS_MISS); at associativity 1 this is sound for
// every replacement policy since the most-recently-used block is cached.
Classification must_only_analysis(const ProgramGraph& g, const SetAssocConfig& cfg);

PersistenceResult persistence_analysis(const ProgramGraph& g, const SetAssocConfig& cfg);

enum class BaselineMode { AllHit, AllMiss, DmMust, DmMustPers };

struct BaselineResult {
  Classification classification;
  std::optional<PersistenceResult> persistence;  // DmMustPers only
};

BaselineResult baseline_classifications(const ProgramGraph& g, const SetAssocConfig& cfg,
                                        BaselineMode mode);

std::string classification_csv(const ProgramGraph& g, const Classification& cls);

}  // namespace qcache
