#pragma once

#include <map>
#include <vector>

#include "qcache/policies.hpp"
#include "qcache/types.hpp"

namespace qcache {

struct SimResult {
  long hits = 0;
  long misses = 0;
  std::map<BlockId, long> per_block_hits;
  std::map<BlockId, long> per_block_misses;
  std::vector<AccessOutcome> trace;

  long accesses() const { return hits + misses; }
  long hits_to(BlockId b) const;
  long misses_to(BlockId b) const;
};

// Folds step over the sequence, counting hits and misses per block.
SimResult simulate(const PolicyState& initial, const AccessSequence& seq);

// One policy state per cache set; block b is routed to set b % nb_sets.
SimResult simulate_set_assoc(const SetAssocConfig& cfg,
                             const std::vector<PolicyState>& initial_per_set,
                             const AccessSequence& seq);

// All states reachable from the empty state by sequences over `universe`
// of length <= max_depth, in deterministic BFS discovery order.
std::vector<PolicyState> reachable_states(PolicyKind policy, int k,
                                          const std::vector<BlockId>& universe,
                                          int max_depth);

// CSV rows `block,hits,misses` plus a `total,...` row.
std::string sim_result_csv(const SimResult& r);

}  // namespace qcache
