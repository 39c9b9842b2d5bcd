#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcache/exec_graph.hpp"
#include "qcache/program.hpp"
#include "qcache/simulate.hpp"
#include "qcache/types.hpp"

namespace qcache {

class PathBudgetExceeded : public std::runtime_error {
 public:
  explicit PathBudgetExceeded(long budget)
      : std::runtime_error("path budget " + std::to_string(budget) + " exceeded") {}
};

struct ConcretePath {
  std::vector<int> edges;  // program edge ids, entry to exit
  AccessSequence accesses;
};

constexpr long kDefaultPathBudget = 1L << 12;

// Every loop-bound-respecting entry-to-exit path, each exactly once, in
// deterministic DFS order (edges tried in declaration order). A loop entry
// arms the loop's counter with its bound; each back edge consumes one.
void for_each_path(const ProgramGraph& g, long path_budget,
                   const std::function<void(const ConcretePath&)>& fn);

std::vector<ConcretePath> enumerate_paths(const ProgramGraph& g,
                                          long path_budget = kDefaultPathBudget);

struct OracleReport {
  long path_count = 0;
  long long max_cost = 0;
  long max_misses = 0;
  ConcretePath argmax_cost_path;
  ConcretePath argmax_miss_path;
};

// Simulates every path from empty caches and reports the worst observed
// cost and miss count under the given policy.
OracleReport worst_observed(const ProgramGraph& g, PolicyKind policy, int k,
                            const SetAssocConfig& cfg, const LatencyModel& lat,
                            long path_budget = kDefaultPathBudget);

std::string oracle_report_csv(const OracleReport& r);
std::string format_path(const ProgramGraph& g, const ConcretePath& p);

}  // namespace qcache
