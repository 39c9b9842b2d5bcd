#pragma once

#include <map>
#include <optional>
#include <string>

#include "qcache/ipet.hpp"
#include "qcache/rational.hpp"

namespace qcache {

class Infeasible : public std::runtime_error {
 public:
  Infeasible() : std::runtime_error("model is infeasible") {}
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct BoundReport {
  long long objective = 0;           // integer optimum (costs are integers)
  std::map<std::string, long long> solution;
  long nodes_explored = 0;
  std::string config_tag;
};

struct SolveOptions {
  // Branch-and-bound node cap; <= 0 reads QCACHE_SOLVER_NODE_LIMIT from the
  // environment (unset means a large default). Exceeding it raises
  // BudgetExceeded, never a silently wrong bound.
  long node_limit = 0;
};

// Certified integer optimum via branch & bound over an exact-rational LP
// relaxation (bounded-variable simplex, Bland's rule). Deterministic:
// best-bound node selection, ties by node creation order, branching on the
// lowest-index fractional variable.
BoundReport solve_exact(const IpetModel& model, const SolveOptions& opts = {});

}  // namespace qcache
