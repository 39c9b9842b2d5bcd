#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcache/claims.hpp"
#include "qcache/exec_graph.hpp"
#include "qcache/lru_analysis.hpp"
#include "qcache/rational.hpp"
#include "qcache/types.hpp"

namespace qcache {

class UnboundedModel : public std::runtime_error {
 public:
  explicit UnboundedModel(const std::string& what) : std::runtime_error(what) {}
};

enum class Rel { Le, Eq, Ge };

struct IpetConstraint {
  std::string name;
  std::vector<std::pair<int, long long>> terms;  // (var index, integer coefficient)
  Rel rel = Rel::Le;
  long long rhs = 0;
};

struct IpetVar {
  std::string name;
  long long lb = 0;
  long long ub = 0;
};

// Integer program: maximize objective subject to the constraints and
// 0 <= x <= ub, all variables integer. Coefficients are integers by
// construction (rational factors are cleared when constraints are added).
struct IpetModel {
  std::vector<IpetVar> vars;
  std::map<std::string, int> var_index;
  std::vector<IpetConstraint> constraints;
  std::map<int, long long> objective;

  int add_var(const std::string& name, long long ub);
  int var(const std::string& name) const;
  bool has_var(const std::string& name) const { return var_index.count(name) > 0; }

  bool operator==(const IpetModel& o) const;
};

// Variable naming scheme (stable):
//   xe_<execEdgeId>      edge counts
//   ab_<b>, mb_<b>, hb_<b>          per-block accesses / misses / hits
//   mlru_<b>_<a>, hlru_<b>_<a>      hypothetical LRU misses / hits
//   ms_<s>, hs_<s>, mslru_<s>_<a>, hslru_<s>_<a>  per-cache-set aggregates
std::string xe_name(int edge_id);

// Unit source flow, per-node conservation, one loop-bound inequality per
// loop, objective = sum of edge costs. Edge counts carry finite upper
// bounds derived from the enclosing loop bounds.
IpetModel build_base_model(const ExecGraph& eg);

// Switches the objective to count MISS edges (worst-case miss number).
void set_miss_objective(IpetModel& model, const ExecGraph& eg);

// Creates ab_/mb_/hb_ variables and their defining constraints for every
// block accessed in the graph. Idempotent.
void add_block_count_vars(IpetModel& model, const ExecGraph& eg);

// Hypothetical-LRU bound per block and associativity a in 1..max_assoc:
//   mlru_{b,a} <= sum of entry flows of essential scopes
//                 + sum of x over non-persistent access edges of b
//   hlru_{b,a} >= ab_b - mlru_{b,a}
void add_lru_hypothetical(IpetModel& model, const PersistenceResult& pr, const ExecGraph& eg);

// Persistence exploited directly on the analysed policy's misses at
// associativity 1 (sound for every policy: the most-recently-used block of
// a set is always cached). Part of the dm-must-pers baseline.
void add_dm_persistence_base(IpetModel& model, const PersistenceResult& pr_dm, const ExecGraph& eg);

struct CompFamilies {
  bool block_miss = false;
  bool block_hit = false;
  bool miss = false;
  bool hit = false;

  static CompFamilies all() { return {true, true, true, true}; }
};

// Adds the competitiveness constraints for the given instantiated claims
// (policy under analysis relative to LRU(a), a = claim.policy_q.assoc):
// per block mb <= r*mlru + c and hb >= r*hlru - c, and per cache set the
// aggregated variants. Returns the number of inequalities added (0 means
// the selected families are vacuous for this policy).
int add_competitiveness(IpetModel& model, const std::vector<CompetitivenessClaim>& claims,
                        const SetAssocConfig& cfg, const ExecGraph& eg, CompFamilies families);

// CPLEX-LP text: Maximize / Subject To / Bounds / General / End.
std::string emit_lp(const IpetModel& model);
IpetModel parse_lp(const std::string& text);

// JSON debug dump of variables, constraints and objective.
std::string dump_model_json(const IpetModel& model);

}  // namespace qcache
