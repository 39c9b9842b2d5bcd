#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcache/claims.hpp"
#include "qcache/exec_graph.hpp"
#include "qcache/ipet.hpp"
#include "qcache/oracle.hpp"
#include "qcache/program.hpp"
#include "qcache/solver.hpp"

namespace qcache {

enum class AnalysisConfig {
  AllHit,
  AllMiss,
  DmMust,
  DmMustPers,
  LruMayMust,
  LruMayMustPers,
  BlockMiss,
  BlockHit,
  Miss,
  Hit,
  AllComp,
};

const std::vector<AnalysisConfig>& all_configs();
const char* config_name(AnalysisConfig c);
AnalysisConfig config_from_name(const std::string& name);

// Full WCET-style model for one (program, policy, configuration):
// classification base, exec graph, base flow model, hypothetical-LRU and
// competitiveness constraints as the configuration selects.
//
// Classification bases: allhit/allmiss mark everything; dm-must(-pers) use
// must analysis at associativity 1 (sound for every policy);
// lru-maymust(-pers) use LRU may/must at associativity k when the analysed
// policy is LRU and fall back to the dm base otherwise; the five
// competitiveness configurations sit on top of dm-must-pers.
struct AnalysisOutcome {
  IpetModel model;              // cost objective
  long long cost_bound = 0;
  long long miss_bound = 0;
  bool vacuous = false;         // selected competitiveness family added no constraint
  long nodes_explored = 0;
};

AnalysisOutcome analyze_program(const ProgramGraph& g, PolicyKind policy,
                                const SetAssocConfig& cfg, const LatencyModel& lat,
                                AnalysisConfig ac, const SolveOptions& solve_opts = {});

struct ExperimentConfig {
  std::vector<std::string> program_files;
  PolicyKind policy = PolicyKind::Lru;
  int assoc = 2;
  int nb_sets = 1;
  LatencyModel latency;
  std::vector<AnalysisConfig> configs;          // empty = all eleven
  AnalysisConfig baseline = AnalysisConfig::LruMayMustPers;
  bool run_oracle = false;
  long path_budget = kDefaultPathBudget;
  std::string lp_dir;                           // emit LP files when nonempty
};

// Line-based `key=value` config: program=..., policy=..., k=..., nbsets=...,
// hit_latency=..., miss_latency=..., config=..., baseline=..., oracle=...,
// lp_dir=... (program= and config= may repeat).
ExperimentConfig parse_experiment_config(const std::string& text);

struct ExperimentRow {
  std::string program;
  AnalysisConfig config = AnalysisConfig::AllMiss;
  long long cost_bound = 0;
  long long miss_bound = 0;
  Rat ratio;                   // cost bound / baseline cost bound
  bool oracle_checked = false;
  bool sound = true;           // for allhit: the dual lower-limit check
  bool vacuous = false;
  std::string error;           // per-program failures become rows, not aborts
};

struct ComparisonTable {
  std::vector<ExperimentRow> rows;
  double geometric_mean_ratio = 0.0;  // over positive ratios
  bool any_unsound = false;

  std::string to_csv() const;
};

ComparisonTable run_experiment(const ExperimentConfig& cfg);

// Runs verify_exhaustive for every catalog entry instantiated at k <= k_max,
// l <= k (budget defaults to (k+2, 10, 8) per k), and the witness
// constructions for the refuted entries. CSV report; `passed` is false if
// any positive claim found a counterexample or a refutation failed to
// materialize.
struct CatalogReport {
  struct Row {
    std::string source;
    std::string claim;
    int k = 0, l = 0;
    std::string outcome;  // no_counterexample | counterexample | refutation_witnessed | refutation_failed
    std::string witness;
  };
  std::vector<Row> rows;
  bool passed = true;

  std::string to_csv() const;
};

CatalogReport verify_catalog(int k_max, std::optional<SearchBudget> budget = std::nullopt,
                             int threads = 2);

}  // namespace qcache
