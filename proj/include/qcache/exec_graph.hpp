#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcache/program.hpp"
#include "qcache/types.hpp"

namespace qcache {

enum class AccessClass { AlwaysHit, AlwaysMiss, Unknown };

struct Classification {
  std::map<AccessRef, AccessClass> per_access;

  AccessClass of(const AccessRef& ref) const {
    auto it = per_access.find(ref);
    if (it == per_access.end()) throw std::out_of_range("access not classified");
    return it->second;
  }
};

class MissingClassification : public std::runtime_error {
 public:
  MissingClassification() : std::runtime_error("classification does not cover every access") {}
};

struct LatencyModel {
  long hit_latency = 1;
  long miss_latency = 11;

  LatencyModel() = default;
  LatencyModel(long hit, long miss) : hit_latency(hit), miss_latency(miss) {
    if (hit < 0 || hit > miss)
      throw std::invalid_argument("LatencyModel requires 0 <= hit <= miss");
  }
};

enum class EdgeKind { Plain, Hit, Miss };

struct ExecEdge {
  int id = 0;
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::Plain;
  long cost = 0;
  std::optional<BlockId> block;
  std::optional<AccessRef> access;
  int prog_edge = -1;
};

// Outcome-split execution graph: classified accesses get a single HIT or
// MISS edge, unknown ones a parallel HIT/MISS pair between the same nodes,
// so the longest path dominates every concrete outcome assignment.
struct ExecGraph {
  int num_nodes = 0;
  int entry = -1;
  int exit = -1;
  std::vector<ExecEdge> edges;

  // Scope s contains exec edge e iff the originating program edge lies in
  // scope s (scope 0 = whole program, scope i+1 = loop i).
  int num_scopes = 1;
  std::vector<int> scope_parent_of;            // per scope
  std::vector<std::vector<int>> edges_in_scope;
  std::vector<long> scope_bound;               // loop bound; 1 for scope 0
  std::vector<std::vector<int>> scope_entry_prog_edges;  // empty for scope 0 (entered once)
  std::vector<std::vector<int>> scope_back_prog_edges;

  // Flow of a program edge = sum of x over the first chain segment.
  std::vector<std::vector<int>> first_segment;  // per program edge

  std::vector<int> exec_edges_of_access(const AccessRef& ref) const;
};

ExecGraph build_exec_graph(const ProgramGraph& g, const Classification& cls,
                           const LatencyModel& lat);

}  // namespace qcache
