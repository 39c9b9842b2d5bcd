#include "qcache/exec_graph.hpp"

namespace qcache {

std::vector<int> ExecGraph::exec_edges_of_access(const AccessRef& ref) const {
  std::vector<int> out;
  for (const auto& e : edges)
    if (e.access && *e.access == ref) out.push_back(e.id);
  return out;
}

ExecGraph build_exec_graph(const ProgramGraph& g, const Classification& cls,
                           const LatencyModel& lat) {
  for (const AccessRef& ref : g.all_accesses())
    if (!cls.per_access.count(ref)) throw MissingClassification();

  ExecGraph eg;
  eg.num_nodes = g.num_nodes();
  eg.entry = g.entry;
  eg.exit = g.exit;
  eg.num_scopes = num_scopes(g);
  eg.scope_parent_of.resize(static_cast<std::size_t>(eg.num_scopes));
  for (int s = 0; s < eg.num_scopes; ++s)
    eg.scope_parent_of[static_cast<std::size_t>(s)] = scope_parent(g, s);
  eg.edges_in_scope.resize(static_cast<std::size_t>(eg.num_scopes));
  eg.scope_bound.assign(static_cast<std::size_t>(eg.num_scopes), 1);
  eg.scope_entry_prog_edges.resize(static_cast<std::size_t>(eg.num_scopes));
  eg.scope_back_prog_edges.resize(static_cast<std::size_t>(eg.num_scopes));
  for (int s = 1; s < eg.num_scopes; ++s) {
    const Loop& loop = g.loops[static_cast<std::size_t>(s - 1)];
    eg.scope_bound[static_cast<std::size_t>(s)] = loop.bound;
    eg.scope_entry_prog_edges[static_cast<std::size_t>(s)] = loop.entry_edges;
    eg.scope_back_prog_edges[static_cast<std::size_t>(s)] = loop.back_edges;
  }
  eg.first_segment.resize(g.edges.size());

  auto add_edge = [&eg](int src, int dst, EdgeKind kind, long cost,
                        std::optional<BlockId> block, std::optional<AccessRef> access,
                        int prog_edge) {
    int id = static_cast<int>(eg.edges.size());
    eg.edges.push_back(ExecEdge{id, src, dst, kind, cost, block, access, prog_edge});
    return id;
  };

  for (int pe = 0; pe < static_cast<int>(g.edges.size()); ++pe) {
    const ProgramEdge& edge = g.edges[static_cast<std::size_t>(pe)];
    std::vector<int> segment_ids;
    int segments = std::max<int>(1, static_cast<int>(edge.accesses.size()));
    int prev = edge.src;
    for (int j = 0; j < segments; ++j) {
      int next = (j + 1 == segments) ? edge.dst : eg.num_nodes++;
      std::vector<int> ids;
      if (edge.accesses.empty()) {
        ids.push_back(add_edge(prev, next, EdgeKind::Plain, 0, std::nullopt, std::nullopt, pe));
      } else {
        AccessRef ref{pe, j};
        BlockId b = edge.accesses[static_cast<std::size_t>(j)];
        switch (cls.of(ref)) {
          case AccessClass::AlwaysHit:
            ids.push_back(add_edge(prev, next, EdgeKind::Hit, lat.hit_latency, b, ref, pe));
            break;
          case AccessClass::AlwaysMiss:
            ids.push_back(add_edge(prev, next, EdgeKind::Miss, lat.miss_latency, b, ref, pe));
            break;
          case AccessClass::Unknown:
            ids.push_back(add_edge(prev, next, EdgeKind::Hit, lat.hit_latency, b, ref, pe));
            ids.push_back(add_edge(prev, next, EdgeKind::Miss, lat.miss_latency, b, ref, pe));
            break;
        }
      }
      if (j == 0) segment_ids = ids;
      prev = next;
    }
    eg.first_segment[static_cast<std::size_t>(pe)] = segment_ids;
  }

  for (const auto& e : eg.edges)
    for (int s = 0; s < eg.num_scopes; ++s)
      if (scope_contains_edge(g, s, e.prog_edge))
        eg.edges_in_scope[static_cast<std::size_t>(s)].push_back(e.id);

  return eg;
}

}  // namespace qcache
