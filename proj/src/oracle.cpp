#include "qcache/oracle.hpp"

#include <algorithm>
#include <sstream>

namespace qcache {

namespace {

struct PathSearch {
  const ProgramGraph& g;
  long budget;
  const std::function<void(const ConcretePath&)>& fn;
  std::vector<std::vector<int>> out_edges;
  std::vector<long> counters;  // remaining back-edge budget per loop
  ConcretePath current;
  long emitted = 0;

  PathSearch(const ProgramGraph& graph, long path_budget,
             const std::function<void(const ConcretePath&)>& callback)
      : g(graph), budget(path_budget), fn(callback) {
    out_edges.resize(static_cast<std::size_t>(g.num_nodes()));
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
      out_edges[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].src)].push_back(e);
    counters.assign(g.loops.size(), 0);
  }

  void run() { visit(g.entry); }

  void visit(int node) {
    if (node == g.exit) {
      if (++emitted > budget) throw PathBudgetExceeded(budget);
      fn(current);
      return;
    }
    for (int e : out_edges[static_cast<std::size_t>(node)]) {
      const ProgramEdge& edge = g.edges[static_cast<std::size_t>(e)];
      std::vector<long> saved;
      bool feasible = true;
      for (std::size_t li = 0; li < g.loops.size(); ++li) {
        const Loop& loop = g.loops[li];
        bool is_back = std::find(loop.back_edges.begin(), loop.back_edges.end(), e) != loop.back_edges.end();
        if (is_back && counters[li] <= 0) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      saved = counters;
      for (std::size_t li = 0; li < g.loops.size(); ++li) {
        const Loop& loop = g.loops[li];
        if (std::find(loop.back_edges.begin(), loop.back_edges.end(), e) != loop.back_edges.end())
          --counters[li];
        if (std::find(loop.entry_edges.begin(), loop.entry_edges.end(), e) != loop.entry_edges.end())
          counters[li] = loop.bound;
      }
      current.edges.push_back(e);
      std::size_t mark = current.accesses.size();
      current.accesses.insert(current.accesses.end(), edge.accesses.begin(), edge.accesses.end());
      visit(edge.dst);
      current.accesses.resize(mark);
      current.edges.pop_back();
      counters = saved;
    }
  }
};

}  // namespace

void for_each_path(const ProgramGraph& g, long path_budget,
                   const std::function<void(const ConcretePath&)>& fn) {
  PathSearch search(g, path_budget, fn);
  search.run();
}

std::vector<ConcretePath> enumerate_paths(const ProgramGraph& g, long path_budget) {
  std::vector<ConcretePath> paths;
  for_each_path(g, path_budget, [&paths](const ConcretePath& p) { paths.push_back(p); });
  return paths;
}

OracleReport worst_observed(const ProgramGraph& g, PolicyKind policy, int k,
                            const SetAssocConfig& cfg, const LatencyModel& lat,
                            long path_budget) {
  OracleReport report;
  std::vector<PolicyState> initial;
  for (int s = 0; s < cfg.nb_sets; ++s) initial.push_back(empty_state(policy, k));
  for_each_path(g, path_budget, [&](const ConcretePath& p) {
    SimResult r = simulate_set_assoc(cfg, initial, p.accesses);
    long long cost = r.hits * lat.hit_latency + r.misses * lat.miss_latency;
    if (report.path_count == 0 || cost > report.max_cost) {
      report.max_cost = cost;
      report.argmax_cost_path = p;
    }
    if (report.path_count == 0 || r.misses > report.max_misses) {
      report.max_misses = r.misses;
      report.argmax_miss_path = p;
    }
    ++report.path_count;
  });
  return report;
}

std::string oracle_report_csv(const OracleReport& r) {
  std::ostringstream os;
  os << "paths,max_cost,max_misses\n";
  os << r.path_count << "," << r.max_cost << "," << r.max_misses << "\n";
  return os.str();
}

std::string format_path(const ProgramGraph& g, const ConcretePath& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const ProgramEdge& e = g.edges[static_cast<std::size_t>(p.edges[i])];
    os << (i ? " " : "") << g.node_names[static_cast<std::size_t>(e.src)] << "->"
       << g.node_names[static_cast<std::size_t>(e.dst)];
  }
  return os.str();
}

}  // namespace qcache
