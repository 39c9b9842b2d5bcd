#include "qcache/program.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace qcache {

std::vector<AccessRef> ProgramGraph::all_accesses() const {
  std::vector<AccessRef> out;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    for (int j = 0; j < static_cast<int>(edges[static_cast<std::size_t>(e)].accesses.size()); ++j)
      out.push_back(AccessRef{e, j});
  return out;
}

std::set<BlockId> ProgramGraph::all_blocks() const {
  std::set<BlockId> out;
  for (const auto& e : edges)
    for (BlockId b : e.accesses) out.insert(b);
  return out;
}

bool ProgramGraph::operator==(const ProgramGraph& o) const {
  return serialize_program(*this) == serialize_program(o);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

struct EdgeRefList {
  std::vector<std::pair<std::string, std::string>> pairs;
};

EdgeRefList parse_edge_refs(const std::string& text, int lineno) {
  EdgeRefList out;
  for (const std::string& part : split(text, ',')) {
    auto arrow = part.find("->");
    if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= part.size())
      throw ParseError(lineno, "expected <src>-><dst>, got '" + part + "'");
    out.pairs.emplace_back(part.substr(0, arrow), part.substr(arrow + 2));
  }
  return out;
}

}  // namespace

ProgramGraph parse_program(const std::string& text) {
  ProgramGraph g;
  auto intern_node = [&g](const std::string& name) {
    auto it = g.node_index.find(name);
    if (it != g.node_index.end()) return it->second;
    int id = static_cast<int>(g.node_names.size());
    g.node_names.push_back(name);
    g.node_index.emplace(name, id);
    return id;
  };
  auto lookup_node = [&g](const std::string& name, int lineno) {
    auto it = g.node_index.find(name);
    if (it == g.node_index.end()) throw ParseError(lineno, "unknown node '" + name + "'");
    return it->second;
  };

  struct PendingLoop {
    Loop loop;
    std::string parent_name;
    EdgeRefList back, entry;
    int lineno;
  };
  std::vector<PendingLoop> pending;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string directive;
    if (!(ls >> directive)) continue;
    if (directive == "node") {
      std::string name;
      if (!(ls >> name)) throw ParseError(lineno, "node needs an id");
      intern_node(name);
    } else if (directive == "entry" || directive == "exit") {
      std::string name;
      if (!(ls >> name)) throw ParseError(lineno, directive + " needs an id");
      int id = intern_node(name);
      if (directive == "entry") {
        if (g.entry >= 0) throw ParseError(lineno, "duplicate entry");
        g.entry = id;
      } else {
        if (g.exit >= 0) throw ParseError(lineno, "duplicate exit");
        g.exit = id;
      }
    } else if (directive == "edge") {
      std::string src, dst;
      if (!(ls >> src >> dst)) throw ParseError(lineno, "edge needs <src> <dst>");
      ProgramEdge e;
      e.src = lookup_node(src, lineno);
      e.dst = lookup_node(dst, lineno);
      std::string kw;
      if (ls >> kw) {
        if (kw != "access") throw ParseError(lineno, "expected 'access', got '" + kw + "'");
        std::string blocks;
        if (!(ls >> blocks)) throw ParseError(lineno, "access needs block ids");
        for (const std::string& tok : split(blocks, ',')) {
          try {
            e.accesses.push_back(static_cast<BlockId>(std::stoul(tok)));
          } catch (const std::exception&) {
            throw ParseError(lineno, "bad block id '" + tok + "'");
          }
        }
      }
      g.edges.push_back(std::move(e));
    } else if (directive == "loop") {
      PendingLoop pl;
      pl.lineno = lineno;
      if (!(ls >> pl.loop.name)) throw ParseError(lineno, "loop needs an id");
      std::string kw;
      bool have_header = false, have_bound = false, have_parent = false, have_back = false,
           have_entry = false;
      while (ls >> kw) {
        std::string value;
        if (!(ls >> value)) throw ParseError(lineno, "loop " + kw + " needs a value");
        if (kw == "header") {
          pl.loop.header = lookup_node(value, lineno);
          have_header = true;
        } else if (kw == "bound") {
          try {
            pl.loop.bound = std::stol(value);
          } catch (const std::exception&) {
            throw ParseError(lineno, "bad bound '" + value + "'");
          }
          have_bound = true;
        } else if (kw == "parent") {
          pl.parent_name = value;
          have_parent = true;
        } else if (kw == "back") {
          pl.back = parse_edge_refs(value, lineno);
          have_back = true;
        } else if (kw == "entryedges") {
          pl.entry = parse_edge_refs(value, lineno);
          have_entry = true;
        } else {
          throw ParseError(lineno, "unknown loop field '" + kw + "'");
        }
      }
      if (!have_header || !have_bound || !have_parent || !have_back || !have_entry)
        throw ParseError(lineno, "loop needs header, bound, parent, back and entryedges");
      pending.push_back(std::move(pl));
    } else {
      throw ParseError(lineno, "unknown directive '" + directive + "'");
    }
  }
  if (g.entry < 0) throw ParseError(lineno, "missing entry directive");
  if (g.exit < 0) throw ParseError(lineno, "missing exit directive");

  std::map<std::string, int> loop_index;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (!loop_index.emplace(pending[i].loop.name, static_cast<int>(i)).second)
      throw ParseError(pending[i].lineno, "duplicate loop '" + pending[i].loop.name + "'");
  }
  auto match_edges = [&g](const EdgeRefList& refs, int lineno) {
    std::vector<int> out;
    for (const auto& [src, dst] : refs.pairs) {
      auto si = g.node_index.find(src);
      auto di = g.node_index.find(dst);
      bool found = false;
      if (si != g.node_index.end() && di != g.node_index.end()) {
        for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
          if (g.edges[static_cast<std::size_t>(e)].src == si->second &&
              g.edges[static_cast<std::size_t>(e)].dst == di->second) {
            out.push_back(e);
            found = true;
          }
        }
      }
      if (!found) throw ParseError(lineno, "no edge " + src + "->" + dst);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  for (auto& pl : pending) {
    if (pl.parent_name == "none") {
      pl.loop.parent = -1;
    } else {
      auto it = loop_index.find(pl.parent_name);
      if (it == loop_index.end())
        throw ParseError(pl.lineno, "unknown parent loop '" + pl.parent_name + "'");
      pl.loop.parent = it->second;
    }
    pl.loop.back_edges = match_edges(pl.back, pl.lineno);
    pl.loop.entry_edges = match_edges(pl.entry, pl.lineno);
    g.loops.push_back(std::move(pl.loop));
  }

  validate_program(g);
  return g;
}

void validate_program(ProgramGraph& g) {
  int n = g.num_nodes();
  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> in_edges(static_cast<std::size_t>(n));
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    out_edges[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].src)].push_back(e);
    in_edges[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].dst)].push_back(e);
  }
  if (!in_edges[static_cast<std::size_t>(g.entry)].empty())
    throw ValidationError("entry node has incoming edges");

  // Reachability both ways.
  auto bfs = [n](int start, const std::vector<std::vector<int>>& adj,
                 const std::vector<ProgramEdge>& edges, bool forward) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> work{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (int e : adj[static_cast<std::size_t>(v)]) {
        int w = forward ? edges[static_cast<std::size_t>(e)].dst : edges[static_cast<std::size_t>(e)].src;
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          work.push_back(w);
        }
      }
    }
    return seen;
  };
  std::vector<bool> from_entry = bfs(g.entry, out_edges, g.edges, true);
  std::vector<bool> to_exit = bfs(g.exit, in_edges, g.edges, false);
  for (int v = 0; v < n; ++v) {
    if (!from_entry[static_cast<std::size_t>(v)])
      throw ValidationError("node '" + g.node_names[static_cast<std::size_t>(v)] + "' unreachable from entry");
    if (!to_exit[static_cast<std::size_t>(v)])
      throw ValidationError("exit unreachable from node '" + g.node_names[static_cast<std::size_t>(v)] + "'");
  }

  std::set<int> all_back_edges;
  std::set<int> headers;
  for (auto& loop : g.loops) {
    if (loop.bound < 1) throw ValidationError("loop '" + loop.name + "' bound must be positive");
    if (!headers.insert(loop.header).second)
      throw ValidationError("two loops share header '" + g.node_names[static_cast<std::size_t>(loop.header)] + "'");
    if (loop.back_edges.empty()) throw ValidationError("loop '" + loop.name + "' has no back edges");
    if (loop.entry_edges.empty()) throw ValidationError("loop '" + loop.name + "' has no entry edges");
    for (int e : loop.back_edges) {
      if (g.edges[static_cast<std::size_t>(e)].dst != loop.header)
        throw ValidationError("back edge of loop '" + loop.name + "' does not target its header");
      all_back_edges.insert(e);
    }

    // Natural-loop body: header plus nodes reaching a back-edge source
    // without passing through the header.
    loop.body_nodes.clear();
    loop.body_nodes.insert(loop.header);
    std::deque<int> work;
    for (int e : loop.back_edges) {
      int src = g.edges[static_cast<std::size_t>(e)].src;
      if (loop.body_nodes.insert(src).second) work.push_back(src);
    }
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      if (v == loop.header) continue;
      for (int e : in_edges[static_cast<std::size_t>(v)]) {
        int u = g.edges[static_cast<std::size_t>(e)].src;
        if (loop.body_nodes.insert(u).second) work.push_back(u);
      }
    }
    loop.body_edges.clear();
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      const auto& edge = g.edges[static_cast<std::size_t>(e)];
      if (loop.body_nodes.count(edge.src) && loop.body_nodes.count(edge.dst) &&
          edge.dst != loop.header)
        loop.body_edges.insert(e);
    }
    for (int e : loop.back_edges) loop.body_edges.insert(e);

    for (int e : loop.entry_edges) {
      const auto& edge = g.edges[static_cast<std::size_t>(e)];
      if (edge.dst != loop.header)
        throw ValidationError("entry edge of loop '" + loop.name + "' does not target its header");
      if (loop.body_nodes.count(edge.src))
        throw ValidationError("entry edge of loop '" + loop.name + "' starts inside the loop");
    }
    // Every edge entering the body from outside must be a declared entry edge.
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      const auto& edge = g.edges[static_cast<std::size_t>(e)];
      if (!loop.body_nodes.count(edge.src) && loop.body_nodes.count(edge.dst)) {
        if (edge.dst != loop.header)
          throw ValidationError("loop '" + loop.name + "' entered other than through its header");
        if (std::find(loop.entry_edges.begin(), loop.entry_edges.end(), e) == loop.entry_edges.end())
          throw ValidationError("loop '" + loop.name + "' has an undeclared entry edge");
      }
    }
  }

  // Nesting must form a forest consistent with body containment.
  for (std::size_t i = 0; i < g.loops.size(); ++i) {
    const Loop& l = g.loops[i];
    int p = l.parent;
    std::set<int> seen_parents;
    while (p >= 0) {
      if (!seen_parents.insert(p).second) throw ValidationError("loop nesting has a cycle");
      p = g.loops[static_cast<std::size_t>(p)].parent;
    }
    if (l.parent >= 0) {
      const Loop& par = g.loops[static_cast<std::size_t>(l.parent)];
      if (!std::includes(par.body_nodes.begin(), par.body_nodes.end(), l.body_nodes.begin(),
                         l.body_nodes.end()))
        throw ValidationError("loop '" + l.name + "' is not nested inside its declared parent");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Loop& o = g.loops[j];
      std::vector<int> inter;
      std::set_intersection(l.body_nodes.begin(), l.body_nodes.end(), o.body_nodes.begin(),
                            o.body_nodes.end(), std::back_inserter(inter));
      if (inter.empty()) continue;
      bool l_in_o = std::includes(o.body_nodes.begin(), o.body_nodes.end(), l.body_nodes.begin(),
                                  l.body_nodes.end());
      bool o_in_l = std::includes(l.body_nodes.begin(), l.body_nodes.end(), o.body_nodes.begin(),
                                  o.body_nodes.end());
      if (!l_in_o && !o_in_l)
        throw ValidationError("loops '" + l.name + "' and '" + o.name + "' overlap without nesting");
    }
  }

  // With back edges removed the graph must be acyclic, otherwise some cycle
  // escapes every loop bound.
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (!all_back_edges.count(e)) ++indeg[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].dst)];
  std::deque<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  int processed = 0;
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop_front();
    ++processed;
    for (int e : out_edges[static_cast<std::size_t>(v)]) {
      if (all_back_edges.count(e)) continue;
      if (--indeg[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].dst)] == 0)
        ready.push_back(g.edges[static_cast<std::size_t>(e)].dst);
    }
  }
  if (processed != n) throw ValidationError("cycle not covered by any declared loop");
}

std::string serialize_program(const ProgramGraph& g) {
  std::ostringstream os;
  os << "entry " << g.node_names[static_cast<std::size_t>(g.entry)] << "\n";
  os << "exit " << g.node_names[static_cast<std::size_t>(g.exit)] << "\n";
  std::vector<std::string> names = g.node_names;
  std::sort(names.begin(), names.end());
  for (const auto& name : names) os << "node " << name << "\n";
  for (const auto& e : g.edges) {
    os << "edge " << g.node_names[static_cast<std::size_t>(e.src)] << " "
       << g.node_names[static_cast<std::size_t>(e.dst)];
    if (!e.accesses.empty()) {
      os << " access ";
      for (std::size_t i = 0; i < e.accesses.size(); ++i) os << (i ? "," : "") << e.accesses[i];
    }
    os << "\n";
  }
  auto edge_refs = [&g](const std::vector<int>& edges) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int e : edges)
      pairs.emplace_back(g.node_names[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].src)],
                         g.node_names[static_cast<std::size_t>(g.edges[static_cast<std::size_t>(e)].dst)]);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::ostringstream ss;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      ss << (i ? "," : "") << pairs[i].first << "->" << pairs[i].second;
    return ss.str();
  };
  for (const auto& loop : g.loops) {
    os << "loop " << loop.name << " header " << g.node_names[static_cast<std::size_t>(loop.header)]
       << " bound " << loop.bound << " parent "
       << (loop.parent < 0 ? std::string("none") : g.loops[static_cast<std::size_t>(loop.parent)].name)
       << " back " << edge_refs(loop.back_edges) << " entryedges " << edge_refs(loop.entry_edges)
       << "\n";
  }
  return os.str();
}

int num_scopes(const ProgramGraph& g) { return static_cast<int>(g.loops.size()) + 1; }

int scope_parent(const ProgramGraph& g, int scope) {
  if (scope == 0) return -1;
  int parent_loop = g.loops[static_cast<std::size_t>(scope - 1)].parent;
  return parent_loop < 0 ? 0 : parent_loop + 1;
}

bool scope_contains_edge(const ProgramGraph& g, int scope, int edge) {
  if (scope == 0) return true;
  return g.loops[static_cast<std::size_t>(scope - 1)].body_edges.count(edge) > 0;
}

std::string scope_name(const ProgramGraph& g, int scope) {
  return scope == 0 ? std::string("<program>") : g.loops[static_cast<std::size_t>(scope - 1)].name;
}

}  // namespace qcache
