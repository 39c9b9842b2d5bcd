#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qcache/types.hpp"

namespace qcache {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& reason)
      : std::runtime_error("parse error, line " + std::to_string(line) + ": " + reason), line(line) {}
  int line;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& reason)
      : std::runtime_error("invalid program: " + reason) {}
};

struct ProgramEdge {
  int src = 0;
  int dst = 0;
  std::vector<BlockId> accesses;  // ordered; may be empty
  bool operator==(const ProgramEdge&) const = default;
};

struct Loop {
  std::string name;
  int header = 0;
  long bound = 1;                  // back-edge executions per entry
  int parent = -1;                 // loop index, -1 for top level
  std::vector<int> back_edges;     // edge indices, target == header
  std::vector<int> entry_edges;    // edge indices from outside into header
  // Derived during validation:
  std::set<int> body_nodes;
  std::set<int> body_edges;
  bool operator==(const Loop& o) const {
    return name == o.name && header == o.header && bound == o.bound && parent == o.parent &&
           back_edges == o.back_edges && entry_edges == o.entry_edges;
  }
};

// Identifies one access: the j-th access on edge e.
struct AccessRef {
  int edge = 0;
  int index = 0;
  auto operator<=>(const AccessRef&) const = default;
};

struct ProgramGraph {
  std::vector<std::string> node_names;
  std::map<std::string, int> node_index;
  int entry = -1;
  int exit = -1;
  std::vector<ProgramEdge> edges;
  std::vector<Loop> loops;

  int num_nodes() const { return static_cast<int>(node_names.size()); }
  std::vector<AccessRef> all_accesses() const;
  std::set<BlockId> all_blocks() const;

  // Structural equality up to node numbering (canonical-form comparison).
  bool operator==(const ProgramGraph& o) const;
};

// Line-based format:
//   node <id> / entry <id> / exit <id>
//   edge <src> <dst> [access <blockId>[,<blockId>...]]
//   loop <id> header <node> bound <n> parent <loopId|none>
//        back <src>-><dst>[,...] entryedges <src>-><dst>[,...]
//   '#' comments
ProgramGraph parse_program(const std::string& text);
std::string serialize_program(const ProgramGraph& g);

// Structural checks (also run by parse_program): reachability, loop shape,
// declared back edges covering every cycle, nesting forming a forest.
void validate_program(ProgramGraph& g);

// Scope numbering shared across analyses: scope 0 is the whole program,
// scope i+1 is loop i. Returns -1 parent for scope 0, 0 for top-level loops.
int num_scopes(const ProgramGraph& g);
int scope_parent(const ProgramGraph& g, int scope);
bool scope_contains_edge(const ProgramGraph& g, int scope, int edge);
std::string scope_name(const ProgramGraph& g, int scope);

}  // namespace qcache
