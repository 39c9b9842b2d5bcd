#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcache/exec_graph.hpp"
#include "qcache/program.hpp"

using namespace qcache;

namespace {

const char* kStraight =
    "entry n0\n"
    "exit n2\n"
    "node n1\n"
    "edge n0 n1 access 0,1\n"
    "edge n1 n2\n";

const char* kLoop =
    "entry n0\n"
    "exit n3\n"
    "node head\n"
    "node body\n"
    "edge n0 head\n"
    "edge head body access 1\n"
    "edge body head access 2\n"
    "edge head n3\n"
    "loop l0 header head bound 10 parent none back body->head entryedges n0->head\n";

const char* kNested =
    "entry n0\n"
    "exit n5\n"
    "node oh\n"
    "node ih\n"
    "node ib\n"
    "node ot\n"
    "edge n0 oh access 3\n"
    "edge oh ih\n"
    "edge ih ib access 1,8,9\n"
    "edge ib ih\n"
    "edge ih ot access 4\n"
    "edge ot oh\n"
    "edge oh n5\n"
    "loop outer header oh bound 4 parent none back ot->oh entryedges n0->oh\n"
    "loop inner header ih bound 3 parent outer back ib->ih entryedges oh->ih\n";

Classification classify_all(const ProgramGraph& g, AccessClass c) {
  Classification cls;
  for (const AccessRef& ref : g.all_accesses()) cls.per_access[ref] = c;
  return cls;
}

}  // namespace

TEST_CASE("straight-line program parses") {
  ProgramGraph g = parse_program(kStraight);
  CHECK(g.num_nodes() == 3);
  CHECK(g.edges.size() == 2);
  CHECK(g.edges[0].accesses == std::vector<BlockId>{0, 1});
  CHECK(g.all_accesses().size() == 2);
  CHECK(g.loops.empty());
}

TEST_CASE("single loop parses with derived body") {
  ProgramGraph g = parse_program(kLoop);
  REQUIRE(g.loops.size() == 1);
  const Loop& l = g.loops[0];
  CHECK(l.bound == 10);
  CHECK(l.back_edges.size() == 1);
  CHECK(l.entry_edges.size() == 1);
  CHECK(l.body_nodes.size() == 2);  // head, body
  CHECK(l.body_edges.size() == 2);  // head->body, body->head
  CHECK(num_scopes(g) == 2);
  CHECK(scope_parent(g, 1) == 0);
}

TEST_CASE("nested loops and scope containment") {
  ProgramGraph g = parse_program(kNested);
  REQUIRE(g.loops.size() == 2);
  const Loop& outer = g.loops[0];
  const Loop& inner = g.loops[1];
  CHECK(inner.parent == 0);
  for (int e : inner.body_edges) CHECK(outer.body_edges.count(e));
  CHECK(scope_parent(g, 2) == 1);
  // Scope edge sets nest: every inner edge is in the outer scope and in
  // the whole-program scope.
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (scope_contains_edge(g, 2, e)) CHECK(scope_contains_edge(g, 1, e));
    CHECK(scope_contains_edge(g, 0, e));
  }
}

TEST_CASE("round trip through the canonical form") {
  for (const char* text : {kStraight, kLoop, kNested}) {
    ProgramGraph g = parse_program(text);
    std::string canon = serialize_program(g);
    ProgramGraph h = parse_program(canon);
    CHECK(g == h);
    CHECK(serialize_program(h) == canon);
  }
}

TEST_CASE("validation failures") {
  // unreachable node
  CHECK_THROWS_AS(parse_program("entry a\nexit b\nnode c\nedge a b\n"), ValidationError);
  // exit not reachable from a node
  CHECK_THROWS_AS(parse_program("entry a\nexit b\nnode c\nedge a b\nedge a c\n"), ValidationError);
  // nonpositive bound
  CHECK_THROWS_AS(
      parse_program("entry a\nexit c\nnode b\nedge a b\nedge b b\nedge b c\n"
                    "loop l header b bound 0 parent none back b->b entryedges a->b\n"),
      ValidationError);
  // cycle with no declared loop
  CHECK_THROWS_AS(parse_program("entry a\nexit d\nnode b\nnode c\nedge a b\nedge b c\nedge c b\nedge b d\n"),
                  ValidationError);
  // back edge not targeting the header
  CHECK_THROWS_AS(
      parse_program("entry a\nexit d\nnode b\nnode c\nedge a b\nedge b c\nedge c b\nedge b d\n"
                    "loop l header c bound 2 parent none back c->b entryedges b->c\n"),
      ValidationError);
  // undeclared entry edge into a loop header
  CHECK_THROWS_AS(
      parse_program("entry a\nexit d\nnode b\nnode e\nedge a b\nedge a e\nedge e b\nedge b b\nedge b d\n"
                    "loop l header b bound 2 parent none back b->b entryedges a->b\n"),
      ValidationError);
  // entry node with incoming edge
  CHECK_THROWS_AS(parse_program("entry a\nexit b\nedge a b\nedge a a\n"), ValidationError);
  // parse errors carry line numbers
  try {
    parse_program("entry a\nexit b\nedge a q\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("exec graph construction") {
  LatencyModel lat(1, 11);

  SUBCASE("always-hit accesses make single hit edges") {
    ProgramGraph g = parse_program(kStraight);
    ExecGraph eg = build_exec_graph(g, classify_all(g, AccessClass::AlwaysHit), lat);
    long cost = 0;
    int hit_edges = 0;
    for (const auto& e : eg.edges) {
      cost += e.cost;
      if (e.kind == EdgeKind::Hit) ++hit_edges;
    }
    CHECK(hit_edges == 2);
    CHECK(cost == 2);  // plus the plain edge at zero
  }

  SUBCASE("one unknown access yields one hit/miss pair") {
    ProgramGraph g = parse_program("entry a\nexit b\nedge a b access 7\n");
    ExecGraph eg = build_exec_graph(g, classify_all(g, AccessClass::Unknown), lat);
    REQUIRE(eg.edges.size() == 2);
    CHECK(eg.edges[0].src == eg.edges[1].src);
    CHECK(eg.edges[0].dst == eg.edges[1].dst);
    CHECK(eg.edges[0].kind == EdgeKind::Hit);
    CHECK(eg.edges[1].kind == EdgeKind::Miss);
    CHECK(eg.edges[0].cost <= eg.edges[1].cost);
    CHECK(eg.first_segment[0].size() == 2);
  }

  SUBCASE("two unknown accesses in a loop body make four labeled edges in scope") {
    ProgramGraph g = parse_program(
        "entry n0\nexit n3\nnode head\nnode body\n"
        "edge n0 head\nedge head body access 1,2\nedge body head\nedge head n3\n"
        "loop l header head bound 5 parent none back body->head entryedges n0->head\n");
    ExecGraph eg = build_exec_graph(g, classify_all(g, AccessClass::Unknown), lat);
    int labeled_in_loop = 0;
    for (int e : eg.edges_in_scope[1])
      if (eg.edges[static_cast<std::size_t>(e)].kind != EdgeKind::Plain) ++labeled_in_loop;
    CHECK(labeled_in_loop == 4);
  }

  SUBCASE("multi-access edges expand into chains") {
    ProgramGraph g = parse_program(kStraight);
    ExecGraph eg = build_exec_graph(g, classify_all(g, AccessClass::Unknown), lat);
    // Edge n0->n1 with two accesses becomes two segments; n1->n2 stays plain.
    CHECK(eg.num_nodes == 4);
    CHECK(eg.edges.size() == 5);  // 2 pairs + 1 plain
    CHECK(eg.first_segment[0].size() == 2);
    CHECK(eg.first_segment[1].size() == 1);
  }

  SUBCASE("classification must cover every access") {
    ProgramGraph g = parse_program(kStraight);
    Classification partial;
    partial.per_access[AccessRef{0, 0}] = AccessClass::Unknown;
    CHECK_THROWS_AS(build_exec_graph(g, partial, lat), MissingClassification);
  }
}

TEST_CASE("latency model validation") {
  CHECK_THROWS(LatencyModel(5, 3));
  CHECK_THROWS(LatencyModel(-1, 3));
  LatencyModel def;
  CHECK(def.hit_latency == 1);
  CHECK(def.miss_latency == 11);
}
