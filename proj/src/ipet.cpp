#include "qcache/ipet.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qcache {

int IpetModel::add_var(const std::string& name, long long ub) {
  auto it = var_index.find(name);
  if (it != var_index.end()) return it->second;
  int id = static_cast<int>(vars.size());
  vars.push_back(IpetVar{name, 0, ub});
  var_index.emplace(name, id);
  return id;
}

int IpetModel::var(const std::string& name) const {
  auto it = var_index.find(name);
  if (it == var_index.end()) throw std::out_of_range("no variable " + name);
  return it->second;
}

bool IpetModel::operator==(const IpetModel& o) const {
  if (vars.size() != o.vars.size() || constraints.size() != o.constraints.size()) return false;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name != o.vars[i].name || vars[i].lb != o.vars[i].lb || vars[i].ub != o.vars[i].ub)
      return false;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& a = constraints[i];
    const auto& b = o.constraints[i];
    if (a.name != b.name || a.terms != b.terms || a.rel != b.rel || a.rhs != b.rhs) return false;
  }
  return objective == o.objective;
}

std::string xe_name(int edge_id) { return "xe_" + std::to_string(edge_id); }

namespace {

constexpr long long kMaxTripBound = 1000000000LL;

std::vector<long long> edge_trip_bounds(const ExecGraph& eg) {
  // x_e is bounded by the product over enclosing loops of (bound + 1):
  // each entry permits bound back edges, hence bound + 1 header visits.
  std::vector<long long> ub(eg.edges.size(), 1);
  std::vector<std::vector<char>> in_scope(eg.edges.size(),
                                          std::vector<char>(static_cast<std::size_t>(eg.num_scopes), 0));
  for (int s = 0; s < eg.num_scopes; ++s)
    for (int e : eg.edges_in_scope[static_cast<std::size_t>(s)])
      in_scope[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)] = 1;
  for (std::size_t e = 0; e < eg.edges.size(); ++e) {
    long long prod = 1;
    for (int s = 1; s < eg.num_scopes; ++s) {
      if (!in_scope[e][static_cast<std::size_t>(s)]) continue;
      long long factor = eg.scope_bound[static_cast<std::size_t>(s)] + 1;
      if (prod > kMaxTripBound / factor)
        throw UnboundedModel("edge trip-count bound exceeds " + std::to_string(kMaxTripBound));
      prod *= factor;
    }
    ub[e] = prod;
  }
  return ub;
}

void add_terms(std::vector<std::pair<int, long long>>& terms, int var, long long coeff) {
  for (auto& [v, c] : terms) {
    if (v == var) {
      c += coeff;
      return;
    }
  }
  if (coeff != 0) terms.emplace_back(var, coeff);
}

void drop_zero_terms(IpetConstraint& c) {
  c.terms.erase(std::remove_if(c.terms.begin(), c.terms.end(),
                               [](const auto& t) { return t.second == 0; }),
                c.terms.end());
}

// Flow expression of a program edge: sum of x over its first chain segment.
void add_prog_edge_flow(const ExecGraph& eg, std::vector<std::pair<int, long long>>& terms,
                        const IpetModel& model, int prog_edge, long long coeff) {
  for (int id : eg.first_segment[static_cast<std::size_t>(prog_edge)])
    add_terms(terms, model.var_index.at(xe_name(id)), coeff);
}

long long block_access_ub(const ExecGraph& eg, const std::vector<long long>& trip,
                          BlockId b) {
  long long total = 0;
  for (const auto& e : eg.edges) {
    if (e.block && *e.block == b && e.kind != EdgeKind::Miss)
      total += trip[static_cast<std::size_t>(e.id)];
    // Unknown accesses appear as a hit/miss pair; counting the hit half
    // only already bounds the access count. Classified-miss accesses have
    // no hit edge, so count those misses too.
    if (e.block && *e.block == b && e.kind == EdgeKind::Miss && e.access) {
      bool has_hit_twin = false;
      for (const auto& o : eg.edges)
        if (o.access && e.access && *o.access == *e.access && o.kind == EdgeKind::Hit)
          has_hit_twin = true;
      if (!has_hit_twin) total += trip[static_cast<std::size_t>(e.id)];
    }
  }
  return total;
}

std::set<BlockId> graph_blocks(const ExecGraph& eg) {
  std::set<BlockId> blocks;
  for (const auto& e : eg.edges)
    if (e.block) blocks.insert(*e.block);
  return blocks;
}

long long checked_ll(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p()) throw std::overflow_error(std::string("coefficient overflow in ") + what);
  return z.get_si();
}

}  // namespace

IpetModel build_base_model(const ExecGraph& eg) {
  IpetModel model;
  std::vector<long long> trip = edge_trip_bounds(eg);
  for (const auto& e : eg.edges) model.add_var(xe_name(e.id), trip[static_cast<std::size_t>(e.id)]);

  // Exactly one edge leaves the initial node.
  IpetConstraint source;
  source.name = "source";
  for (const auto& e : eg.edges)
    if (e.src == eg.entry) add_terms(source.terms, model.var(xe_name(e.id)), 1);
  source.rel = Rel::Eq;
  source.rhs = 1;
  model.constraints.push_back(std::move(source));

  // Flow conservation everywhere else.
  std::vector<std::vector<int>> in_of(static_cast<std::size_t>(eg.num_nodes));
  std::vector<std::vector<int>> out_of(static_cast<std::size_t>(eg.num_nodes));
  for (const auto& e : eg.edges) {
    in_of[static_cast<std::size_t>(e.dst)].push_back(e.id);
    out_of[static_cast<std::size_t>(e.src)].push_back(e.id);
  }
  for (int v = 0; v < eg.num_nodes; ++v) {
    if (v == eg.entry || v == eg.exit) continue;
    IpetConstraint flow;
    flow.name = "flow_" + std::to_string(v);
    for (int e : in_of[static_cast<std::size_t>(v)]) add_terms(flow.terms, model.var(xe_name(e)), 1);
    for (int e : out_of[static_cast<std::size_t>(v)]) add_terms(flow.terms, model.var(xe_name(e)), -1);
    flow.rel = Rel::Eq;
    flow.rhs = 0;
    drop_zero_terms(flow);
    model.constraints.push_back(std::move(flow));
  }

  // Loop bounds: back-edge flow <= bound * entry-edge flow.
  for (int s = 1; s < eg.num_scopes; ++s) {
    IpetConstraint lb;
    lb.name = "loopbound_" + std::to_string(s);
    for (int pe : eg.scope_back_prog_edges[static_cast<std::size_t>(s)])
      add_prog_edge_flow(eg, lb.terms, model, pe, 1);
    for (int pe : eg.scope_entry_prog_edges[static_cast<std::size_t>(s)])
      add_prog_edge_flow(eg, lb.terms, model, pe, -eg.scope_bound[static_cast<std::size_t>(s)]);
    lb.rel = Rel::Le;
    lb.rhs = 0;
    model.constraints.push_back(std::move(lb));
  }

  for (const auto& e : eg.edges)
    if (e.cost != 0) model.objective[model.var(xe_name(e.id))] = e.cost;
  return model;
}

void set_miss_objective(IpetModel& model, const ExecGraph& eg) {
  model.objective.clear();
  for (const auto& e : eg.edges)
    if (e.kind == EdgeKind::Miss) model.objective[model.var(xe_name(e.id))] = 1;
}

void add_block_count_vars(IpetModel& model, const ExecGraph& eg) {
  std::vector<long long> trip = edge_trip_bounds(eg);
  for (BlockId b : graph_blocks(eg)) {
    std::string ab = "ab_" + std::to_string(b);
    if (model.has_var(ab)) continue;
    long long ub = block_access_ub(eg, trip, b);
    int ab_v = model.add_var(ab, ub);
    int mb_v = model.add_var("mb_" + std::to_string(b), ub);
    int hb_v = model.add_var("hb_" + std::to_string(b), ub);
    IpetConstraint ca, cm, ch;
    ca.name = "def_ab_" + std::to_string(b);
    cm.name = "def_mb_" + std::to_string(b);
    ch.name = "def_hb_" + std::to_string(b);
    ca.terms.emplace_back(ab_v, -1);
    cm.terms.emplace_back(mb_v, -1);
    ch.terms.emplace_back(hb_v, -1);
    for (const auto& e : eg.edges) {
      if (!e.block || *e.block != b) continue;
      int xv = model.var(xe_name(e.id));
      add_terms(ca.terms, xv, 1);
      if (e.kind == EdgeKind::Miss) add_terms(cm.terms, xv, 1);
      if (e.kind == EdgeKind::Hit) add_terms(ch.terms, xv, 1);
    }
    for (auto* c : {&ca, &cm, &ch}) {
      c->rel = Rel::Eq;
      c->rhs = 0;
      model.constraints.push_back(*c);
    }
  }
}

namespace {

// Right-hand side of the hypothetical-LRU bound: entry flows of the
// essential scopes plus every access edge of b outside the union of their
// persistent sets. Constant part (the whole-program scope's single entry)
// is returned separately.
struct PersistenceRhs {
  std::vector<std::pair<int, long long>> terms;
  long long constant = 0;
};

PersistenceRhs persistence_rhs(const IpetModel& model, const PersistenceResult& pr,
                               const ExecGraph& eg, BlockId b, int assoc) {
  PersistenceRhs rhs;
  std::set<AccessRef> covered;
  for (int s : pr.essential_scopes(b, assoc)) {
    if (s == 0) {
      rhs.constant += 1;  // virtual entry edge of the whole program
    } else {
      for (int pe : eg.scope_entry_prog_edges[static_cast<std::size_t>(s)])
        add_prog_edge_flow(eg, rhs.terms, model, pe, 1);
    }
    for (const AccessRef& ref : pr.persistent_set(b, s, assoc)) covered.insert(ref);
  }
  for (const auto& e : eg.edges) {
    if (!e.block || *e.block != b || !e.access) continue;
    if (covered.count(*e.access)) continue;
    add_terms(rhs.terms, model.var_index.at(xe_name(e.id)), 1);
  }
  return rhs;
}

}  // namespace

void add_lru_hypothetical(IpetModel& model, const PersistenceResult& pr, const ExecGraph& eg) {
  add_block_count_vars(model, eg);
  std::vector<long long> trip = edge_trip_bounds(eg);
  for (BlockId b : graph_blocks(eg)) {
    long long ub = block_access_ub(eg, trip, b);
    int ab_v = model.var("ab_" + std::to_string(b));
    for (int a = 1; a <= pr.max_assoc; ++a) {
      std::string suffix = std::to_string(b) + "_" + std::to_string(a);
      int ml = model.add_var("mlru_" + suffix, ub);
      int hl = model.add_var("hlru_" + suffix, ub);
      PersistenceRhs rhs = persistence_rhs(model, pr, eg, b, a);
      IpetConstraint bound;
      bound.name = "lru_miss_bound_" + suffix;
      bound.terms.emplace_back(ml, 1);
      for (auto [v, c] : rhs.terms) add_terms(bound.terms, v, -c);
      bound.rel = Rel::Le;
      bound.rhs = rhs.constant;
      drop_zero_terms(bound);
      model.constraints.push_back(std::move(bound));

      IpetConstraint hits;
      hits.name = "lru_hit_bound_" + suffix;
      hits.terms.emplace_back(hl, 1);
      hits.terms.emplace_back(ab_v, -1);
      hits.terms.emplace_back(ml, 1);
      hits.rel = Rel::Ge;
      hits.rhs = 0;
      model.constraints.push_back(std::move(hits));
    }
  }
}

void add_dm_persistence_base(IpetModel& model, const PersistenceResult& pr_dm, const ExecGraph& eg) {
  add_block_count_vars(model, eg);
  for (BlockId b : graph_blocks(eg)) {
    PersistenceRhs rhs = persistence_rhs(model, pr_dm, eg, b, 1);
    IpetConstraint bound;
    bound.name = "dm_pers_" + std::to_string(b);
    bound.terms.emplace_back(model.var("mb_" + std::to_string(b)), 1);
    for (auto [v, c] : rhs.terms) add_terms(bound.terms, v, -c);
    bound.rel = Rel::Le;
    bound.rhs = rhs.constant;
    drop_zero_terms(bound);
    model.constraints.push_back(std::move(bound));
  }
}

int add_competitiveness(IpetModel& model, const std::vector<CompetitivenessClaim>& claims,
                        const SetAssocConfig& cfg, const ExecGraph& eg, CompFamilies families) {
  add_block_count_vars(model, eg);
  std::set<BlockId> blocks = graph_blocks(eg);
  std::set<int> sets;
  for (BlockId b : blocks) sets.insert(cfg.set_of(b));

  auto set_suffix = [](int s) { return std::to_string(s); };

  // Per-set aggregates are created on demand.
  auto ensure_set_vars = [&](int s) {
    std::string ms = "ms_" + set_suffix(s);
    if (model.has_var(ms)) return;
    long long ub = 0;
    for (BlockId b : blocks)
      if (cfg.set_of(b) == s) ub += model.vars[static_cast<std::size_t>(model.var("ab_" + std::to_string(b)))].ub;
    int ms_v = model.add_var(ms, ub);
    int hs_v = model.add_var("hs_" + set_suffix(s), ub);
    IpetConstraint cm, ch;
    cm.name = "def_ms_" + set_suffix(s);
    ch.name = "def_hs_" + set_suffix(s);
    cm.terms.emplace_back(ms_v, -1);
    ch.terms.emplace_back(hs_v, -1);
    for (BlockId b : blocks) {
      if (cfg.set_of(b) != s) continue;
      add_terms(cm.terms, model.var("mb_" + std::to_string(b)), 1);
      add_terms(ch.terms, model.var("hb_" + std::to_string(b)), 1);
    }
    cm.rel = ch.rel = Rel::Eq;
    cm.rhs = ch.rhs = 0;
    model.constraints.push_back(std::move(cm));
    model.constraints.push_back(std::move(ch));
  };
  auto ensure_set_lru_vars = [&](int s, int a) {
    std::string name = "mslru_" + set_suffix(s) + "_" + std::to_string(a);
    if (model.has_var(name)) return;
    long long ub = 0;
    for (BlockId b : blocks)
      if (cfg.set_of(b) == s) ub += model.vars[static_cast<std::size_t>(model.var("ab_" + std::to_string(b)))].ub;
    int ms_v = model.add_var(name, ub);
    int hs_v = model.add_var("hslru_" + set_suffix(s) + "_" + std::to_string(a), ub);
    IpetConstraint cm, ch;
    cm.name = "def_mslru_" + set_suffix(s) + "_" + std::to_string(a);
    ch.name = "def_hslru_" + set_suffix(s) + "_" + std::to_string(a);
    cm.terms.emplace_back(ms_v, -1);
    ch.terms.emplace_back(hs_v, -1);
    for (BlockId b : blocks) {
      if (cfg.set_of(b) != s) continue;
      add_terms(cm.terms, model.var("mlru_" + std::to_string(b) + "_" + std::to_string(a)), 1);
      add_terms(ch.terms, model.var("hlru_" + std::to_string(b) + "_" + std::to_string(a)), 1);
    }
    cm.rel = ch.rel = Rel::Eq;
    cm.rhs = ch.rhs = 0;
    model.constraints.push_back(std::move(cm));
    model.constraints.push_back(std::move(ch));
  };

  int added = 0;
  int claim_idx = 0;
  for (const auto& claim : claims) {
    ++claim_idx;
    int a = claim.policy_q.assoc;
    // Clear denominators: multiply the whole inequality by L.
    mpz_class lnum;
    mpz_lcm(lnum.get_mpz_t(), claim.r.get_den().get_mpz_t(), claim.c.get_den().get_mpz_t());
    long long L = checked_ll(lnum, "competitiveness");
    long long Lr = checked_ll(mpz_class(claim.r.get_num() * (lnum / claim.r.get_den())), "competitiveness");
    long long Lc = checked_ll(mpz_class(claim.c.get_num() * (lnum / claim.c.get_den())), "competitiveness");
    std::string tag = std::to_string(claim_idx) + "_a" + std::to_string(a);

    switch (claim.mode) {
      case ClaimMode::BlockMiss: {
        if (!families.block_miss) break;
        for (BlockId b : blocks) {
          std::string sfx = std::to_string(b) + "_" + std::to_string(a);
          if (!model.has_var("mlru_" + sfx))
            throw std::logic_error("add_competitiveness needs add_lru_hypothetical first");
          IpetConstraint c;
          c.name = "comp_bm_" + tag + "_b" + std::to_string(b);
          c.terms.emplace_back(model.var("mb_" + std::to_string(b)), L);
          c.terms.emplace_back(model.var("mlru_" + sfx), -Lr);
          c.rel = Rel::Le;
          c.rhs = Lc;
          drop_zero_terms(c);
          model.constraints.push_back(std::move(c));
          ++added;
        }
        break;
      }
      case ClaimMode::BlockHit: {
        if (!families.block_hit) break;
        for (BlockId b : blocks) {
          std::string sfx = std::to_string(b) + "_" + std::to_string(a);
          if (!model.has_var("hlru_" + sfx))
            throw std::logic_error("add_competitiveness needs add_lru_hypothetical first");
          IpetConstraint c;
          c.name = "comp_bh_" + tag + "_b" + std::to_string(b);
          c.terms.emplace_back(model.var("hb_" + std::to_string(b)), L);
          c.terms.emplace_back(model.var("hlru_" + sfx), -Lr);
          c.rel = Rel::Ge;
          c.rhs = -Lc;
          drop_zero_terms(c);
          model.constraints.push_back(std::move(c));
          ++added;
        }
        break;
      }
      case ClaimMode::Miss: {
        if (!families.miss) break;
        for (int s : sets) {
          ensure_set_vars(s);
          ensure_set_lru_vars(s, a);
          IpetConstraint c;
          c.name = "comp_m_" + tag + "_s" + std::to_string(s);
          c.terms.emplace_back(model.var("ms_" + set_suffix(s)), L);
          c.terms.emplace_back(model.var("mslru_" + set_suffix(s) + "_" + std::to_string(a)), -Lr);
          c.rel = Rel::Le;
          c.rhs = Lc;
          drop_zero_terms(c);
          model.constraints.push_back(std::move(c));
          ++added;
        }
        break;
      }
      case ClaimMode::Hit: {
        if (!families.hit) break;
        for (int s : sets) {
          ensure_set_vars(s);
          ensure_set_lru_vars(s, a);
          IpetConstraint c;
          c.name = "comp_h_" + tag + "_s" + std::to_string(s);
          c.terms.emplace_back(model.var("hs_" + set_suffix(s)), L);
          c.terms.emplace_back(model.var("hslru_" + set_suffix(s) + "_" + std::to_string(a)), -Lr);
          c.rel = Rel::Ge;
          c.rhs = -Lc;
          drop_zero_terms(c);
          model.constraints.push_back(std::move(c));
          ++added;
        }
        break;
      }
    }
  }
  return added;
}

// ---------------------------------------------------------------------------
// LP file emission and parsing

namespace {

void emit_terms(std::ostringstream& os, const IpetModel& model,
                const std::vector<std::pair<int, long long>>& terms) {
  bool first = true;
  for (const auto& [v, c] : terms) {
    if (c == 0) continue;
    long long mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "- ";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag << " ";
    os << model.vars[static_cast<std::size_t>(v)].name;
  }
  if (first) os << "0 " << model.vars[0].name;
}

}  // namespace

std::string emit_lp(const IpetModel& model) {
  std::ostringstream os;
  os << "Maximize\n obj: ";
  std::vector<std::pair<int, long long>> obj(model.objective.begin(), model.objective.end());
  emit_terms(os, model, obj);
  os << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    os << " " << c.name << ": ";
    emit_terms(os, model, c.terms);
    switch (c.rel) {
      case Rel::Le: os << " <= "; break;
      case Rel::Eq: os << " = "; break;
      case Rel::Ge: os << " >= "; break;
    }
    os << c.rhs << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : model.vars) os << " " << v.lb << " <= " << v.name << " <= " << v.ub << "\n";
  os << "General\n";
  for (const auto& v : model.vars) os << " " << v.name << "\n";
  os << "End\n";
  return os.str();
}

namespace {

struct LpTokens {
  std::vector<std::string> toks;
  std::size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const { return toks[pos]; }
  std::string next() { return toks[pos++]; }
};

bool is_number(const std::string& t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i >= t.size()) return false;
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

// Parses `[+-] [coeff] name` repetitions until a relation or keyword.
std::vector<std::pair<std::string, long long>> parse_terms(LpTokens& tk) {
  std::vector<std::pair<std::string, long long>> terms;
  long long sign = 1;
  while (!tk.done()) {
    const std::string& t = tk.peek();
    if (t == "<=" || t == ">=" || t == "=" || t == "Subject" || t == "Bounds" || t == "General" ||
        t == "End")
      break;
    if (t == "+" || t == "-") {
      sign = t == "-" ? -1 : 1;
      tk.next();
      continue;
    }
    long long coeff = sign;
    if (is_number(t)) {
      coeff = sign * std::stoll(tk.next());
      if (tk.done()) throw std::runtime_error("LP parse: dangling coefficient");
    }
    std::string name = tk.next();
    terms.emplace_back(name, coeff);
    sign = 1;
  }
  return terms;
}

}  // namespace

IpetModel parse_lp(const std::string& text) {
  // Tokenize, keeping labels like `name:` split into name and ':'.
  LpTokens tk;
  std::istringstream in(text);
  std::string raw;
  while (in >> raw) {
    if (raw.size() > 1 && raw.back() == ':') {
      tk.toks.push_back(raw.substr(0, raw.size() - 1));
      tk.toks.push_back(":");
    } else {
      tk.toks.push_back(raw);
    }
  }

  // First pass: variable order and bounds from the Bounds section.
  IpetModel model;
  {
    std::size_t i = 0;
    while (i < tk.toks.size() && tk.toks[i] != "Bounds") ++i;
    ++i;
    while (i + 4 < tk.toks.size() + 1 && i < tk.toks.size() && tk.toks[i] != "General" &&
           tk.toks[i] != "End") {
      if (i + 4 >= tk.toks.size()) throw std::runtime_error("LP parse: truncated bounds");
      long long lb = std::stoll(tk.toks[i]);
      if (tk.toks[i + 1] != "<=") throw std::runtime_error("LP parse: bad bounds line");
      std::string name = tk.toks[i + 2];
      if (tk.toks[i + 3] != "<=") throw std::runtime_error("LP parse: bad bounds line");
      long long ub = std::stoll(tk.toks[i + 4]);
      int v = model.add_var(name, ub);
      model.vars[static_cast<std::size_t>(v)].lb = lb;
      i += 5;
    }
  }
  if (model.vars.empty()) throw std::runtime_error("LP parse: no Bounds section");

  if (tk.next() != "Maximize") throw std::runtime_error("LP parse: expected Maximize");
  if (tk.next() != "obj" || tk.next() != ":") throw std::runtime_error("LP parse: expected obj:");
  for (auto& [name, coeff] : parse_terms(tk)) {
    if (coeff != 0) model.objective[model.var(name)] += coeff;
    if (model.objective.count(model.var(name)) && model.objective[model.var(name)] == 0)
      model.objective.erase(model.var(name));
  }
  if (tk.next() != "Subject" || tk.next() != "To") throw std::runtime_error("LP parse: expected Subject To");
  while (!tk.done() && tk.peek() != "Bounds") {
    IpetConstraint c;
    c.name = tk.next();
    if (tk.next() != ":") throw std::runtime_error("LP parse: constraint needs a label");
    for (auto& [name, coeff] : parse_terms(tk)) add_terms(c.terms, model.var(name), coeff);
    drop_zero_terms(c);
    std::string rel = tk.next();
    if (rel == "<=")
      c.rel = Rel::Le;
    else if (rel == ">=")
      c.rel = Rel::Ge;
    else if (rel == "=")
      c.rel = Rel::Eq;
    else
      throw std::runtime_error("LP parse: bad relation " + rel);
    c.rhs = std::stoll(tk.next());
    model.constraints.push_back(std::move(c));
  }
  return model;
}

std::string dump_model_json(const IpetModel& model) {
  nlohmann::json j;
  for (const auto& v : model.vars)
    j["variables"].push_back({{"name", v.name}, {"lb", v.lb}, {"ub", v.ub}});
  for (const auto& c : model.constraints) {
    nlohmann::json jc;
    jc["name"] = c.name;
    for (const auto& [v, coeff] : c.terms)
      jc["terms"].push_back({{"var", model.vars[static_cast<std::size_t>(v)].name}, {"coeff", coeff}});
    jc["rel"] = c.rel == Rel::Le ? "<=" : (c.rel == Rel::Eq ? "=" : ">=");
    jc["rhs"] = c.rhs;
    j["constraints"].push_back(std::move(jc));
  }
  for (const auto& [v, coeff] : model.objective)
    j["objective"].push_back({{"var", model.vars[static_cast<std::size_t>(v)].name}, {"coeff", coeff}});
  return j.dump(2);
}

}  // namespace qcache
