#include "qcache/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <queue>
#include <vector>

namespace qcache {

namespace {

inline mpq_class to_q(long long v) { return mpq_class(static_cast<long>(v)); }

// Exact-rational primal simplex with explicit variable bounds. Columns are
// the structural variables followed by one slack per row; artificials are
// appended for rows whose slack cannot absorb the initial residual.
class Simplex {
 public:
  enum class Status { Optimal, Infeasible, Unbounded };

  struct Result {
    Status status = Status::Optimal;
    mpq_class objective;
    std::vector<mpq_class> values;  // structural variables only
  };

  Simplex(const IpetModel& model, const std::vector<long long>& lb,
          const std::vector<long long>& ub)
      : model_(model) {
    n_ = static_cast<int>(model.vars.size());
    m_ = static_cast<int>(model.constraints.size());
    int cols = n_ + m_;
    lo_.resize(static_cast<std::size_t>(cols));
    hi_.resize(static_cast<std::size_t>(cols));
    lo_fin_.assign(static_cast<std::size_t>(cols), true);
    hi_fin_.assign(static_cast<std::size_t>(cols), true);
    for (int j = 0; j < n_; ++j) {
      lo_[static_cast<std::size_t>(j)] = to_q(lb[static_cast<std::size_t>(j)]);
      hi_[static_cast<std::size_t>(j)] = to_q(ub[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < m_; ++i) {
      int j = n_ + i;
      switch (model.constraints[static_cast<std::size_t>(i)].rel) {
        case Rel::Le:  // a.x + s = b, s >= 0
          lo_[static_cast<std::size_t>(j)] = 0;
          hi_fin_[static_cast<std::size_t>(j)] = false;
          break;
        case Rel::Ge:  // a.x + s = b, s <= 0
          hi_[static_cast<std::size_t>(j)] = 0;
          lo_fin_[static_cast<std::size_t>(j)] = false;
          break;
        case Rel::Eq:
          lo_[static_cast<std::size_t>(j)] = 0;
          hi_[static_cast<std::size_t>(j)] = 0;
          break;
      }
    }

    tab_.assign(static_cast<std::size_t>(m_), std::vector<mpq_class>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < m_; ++i) {
      for (const auto& [v, c] : model.constraints[static_cast<std::size_t>(i)].terms)
        tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] = to_q(c);
      tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(n_ + i)] = 1;
    }

    status_.assign(static_cast<std::size_t>(cols), ColStatus::AtLo);
    // Nonbasic columns sit at a finite bound; Ge slacks start at their
    // upper bound 0.
    for (int j = 0; j < cols; ++j)
      if (!lo_fin_[static_cast<std::size_t>(j)]) status_[static_cast<std::size_t>(j)] = ColStatus::AtHi;

    basic_.assign(static_cast<std::size_t>(m_), -1);
    in_basis_.assign(static_cast<std::size_t>(cols), -1);
  }

  Result solve() {
    if (!infeasible_bounds_ok()) return {Status::Infeasible, 0, {}};
    if (!phase1()) return {Status::Infeasible, 0, {}};
    bool ok = optimize(objective_vector());
    if (!ok) return {Status::Unbounded, 0, {}};
    Result r;
    r.status = Status::Optimal;
    std::vector<mpq_class> vals = all_values();
    r.values.assign(vals.begin(), vals.begin() + n_);
    const std::vector<mpq_class> c = objective_vector();
    for (int j = 0; j < n_; ++j) r.objective += c[static_cast<std::size_t>(j)] * r.values[static_cast<std::size_t>(j)];
    return r;
  }

 private:
  enum class ColStatus { AtLo, AtHi, Basic };

  bool infeasible_bounds_ok() const {
    for (int j = 0; j < n_; ++j)
      if (lo_[static_cast<std::size_t>(j)] > hi_[static_cast<std::size_t>(j)]) return false;
    return true;
  }

  std::vector<mpq_class> objective_vector() const {
    std::vector<mpq_class> c(lo_.size());
    for (const auto& [v, coeff] : model_.objective) c[static_cast<std::size_t>(v)] = to_q(coeff);
    return c;
  }

  mpq_class nonbasic_value(int j) const {
    return status_[static_cast<std::size_t>(j)] == ColStatus::AtHi ? hi_[static_cast<std::size_t>(j)]
                                                                   : lo_[static_cast<std::size_t>(j)];
  }

  std::vector<mpq_class> all_values() const {
    std::vector<mpq_class> vals(lo_.size());
    for (std::size_t j = 0; j < lo_.size(); ++j)
      if (status_[j] != ColStatus::Basic) vals[j] = nonbasic_value(static_cast<int>(j));
    for (int i = 0; i < m_; ++i) vals[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] = beta_[static_cast<std::size_t>(i)];
    return vals;
  }

  // Installs the initial slack/artificial basis and, when artificials are
  // needed, runs the feasibility phase.
  bool phase1() {
    std::vector<int> artificial_rows;
    beta_.assign(static_cast<std::size_t>(m_), 0);
    for (int i = 0; i < m_; ++i) {
      mpq_class resid = to_q(model_.constraints[static_cast<std::size_t>(i)].rhs);
      for (const auto& [v, c] : model_.constraints[static_cast<std::size_t>(i)].terms)
        resid -= to_q(c) * nonbasic_value(v);
      int slack = n_ + i;
      bool fits = (lo_fin_[static_cast<std::size_t>(slack)] ? resid >= lo_[static_cast<std::size_t>(slack)] : true) &&
                  (hi_fin_[static_cast<std::size_t>(slack)] ? resid <= hi_[static_cast<std::size_t>(slack)] : true);
      if (fits) {
        make_basic(slack, i, resid);
      } else {
        artificial_rows.push_back(i);
      }
    }
    if (artificial_rows.empty()) return true;

    // Append artificial columns, coefficient chosen so the basic value is
    // nonnegative.
    std::vector<mpq_class> phase1_obj(lo_.size() + artificial_rows.size());
    for (int i : artificial_rows) {
      mpq_class resid = to_q(model_.constraints[static_cast<std::size_t>(i)].rhs);
      for (const auto& [v, c] : model_.constraints[static_cast<std::size_t>(i)].terms)
        resid -= to_q(c) * nonbasic_value(v);
      // The slack of this row stays nonbasic at its nearest bound.
      int slack = n_ + i;
      mpq_class sval = nonbasic_value(slack);
      resid -= sval;
      int j = static_cast<int>(lo_.size());
      lo_.push_back(0);
      hi_.push_back(0);  // tightened after phase 1; during it: [0, inf)
      lo_fin_.push_back(true);
      hi_fin_.push_back(false);
      status_.push_back(ColStatus::AtLo);
      in_basis_.push_back(-1);
      // Keep the basis an identity: a negative residual negates the row so
      // the artificial enters with coefficient +1 and value |resid|.
      if (resid < 0)
        for (auto& cell : tab_[static_cast<std::size_t>(i)])
          if (cell != 0) cell = -cell;
      for (int r = 0; r < m_; ++r) tab_[static_cast<std::size_t>(r)].push_back(0);
      tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
      phase1_obj[static_cast<std::size_t>(j)] = -1;
      make_basic(j, i, abs(resid));
      artificials_.push_back(j);
    }
    phase1_obj.resize(lo_.size());
    if (!optimize(phase1_obj)) return false;  // phase-1 objective is bounded by 0
    mpq_class art_sum = 0;
    for (int j : artificials_) {
      std::size_t js = static_cast<std::size_t>(j);
      if (in_basis_[js] >= 0)
        art_sum += beta_[static_cast<std::size_t>(in_basis_[js])];
      else
        art_sum += nonbasic_value(j);
    }
    if (art_sum != 0) return false;
    // Freeze artificials at zero.
    for (int j : artificials_) {
      hi_fin_[static_cast<std::size_t>(j)] = true;
      hi_[static_cast<std::size_t>(j)] = 0;
    }
    return true;
  }

  void make_basic(int col, int row, mpq_class value) {
    basic_[static_cast<std::size_t>(row)] = col;
    in_basis_[static_cast<std::size_t>(col)] = row;
    status_[static_cast<std::size_t>(col)] = ColStatus::Basic;
    beta_[static_cast<std::size_t>(row)] = std::move(value);
  }

  // Primal simplex with Bland's rule; returns false on unboundedness.
  bool optimize(const std::vector<mpq_class>& c) {
    int cols = static_cast<int>(lo_.size());
    // Reduced costs d_j = c_j - c_B^T B^-1 A_j, computed from the current
    // tableau (which is already B^-1 A).
    std::vector<mpq_class> d(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) {
      if (status_[static_cast<std::size_t>(j)] == ColStatus::Basic) continue;
      mpq_class red = c[static_cast<std::size_t>(j)];
      for (int i = 0; i < m_; ++i) {
        const mpq_class& a = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (a != 0) red -= c[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] * a;
      }
      d[static_cast<std::size_t>(j)] = std::move(red);
    }

    while (true) {
      // Entering column: smallest improving index.
      int enter = -1;
      int dir = 0;
      for (int j = 0; j < cols; ++j) {
        std::size_t js = static_cast<std::size_t>(j);
        if (status_[js] == ColStatus::Basic) continue;
        bool fixed = lo_fin_[js] && hi_fin_[js] && lo_[js] == hi_[js];
        if (fixed) continue;
        if (status_[js] == ColStatus::AtLo && d[js] > 0) {
          enter = j;
          dir = 1;
          break;
        }
        if (status_[js] == ColStatus::AtHi && d[js] < 0) {
          enter = j;
          dir = -1;
          break;
        }
      }
      if (enter < 0) return true;
      std::size_t es = static_cast<std::size_t>(enter);

      // Ratio test: how far can the entering variable move?
      bool limited = false;
      mpq_class best_t;
      int leave_row = -1;
      int leave_to_hi = 0;
      // Entering variable's own span.
      if (lo_fin_[es] && hi_fin_[es]) {
        best_t = hi_[es] - lo_[es];
        limited = true;
      }
      for (int i = 0; i < m_; ++i) {
        const mpq_class& a = tab_[static_cast<std::size_t>(i)][es];
        if (a == 0) continue;
        mpq_class alpha = mpq_class(dir) * a;  // basic value changes by -alpha * t
        std::size_t bi = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
        mpq_class t;
        int to_hi;
        if (alpha > 0) {
          if (!lo_fin_[bi]) continue;
          t = (beta_[static_cast<std::size_t>(i)] - lo_[bi]) / alpha;
          to_hi = 0;
        } else {
          if (!hi_fin_[bi]) continue;
          t = (beta_[static_cast<std::size_t>(i)] - hi_[bi]) / alpha;
          to_hi = 1;
        }
        // Bland: on ties prefer the smaller basic variable index; a tie with
        // the entering variable's own span keeps the bound flip.
        bool better = !limited || t < best_t ||
                      (t == best_t && leave_row >= 0 &&
                       basic_[static_cast<std::size_t>(i)] < basic_[static_cast<std::size_t>(leave_row)]);
        if (better) {
          leave_row = i;
          best_t = t;
          leave_to_hi = to_hi;
          limited = true;
        }
      }
      if (!limited) return false;  // unbounded direction

      if (leave_row < 0) {
        // Bound flip: entering moves to its other bound.
        for (int i = 0; i < m_; ++i) {
          const mpq_class& a = tab_[static_cast<std::size_t>(i)][es];
          if (a != 0) beta_[static_cast<std::size_t>(i)] -= mpq_class(dir) * a * best_t;
        }
        status_[es] = dir > 0 ? ColStatus::AtHi : ColStatus::AtLo;
        continue;
      }

      // Pivot.
      std::size_t lr = static_cast<std::size_t>(leave_row);
      int leave_col = basic_[lr];
      mpq_class enter_val = nonbasic_value(enter) + mpq_class(dir) * best_t;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        const mpq_class& a = tab_[static_cast<std::size_t>(i)][es];
        if (a != 0) beta_[static_cast<std::size_t>(i)] -= mpq_class(dir) * a * best_t;
      }

      mpq_class pivot = tab_[lr][es];
      assert(pivot != 0);
      for (int j = 0; j < cols; ++j) {
        if (tab_[lr][static_cast<std::size_t>(j)] != 0) tab_[lr][static_cast<std::size_t>(j)] /= pivot;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        const mpq_class factor = tab_[static_cast<std::size_t>(i)][es];
        if (factor == 0) continue;
        for (int j = 0; j < cols; ++j) {
          const mpq_class& src = tab_[lr][static_cast<std::size_t>(j)];
          if (src != 0) tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= factor * src;
        }
      }
      {
        const mpq_class factor = d[es];
        if (factor != 0)
          for (int j = 0; j < cols; ++j) {
            const mpq_class& src = tab_[lr][static_cast<std::size_t>(j)];
            if (src != 0) d[static_cast<std::size_t>(j)] -= factor * src;
          }
      }

      status_[static_cast<std::size_t>(leave_col)] = leave_to_hi ? ColStatus::AtHi : ColStatus::AtLo;
      in_basis_[static_cast<std::size_t>(leave_col)] = -1;
      make_basic(enter, leave_row, std::move(enter_val));
    }
  }

  const IpetModel& model_;
  int n_ = 0, m_ = 0;
  std::vector<std::vector<mpq_class>> tab_;
  std::vector<mpq_class> lo_, hi_;
  std::vector<bool> lo_fin_, hi_fin_;
  std::vector<ColStatus> status_;
  std::vector<int> basic_;     // row -> column
  std::vector<int> in_basis_;  // column -> row or -1
  std::vector<mpq_class> beta_;
  std::vector<int> artificials_;
};

long long env_node_limit() {
  if (const char* env = std::getenv("QCACHE_SOLVER_NODE_LIMIT")) {
    long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 200000;
}

mpq_class floor_q(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return mpq_class(f);
}

mpq_class ceil_q(const mpq_class& q) {
  mpz_class f;
  mpz_cdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return mpq_class(f);
}

}  // namespace

BoundReport solve_exact(const IpetModel& model, const SolveOptions& opts) {
  long long node_limit = opts.node_limit > 0 ? opts.node_limit : env_node_limit();
  int n = static_cast<int>(model.vars.size());

  struct Node {
    mpq_class bound;  // parent LP objective, valid upper bound
    long long id;
    std::vector<long long> lb, ub;
  };
  auto worse = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> frontier(worse);

  Node root;
  root.id = 0;
  root.lb.resize(static_cast<std::size_t>(n));
  root.ub.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    root.lb[static_cast<std::size_t>(j)] = model.vars[static_cast<std::size_t>(j)].lb;
    root.ub[static_cast<std::size_t>(j)] = model.vars[static_cast<std::size_t>(j)].ub;
  }
  // Upper bound on any objective: sum of positive contributions.
  mpq_class trivial = 0;
  for (const auto& [v, c] : model.objective)
    if (c > 0) trivial += to_q(c) * to_q(root.ub[static_cast<std::size_t>(v)]);
  root.bound = trivial;
  frontier.push(root);

  long long next_id = 1;
  long nodes = 0;
  bool have_incumbent = false;
  long long best = 0;
  std::map<std::string, long long> best_solution;

  while (!frontier.empty()) {
    Node node = frontier.top();
    frontier.pop();
    if (have_incumbent && floor_q(node.bound) <= to_q(best)) continue;
    if (++nodes > node_limit)
      throw BudgetExceeded("branch-and-bound node limit " + std::to_string(node_limit) + " exceeded");

    Simplex lp(model, node.lb, node.ub);
    Simplex::Result res = lp.solve();
    if (res.status == Simplex::Status::Infeasible) continue;
    if (res.status == Simplex::Status::Unbounded)
      throw std::logic_error("LP relaxation unbounded despite finite variable bounds");
    if (have_incumbent && floor_q(res.objective) <= to_q(best)) continue;

    int frac = -1;
    for (int j = 0; j < n; ++j) {
      if (res.values[static_cast<std::size_t>(j)].get_den() != 1) {
        frac = j;
        break;
      }
    }
    if (frac < 0) {
      mpq_class obj = res.objective;
      assert(obj.get_den() == 1);
      long long val = static_cast<long long>(mpz_get_si(obj.get_num().get_mpz_t()));
      if (!have_incumbent || val > best) {
        have_incumbent = true;
        best = val;
        best_solution.clear();
        for (int j = 0; j < n; ++j)
          best_solution[model.vars[static_cast<std::size_t>(j)].name] =
              static_cast<long long>(mpz_get_si(res.values[static_cast<std::size_t>(j)].get_num().get_mpz_t()));
      }
      continue;
    }

    mpq_class v = res.values[static_cast<std::size_t>(frac)];
    Node down = node, up = node;
    down.ub[static_cast<std::size_t>(frac)] =
        static_cast<long long>(mpz_get_si(floor_q(v).get_num().get_mpz_t()));
    up.lb[static_cast<std::size_t>(frac)] =
        static_cast<long long>(mpz_get_si(ceil_q(v).get_num().get_mpz_t()));
    down.bound = res.objective;
    up.bound = res.objective;
    down.id = next_id++;
    up.id = next_id++;
    if (down.lb[static_cast<std::size_t>(frac)] <= down.ub[static_cast<std::size_t>(frac)])
      frontier.push(std::move(down));
    if (up.lb[static_cast<std::size_t>(frac)] <= up.ub[static_cast<std::size_t>(frac)])
      frontier.push(std::move(up));
  }

  if (!have_incumbent) throw Infeasible();
  BoundReport report;
  report.objective = best;
  report.solution = std::move(best_solution);
  report.nodes_explored = nodes;
  return report;
}

}  // namespace qcache
