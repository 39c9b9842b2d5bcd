#include "qcache/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "qcache/lru_analysis.hpp"

namespace qcache {

const std::vector<AnalysisConfig>& all_configs() {
  static const std::vector<AnalysisConfig> v = {
      AnalysisConfig::AllHit,     AnalysisConfig::AllMiss,        AnalysisConfig::DmMust,
      AnalysisConfig::DmMustPers, AnalysisConfig::LruMayMust,     AnalysisConfig::LruMayMustPers,
      AnalysisConfig::BlockMiss,  AnalysisConfig::BlockHit,       AnalysisConfig::Miss,
      AnalysisConfig::Hit,        AnalysisConfig::AllComp};
  return v;
}

const char* config_name(AnalysisConfig c) {
  switch (c) {
    case AnalysisConfig::AllHit: return "allhit";
    case AnalysisConfig::AllMiss: return "allmiss";
    case AnalysisConfig::DmMust: return "dm-must";
    case AnalysisConfig::DmMustPers: return "dm-must-pers";
    case AnalysisConfig::LruMayMust: return "lru-maymust";
    case AnalysisConfig::LruMayMustPers: return "lru-maymust-pers";
    case AnalysisConfig::BlockMiss: return "block-miss";
    case AnalysisConfig::BlockHit: return "block-hit";
    case AnalysisConfig::Miss: return "miss";
    case AnalysisConfig::Hit: return "hit";
    case AnalysisConfig::AllComp: return "all-comp";
  }
  return "?";
}

AnalysisConfig config_from_name(const std::string& name) {
  for (AnalysisConfig c : all_configs())
    if (name == config_name(c)) return c;
  throw std::invalid_argument("unknown analysis configuration: " + name);
}

namespace {

bool is_comp_config(AnalysisConfig c) {
  return c == AnalysisConfig::BlockMiss || c == AnalysisConfig::BlockHit ||
         c == AnalysisConfig::Miss || c == AnalysisConfig::Hit || c == AnalysisConfig::AllComp;
}

CompFamilies families_of(AnalysisConfig c) {
  CompFamilies f;
  switch (c) {
    case AnalysisConfig::BlockMiss: f.block_miss = true; break;
    case AnalysisConfig::BlockHit: f.block_hit = true; break;
    case AnalysisConfig::Miss: f.miss = true; break;
    case AnalysisConfig::Hit: f.hit = true; break;
    case AnalysisConfig::AllComp: f = CompFamilies::all(); break;
    default: break;
  }
  return f;
}

}  // namespace

AnalysisOutcome analyze_program(const ProgramGraph& g, PolicyKind policy,
                                const SetAssocConfig& cfg, const LatencyModel& lat,
                                AnalysisConfig ac, const SolveOptions& solve_opts) {
  Classification cls;
  std::optional<PersistenceResult> pr_dm;    // associativity 1, policy-independent
  std::optional<PersistenceResult> pr_full;  // associativity k, feeds the LRU hypotheticals
  bool lru_links = false;                    // (1,0) links m_b <= mlru_{b,a} for LRU itself

  switch (ac) {
    case AnalysisConfig::AllHit:
      cls = baseline_classifications(g, cfg, BaselineMode::AllHit).classification;
      break;
    case AnalysisConfig::AllMiss:
      cls = baseline_classifications(g, cfg, BaselineMode::AllMiss).classification;
      break;
    case AnalysisConfig::DmMust:
      cls = baseline_classifications(g, cfg, BaselineMode::DmMust).classification;
      break;
    case AnalysisConfig::DmMustPers: {
      BaselineResult base = baseline_classifications(g, cfg, BaselineMode::DmMustPers);
      cls = std::move(base.classification);
      pr_dm = std::move(base.persistence);
      break;
    }
    case AnalysisConfig::LruMayMust:
      cls = policy == PolicyKind::Lru
                ? must_may_analysis(g, cfg)
                : baseline_classifications(g, cfg, BaselineMode::DmMust).classification;
      break;
    case AnalysisConfig::LruMayMustPers:
      if (policy == PolicyKind::Lru) {
        cls = must_may_analysis(g, cfg);
        pr_full = persistence_analysis(g, cfg);
        lru_links = true;
      } else {
        BaselineResult base = baseline_classifications(g, cfg, BaselineMode::DmMustPers);
        cls = std::move(base.classification);
        pr_dm = std::move(base.persistence);
      }
      break;
    default: {  // the five competitiveness configurations
      BaselineResult base = baseline_classifications(g, cfg, BaselineMode::DmMustPers);
      cls = std::move(base.classification);
      pr_dm = std::move(base.persistence);
      pr_full = persistence_analysis(g, cfg);
      break;
    }
  }

  ExecGraph eg = build_exec_graph(g, cls, lat);
  IpetModel model = build_base_model(eg);
  if (pr_dm) add_dm_persistence_base(model, *pr_dm, eg);
  if (pr_full) add_lru_hypothetical(model, *pr_full, eg);

  AnalysisOutcome out;
  if (lru_links) {
    std::vector<CompetitivenessClaim> links = applicable_claims(PolicyKind::Lru, cfg.assoc);
    CompFamilies f;
    f.block_miss = true;
    add_competitiveness(model, links, cfg, eg, f);
  }
  if (is_comp_config(ac)) {
    std::vector<CompetitivenessClaim> claims = applicable_claims(policy, cfg.assoc);
    int added = add_competitiveness(model, claims, cfg, eg, families_of(ac));
    out.vacuous = added == 0;
  }

  BoundReport cost = solve_exact(model, solve_opts);
  IpetModel miss_model = model;
  set_miss_objective(miss_model, eg);
  BoundReport miss = solve_exact(miss_model, solve_opts);

  out.model = std::move(model);
  out.cost_bound = cost.objective;
  out.miss_bound = miss.objective;
  out.nodes_explored = cost.nodes_explored + miss.nodes_explored;
  return out;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  long hit_lat = cfg.latency.hit_latency, miss_lat = cfg.latency.miss_latency;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r\n"));
      s.erase(s.find_last_not_of(" \t\r\n") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "program") cfg.program_files.push_back(value);
    else if (key == "policy") cfg.policy = policy_from_name(value);
    else if (key == "k") cfg.assoc = std::stoi(value);
    else if (key == "nbsets") cfg.nb_sets = std::stoi(value);
    else if (key == "hit_latency") hit_lat = std::stol(value);
    else if (key == "miss_latency") miss_lat = std::stol(value);
    else if (key == "config") cfg.configs.push_back(config_from_name(value));
    else if (key == "baseline") cfg.baseline = config_from_name(value);
    else if (key == "oracle") cfg.run_oracle = value == "true" || value == "1";
    else if (key == "path_budget") cfg.path_budget = std::stol(value);
    else if (key == "lp_dir") cfg.lp_dir = value;
    else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
  }
  cfg.latency = LatencyModel(hit_lat, miss_lat);
  return cfg;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream os;
  os << "program,config,cost_bound,miss_bound,ratio,oracle,sound,vacuous,error\n";
  for (const auto& r : rows) {
    os << r.program << "," << config_name(r.config) << ",";
    if (r.error.empty()) {
      os << r.cost_bound << "," << r.miss_bound << "," << rat_to_decimal(r.ratio, 4) << ","
         << (r.oracle_checked ? "checked" : "off") << "," << (r.sound ? "true" : "false") << ","
         << (r.vacuous ? "true" : "false") << ",";
    } else {
      os << ",,,,,," << r.error;
    }
    os << "\n";
  }
  os << "geomean,,,," << std::fixed;
  {
    std::ostringstream gm;
    gm.setf(std::ios::fixed);
    gm.precision(4);
    gm << geometric_mean_ratio;
    os << gm.str();
  }
  os << ",,,,\n";
  return os.str();
}

namespace {

// One program's slice of the batch; pure given its inputs.
std::vector<ExperimentRow> run_one_program(const ExperimentConfig& cfg,
                                           const std::vector<AnalysisConfig>& configs,
                                           const SetAssocConfig& sa, const std::string& file) {
  std::vector<ExperimentRow> rows;
  std::ifstream fin(file);
  if (!fin) {
    ExperimentRow row;
    row.program = file;
    row.error = "cannot open file";
    rows.push_back(row);
    return rows;
  }
  std::stringstream buf;
  buf << fin.rdbuf();
  ProgramGraph g;
  try {
    g = parse_program(buf.str());
  } catch (const std::exception& ex) {
    ExperimentRow row;
    row.program = file;
    row.error = ex.what();
    rows.push_back(row);
    return rows;
  }

  std::optional<OracleReport> oracle;
  if (cfg.run_oracle) {
    try {
      oracle = worst_observed(g, cfg.policy, cfg.assoc, sa, cfg.latency, cfg.path_budget);
    } catch (const PathBudgetExceeded& ex) {
      ExperimentRow row;
      row.program = file;
      row.error = ex.what();
      rows.push_back(row);
      return rows;
    }
  }

  long long baseline_bound = 0;
  bool have_baseline = false;
  try {
    baseline_bound = analyze_program(g, cfg.policy, sa, cfg.latency, cfg.baseline).cost_bound;
    have_baseline = baseline_bound > 0;
  } catch (const std::exception&) {
    have_baseline = false;
  }

  for (AnalysisConfig ac : configs) {
    ExperimentRow row;
    row.program = file;
    row.config = ac;
    try {
      AnalysisOutcome out = analyze_program(g, cfg.policy, sa, cfg.latency, ac);
      row.cost_bound = out.cost_bound;
      row.miss_bound = out.miss_bound;
      row.vacuous = out.vacuous;
      if (have_baseline)
        row.ratio = Rat(static_cast<long>(out.cost_bound)) / Rat(static_cast<long>(baseline_bound));
      if (oracle) {
        row.oracle_checked = true;
        if (ac == AnalysisConfig::AllHit) {
          // The all-hit extremum is a lower limit, not a sound bound.
          row.sound = out.cost_bound <= oracle->max_cost;
        } else {
          row.sound = out.cost_bound >= oracle->max_cost && out.miss_bound >= oracle->max_misses;
        }
      }
      if (!cfg.lp_dir.empty()) {
        std::filesystem::create_directories(cfg.lp_dir);
        std::string base = std::filesystem::path(file).filename().string();
        std::ofstream lp(cfg.lp_dir + "/" + base + "." + config_name(ac) + ".lp");
        lp << emit_lp(out.model);
      }
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ComparisonTable run_experiment(const ExperimentConfig& cfg) {
  ComparisonTable table;
  std::vector<AnalysisConfig> configs = cfg.configs.empty() ? all_configs() : cfg.configs;
  SetAssocConfig sa(cfg.nb_sets, cfg.assoc);

  // Programs run in parallel; rows are assembled in input order so the
  // output is byte-identical regardless of completion order.
  std::vector<std::future<std::vector<ExperimentRow>>> parts;
  for (const std::string& file : cfg.program_files)
    parts.push_back(std::async(cfg.program_files.size() > 1 ? std::launch::async : std::launch::deferred,
                               run_one_program, std::cref(cfg), std::cref(configs), std::cref(sa),
                               std::cref(file)));

  double log_sum = 0.0;
  long log_count = 0;
  for (auto& part : parts) {
    for (ExperimentRow& row : part.get()) {
      if (row.error.empty()) {
        if (row.oracle_checked && !row.sound) table.any_unsound = true;
        if (row.ratio > 0) {
          log_sum += std::log(row.ratio.get_d());
          ++log_count;
        }
      }
      table.rows.push_back(std::move(row));
    }
  }
  table.geometric_mean_ratio = log_count > 0 ? std::exp(log_sum / static_cast<double>(log_count)) : 0.0;
  return table;
}

// ---------------------------------------------------------------------------
// Catalog verification

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string CatalogReport::to_csv() const {
  std::ostringstream os;
  os << "source,claim,k,l,outcome,witness\n";
  for (const auto& r : rows)
    os << r.source << "," << csv_quote(r.claim) << "," << r.k << "," << r.l << "," << r.outcome
       << "," << csv_quote(r.witness) << "\n";
  return os.str();
}

namespace {

CatalogReport::Row verify_one_refuted(const ClaimCatalogEntry& entry, int k, int l) {
  CatalogReport::Row row;
  row.source = entry.source;
  row.k = k;
  row.l = l;
  if (entry.policy == PolicyKind::Fifo) {
    // Misses to the designated block keep growing under FIFO (roughly one
    // per k fillers) while LRU(l) sees exactly one, so no (r,c) can hold.
    row.claim = "FIFO(" + std::to_string(k) + ") vs LRU(" + std::to_string(l) + ") BLOCK_MISS none";
    AccessSequence sigma = fifo_block_miss_witness(k, l, 8 * k);
    SimResult fifo = simulate(empty_state(PolicyKind::Fifo, k), sigma);
    SimResult lru = simulate(empty_state(PolicyKind::Lru, l), sigma);
    bool growing = true;
    long prev = -1;
    for (int n : {k, 2 * k, 4 * k, 8 * k}) {
      AccessSequence s = fifo_block_miss_witness(k, l, n);
      long mf = simulate(empty_state(PolicyKind::Fifo, k), s).misses_to(0);
      long ml = simulate(empty_state(PolicyKind::Lru, l), s).misses_to(0);
      if (mf < prev || ml != 1) growing = false;
      prev = mf;
    }
    bool witnessed = lru.misses_to(0) == 1 && fifo.misses_to(0) >= 3 && growing;
    row.outcome = witnessed ? "refutation_witnessed" : "refutation_failed";
    row.witness = format_sequence(sigma);
  } else {
    row.claim = "MRU(" + std::to_string(k) + ") vs LRU(" + std::to_string(l) + ") BLOCK_HIT none";
    AccessSequence sigma = mru_block_hit_witness(k, l, MruState::empty(k), 0, 2);
    SimResult mru = simulate(empty_state(PolicyKind::Mru, k), sigma);
    SimResult lru = simulate(empty_state(PolicyKind::Lru, l), sigma);
    bool witnessed = mru.hits_to(0) == 0 && lru.hits_to(0) >= 2;
    row.outcome = witnessed ? "refutation_witnessed" : "refutation_failed";
    row.witness = format_sequence(sigma);
  }
  return row;
}

}  // namespace

CatalogReport verify_catalog(int k_max, std::optional<SearchBudget> budget, int threads) {
  CatalogReport report;

  struct Task {
    CompetitivenessClaim claim;
    std::string source;
    int k, l;
  };
  std::map<int, std::vector<Task>> tasks_by_k;
  for (const auto& entry : catalog()) {
    for (int k = 1; k <= k_max; ++k) {
      for (int l = 1; l <= k; ++l) {
        if (entry.refuted) {
          if (entry.applicable(k, l))
            report.rows.push_back(verify_one_refuted(entry, k, l));
          continue;
        }
        auto claim = instantiate(entry, k, l);
        if (!claim) continue;
        tasks_by_k[k].push_back(Task{std::move(*claim), entry.source, k, l});
      }
    }
  }

  // Claims sharing k run in one enumeration pass; distinct k's in parallel.
  std::vector<std::pair<int, std::future<std::vector<std::optional<Counterexample>>>>> futures;
  std::vector<std::pair<int, std::vector<Task>>> ordered(tasks_by_k.begin(), tasks_by_k.end());
  for (auto& [k, tasks] : ordered) {
    SearchBudget b = budget ? *budget : SearchBudget::defaults(k);
    std::vector<CompetitivenessClaim> claims;
    for (const auto& t : tasks) claims.push_back(t.claim);
    if (threads > 1) {
      futures.emplace_back(k, std::async(std::launch::async, [claims, b] {
                             return verify_claims(claims, b);
                           }));
    } else {
      std::promise<std::vector<std::optional<Counterexample>>> p;
      p.set_value(verify_claims(claims, b));
      futures.emplace_back(k, p.get_future());
    }
  }
  for (std::size_t i = 0; i < futures.size(); ++i) {
    auto results = futures[i].second.get();
    const auto& tasks = ordered[i].second;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      CatalogReport::Row row;
      row.source = tasks[t].source;
      row.claim = tasks[t].claim.to_string();
      row.k = tasks[t].k;
      row.l = tasks[t].l;
      if (results[t]) {
        row.outcome = "counterexample";
        row.witness = format_sequence(results[t]->sigma);
        report.passed = false;
      } else {
        row.outcome = "no_counterexample";
      }
      report.rows.push_back(std::move(row));
    }
  }
  for (const auto& row : report.rows)
    if (row.outcome == "refutation_failed") report.passed = false;
  return report;
}

}  // namespace qcache
