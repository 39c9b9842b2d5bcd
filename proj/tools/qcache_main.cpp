// qcache: cache policy simulation, competitiveness verification, and
// IPET-based worst-case bounds for small programs.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcache/experiment.hpp"
#include "qcache/lru_analysis.hpp"

using namespace qcache;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

ProgramGraph load_program(const std::string& path) { return parse_program(read_file(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantitative cache analysis toolkit"};
  app.require_subcommand(1);

  // --- simulate ------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "simulate a trace under a replacement policy");
  std::string sim_policy = "LRU", sim_trace, sim_out;
  int sim_k = 2, sim_sets = 1;
  sim->add_option("--policy", sim_policy, "LRU, FIFO or MRU");
  sim->add_option("--k", sim_k, "associativity")->required();
  sim->add_option("--sets", sim_sets, "number of cache sets");
  sim->add_option("--trace", sim_trace, "trace file, one block id per line")->required();
  sim->add_option("--out", sim_out, "output CSV path (default stdout)");

  // --- verify-claims ---------------------------------------------------------
  auto* ver = app.add_subcommand("verify-claims", "exhaustively verify the claim catalog");
  int ver_kmax = 4, ver_blocks = 0, ver_len = 0, ver_depth = 0, ver_threads = 2;
  std::string ver_out, ver_claims_file;
  ver->add_option("--kmax", ver_kmax, "verify all k <= kmax, l <= k");
  ver->add_option("--budget-blocks", ver_blocks, "override: universe size");
  ver->add_option("--budget-len", ver_len, "override: max sequence length");
  ver->add_option("--budget-depth", ver_depth, "override: reachable-state depth");
  ver->add_option("--threads", ver_threads, "parallel claim groups");
  ver->add_option("--claims", ver_claims_file, "verify claims from a file instead of the catalog");
  ver->add_option("--out", ver_out, "report CSV path (default stdout)");

  // --- analyze ----------------------------------------------------------------
  auto* ana = app.add_subcommand("analyze", "worst-case cost/miss bounds for programs");
  std::vector<std::string> ana_programs;
  std::string ana_policy = "LRU", ana_config, ana_baseline = "lru-maymust-pers", ana_out, ana_lpdir,
              ana_config_file;
  int ana_k = 2, ana_sets = 1;
  long ana_hit = 1, ana_miss = 11;
  bool ana_oracle = false;
  bool f_block_miss = false, f_block_hit = false, f_miss = false, f_hit = false, f_all = false,
       f_lru_pers = false;
  std::string f_baseline;
  ana->add_option("--program", ana_programs, "program file(s)");
  ana->add_option("--config-file", ana_config_file, "key=value experiment description");
  ana->add_option("--policy", ana_policy, "policy under analysis");
  ana->add_option("--k", ana_k, "associativity");
  ana->add_option("--sets", ana_sets, "number of cache sets");
  ana->add_option("--config", ana_config, "analysis configuration (repeatable via commas)");
  ana->add_option("--baseline", ana_baseline, "normalization baseline configuration");
  ana->add_option("--hit-latency", ana_hit, "cycles per hit");
  ana->add_option("--miss-latency", ana_miss, "cycles per miss");
  ana->add_flag("--oracle", ana_oracle, "check bounds against exhaustive path simulation");
  ana->add_flag("--block-miss", f_block_miss, "block-miss competitiveness constraints");
  ana->add_flag("--block-hit", f_block_hit, "block-hit competitiveness constraints");
  ana->add_flag("--miss", f_miss, "miss competitiveness constraints");
  ana->add_flag("--hit", f_hit, "hit competitiveness constraints");
  ana->add_flag("--all-comp", f_all, "all competitiveness constraints");
  ana->add_flag("--lru-persistence", f_lru_pers, "LRU may/must + persistence analysis");
  ana->add_option("--baseline-mode", f_baseline, "allhit, allmiss, dm or dmpers");
  ana->add_option("--lp-dir", ana_lpdir, "emit LP files into this directory");
  ana->add_option("--out", ana_out, "table CSV path (default stdout)");

  // --- sweep ----------------------------------------------------------------
  auto* swp = app.add_subcommand("sweep", "vary k or nbsets over a value list");
  std::vector<std::string> swp_programs;
  std::string swp_policy = "LRU", swp_vary = "k", swp_values = "1,2,4", swp_config = "all-comp",
              swp_out;
  int swp_k = 2, swp_sets = 1;
  swp->add_option("--program", swp_programs, "program file(s)")->required();
  swp->add_option("--policy", swp_policy, "policy under analysis");
  swp->add_option("--vary", swp_vary, "k or sets");
  swp->add_option("--values", swp_values, "comma-separated values");
  swp->add_option("--config", swp_config, "analysis configuration");
  swp->add_option("--k", swp_k, "fixed associativity when varying sets");
  swp->add_option("--sets", swp_sets, "fixed set count when varying k");
  swp->add_option("--out", swp_out, "output CSV path (default stdout)");

  // --- emit-lp ----------------------------------------------------------------
  auto* elp = app.add_subcommand("emit-lp", "write the ILP for one program/configuration");
  std::string elp_program, elp_policy = "LRU", elp_config = "lru-maymust-pers", elp_out;
  int elp_k = 2, elp_sets = 1;
  long elp_hit = 1, elp_miss = 11;
  bool elp_json = false;
  elp->add_option("--program", elp_program, "program file")->required();
  elp->add_option("--policy", elp_policy, "policy under analysis");
  elp->add_option("--k", elp_k, "associativity");
  elp->add_option("--sets", elp_sets, "number of cache sets");
  elp->add_option("--config", elp_config, "analysis configuration");
  elp->add_option("--hit-latency", elp_hit, "cycles per hit");
  elp->add_option("--miss-latency", elp_miss, "cycles per miss");
  elp->add_flag("--json", elp_json, "dump the model as JSON instead of LP format");
  elp->add_option("--out", elp_out, "LP path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      AccessSequence seq = parse_trace(read_file(sim_trace));
      PolicyKind policy = policy_from_name(sim_policy);
      SetAssocConfig cfg(sim_sets, sim_k);
      std::vector<PolicyState> init;
      for (int s = 0; s < sim_sets; ++s) init.push_back(empty_state(policy, sim_k));
      SimResult r = simulate_set_assoc(cfg, init, seq);
      write_output(sim_out, sim_result_csv(r));
      return 0;
    }

    if (ver->parsed()) {
      if (!ver_claims_file.empty()) {
        auto claims = parse_claim_file(read_file(ver_claims_file));
        SearchBudget budget{ver_blocks > 0 ? ver_blocks : 4, ver_len > 0 ? ver_len : 8,
                            ver_depth > 0 ? ver_depth : 6};
        auto results = verify_claims(claims, budget);
        std::ostringstream os;
        os << "claim,budget,outcome,witness_sigma\n";
        bool all_ok = true;
        for (std::size_t i = 0; i < claims.size(); ++i) {
          os << format_claim_line(claims[i]) << "," << budget.max_blocks << "/" << budget.max_len
             << "/" << budget.max_state_depth << ",";
          if (results[i]) {
            os << "counterexample,\"" << format_sequence(results[i]->sigma) << "\"";
            all_ok = false;
          } else {
            os << "no_counterexample,";
          }
          os << "\n";
        }
        write_output(ver_out, os.str());
        return all_ok ? 0 : 1;
      }
      std::optional<SearchBudget> budget;
      if (ver_blocks > 0 && ver_len > 0 && ver_depth > 0)
        budget = SearchBudget{ver_blocks, ver_len, ver_depth};
      CatalogReport report = verify_catalog(ver_kmax, budget, ver_threads);
      write_output(ver_out, report.to_csv());
      return report.passed ? 0 : 1;
    }

    if (ana->parsed()) {
      ExperimentConfig cfg;
      if (!ana_config_file.empty()) cfg = parse_experiment_config(read_file(ana_config_file));
      for (const auto& p : ana_programs) cfg.program_files.push_back(p);
      if (ana->count("--policy")) cfg.policy = policy_from_name(ana_policy);
      if (ana->count("--k")) cfg.assoc = ana_k;
      if (ana->count("--sets")) cfg.nb_sets = ana_sets;
      if (ana->count("--hit-latency") || ana->count("--miss-latency"))
        cfg.latency = LatencyModel(ana_hit, ana_miss);
      if (ana->count("--baseline")) cfg.baseline = config_from_name(ana_baseline);
      if (ana_oracle) cfg.run_oracle = true;
      if (!ana_lpdir.empty()) cfg.lp_dir = ana_lpdir;
      if (!ana_config.empty()) {
        std::istringstream cs(ana_config);
        std::string tok;
        while (std::getline(cs, tok, ',')) cfg.configs.push_back(config_from_name(tok));
      }
      if (f_block_miss) cfg.configs.push_back(AnalysisConfig::BlockMiss);
      if (f_block_hit) cfg.configs.push_back(AnalysisConfig::BlockHit);
      if (f_miss) cfg.configs.push_back(AnalysisConfig::Miss);
      if (f_hit) cfg.configs.push_back(AnalysisConfig::Hit);
      if (f_all) cfg.configs.push_back(AnalysisConfig::AllComp);
      if (f_lru_pers) cfg.configs.push_back(AnalysisConfig::LruMayMustPers);
      if (!f_baseline.empty()) {
        if (f_baseline == "allhit") cfg.configs.push_back(AnalysisConfig::AllHit);
        else if (f_baseline == "allmiss") cfg.configs.push_back(AnalysisConfig::AllMiss);
        else if (f_baseline == "dm") cfg.configs.push_back(AnalysisConfig::DmMust);
        else if (f_baseline == "dmpers") cfg.configs.push_back(AnalysisConfig::DmMustPers);
        else throw std::runtime_error("unknown baseline mode " + f_baseline);
      }
      if (cfg.program_files.empty()) throw std::runtime_error("no programs given");
      ComparisonTable table = run_experiment(cfg);
      write_output(ana_out, table.to_csv());
      return table.any_unsound ? 1 : 0;
    }

    if (swp->parsed()) {
      PolicyKind policy = policy_from_name(swp_policy);
      AnalysisConfig ac = config_from_name(swp_config);
      std::ostringstream os;
      os << "program,vary,value,cost_bound,miss_bound\n";
      std::istringstream vs(swp_values);
      std::string tok;
      std::vector<int> values;
      while (std::getline(vs, tok, ',')) values.push_back(std::stoi(tok));
      for (const auto& file : swp_programs) {
        ProgramGraph g = load_program(file);
        for (int v : values) {
          int k = swp_vary == "k" ? v : swp_k;
          int sets = swp_vary == "sets" ? v : swp_sets;
          AnalysisOutcome out = analyze_program(g, policy, SetAssocConfig(sets, k), LatencyModel{}, ac);
          os << file << "," << swp_vary << "," << v << "," << out.cost_bound << ","
             << out.miss_bound << "\n";
        }
      }
      write_output(swp_out, os.str());
      return 0;
    }

    if (elp->parsed()) {
      ProgramGraph g = load_program(elp_program);
      AnalysisOutcome out = analyze_program(g, policy_from_name(elp_policy),
                                            SetAssocConfig(elp_sets, elp_k),
                                            LatencyModel(elp_hit, elp_miss),
                                            config_from_name(elp_config));
      write_output(elp_out, elp_json ? dump_model_json(out.model) : emit_lp(out.model));
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
