#include "qcache/simulate.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace qcache {

long SimResult::hits_to(BlockId b) const {
  auto it = per_block_hits.find(b);
  return it == per_block_hits.end() ? 0 : it->second;
}

long SimResult::misses_to(BlockId b) const {
  auto it = per_block_misses.find(b);
  return it == per_block_misses.end() ? 0 : it->second;
}

SimResult simulate(const PolicyState& initial, const AccessSequence& seq) {
  SimResult r;
  PolicyState s = initial;
  r.trace.reserve(seq.size());
  for (BlockId b : seq) {
    AccessOutcome o = step(s, b);
    r.trace.push_back(o);
    if (o == AccessOutcome::Hit) {
      ++r.hits;
      ++r.per_block_hits[b];
    } else {
      ++r.misses;
      ++r.per_block_misses[b];
    }
  }
  return r;
}

SimResult simulate_set_assoc(const SetAssocConfig& cfg,
                             const std::vector<PolicyState>& initial_per_set,
                             const AccessSequence& seq) {
  if (static_cast<int>(initial_per_set.size()) != cfg.nb_sets)
    throw std::invalid_argument("simulate_set_assoc: one initial state per set required");
  SimResult r;
  std::vector<PolicyState> sets = initial_per_set;
  r.trace.reserve(seq.size());
  for (BlockId b : seq) {
    AccessOutcome o = step(sets[static_cast<std::size_t>(cfg.set_of(b))], b);
    r.trace.push_back(o);
    if (o == AccessOutcome::Hit) {
      ++r.hits;
      ++r.per_block_hits[b];
    } else {
      ++r.misses;
      ++r.per_block_misses[b];
    }
  }
  return r;
}

std::vector<PolicyState> reachable_states(PolicyKind policy, int k,
                                          const std::vector<BlockId>& universe,
                                          int max_depth) {
  std::vector<PolicyState> result;
  std::unordered_set<std::string> seen;
  PolicyState init = empty_state(policy, k);
  result.push_back(init);
  seen.insert(encode_state(init));
  std::size_t frontier_begin = 0;
  for (int depth = 0; depth < max_depth; ++depth) {
    std::size_t frontier_end = result.size();
    if (frontier_begin == frontier_end) break;  // closed under step
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (BlockId b : universe) {
        PolicyState next = result[i];
        step(next, b);
        if (seen.insert(encode_state(next)).second) result.push_back(std::move(next));
      }
    }
    frontier_begin = frontier_end;
  }
  return result;
}

std::string sim_result_csv(const SimResult& r) {
  std::ostringstream os;
  os << "block,hits,misses\n";
  std::map<BlockId, std::pair<long, long>> rows;
  for (const auto& [b, h] : r.per_block_hits) rows[b].first = h;
  for (const auto& [b, m] : r.per_block_misses) rows[b].second = m;
  for (const auto& [b, hm] : rows)
    os << b << "," << hm.first << "," << hm.second << "\n";
  os << "total," << r.hits << "," << r.misses << "\n";
  return os.str();
}

AccessSequence parse_trace(const std::string& text) {
  AccessSequence seq;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": one access per line");
    try {
      unsigned long v = std::stoul(tok);
      seq.push_back(static_cast<BlockId>(v));
    } catch (const std::exception&) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": bad block id '" + tok + "'");
    }
  }
  return seq;
}

std::string format_trace(const AccessSequence& seq) {
  std::ostringstream os;
  for (BlockId b : seq) os << b << "\n";
  return os.str();
}

std::string format_sequence(const AccessSequence& seq) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? "," : "") << seq[i];
  os << ">";
  return os.str();
}

}  // namespace qcache
