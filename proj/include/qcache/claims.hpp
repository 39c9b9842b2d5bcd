#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcache/policies.hpp"
#include "qcache/rational.hpp"
#include "qcache/simulate.hpp"
#include "qcache/types.hpp"

namespace qcache {

enum class ClaimMode { Miss, Hit, BlockMiss, BlockHit };

const char* claim_mode_name(ClaimMode m);
ClaimMode claim_mode_from_name(const std::string& name);

struct PolicyRef {
  PolicyKind kind = PolicyKind::Lru;
  int assoc = 1;
  bool operator==(const PolicyRef&) const = default;
};

// (r,c) relation between policy P (from an arbitrary state) and policy Q
// (always from its empty state):
//   Miss:      m_P(p,s)   <= r * m_Q(empty,s)   + c
//   Hit:       h_P(p,s)   >= r * h_Q(empty,s)   - c
//   BlockMiss: m_{P,b}(p,s) <= r * m_{Q,b}(empty,s) + c   for all b
//   BlockHit:  h_{P,b}(p,s) >= r * h_{Q,b}(empty,s) - c   for all b
struct CompetitivenessClaim {
  PolicyRef policy_p;
  PolicyRef policy_q;
  ClaimMode mode = ClaimMode::Miss;
  Rat r;
  Rat c;

  std::string to_string() const;
};

struct SearchBudget {
  int max_blocks = 0;
  int max_len = 0;
  int max_state_depth = 0;

  static SearchBudget defaults(int k) { return SearchBudget{k + 2, 10, 8}; }
};

struct Counterexample {
  AccessSequence sigma;
  PolicyState initial_state_p;
  std::optional<BlockId> block;
  long lhs = 0;
  Rat rhs;
};

struct ClaimCheck {
  bool holds = true;
  long lhs = 0;
  Rat rhs;
};

class MissingBlock : public std::invalid_argument {
 public:
  MissingBlock() : std::invalid_argument("block-focused claim needs a designated block") {}
};

class InvalidParams : public std::invalid_argument {
 public:
  explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluates the claim inequality on one instance; p must be a state of
// policy_p, Q starts from its empty state.
ClaimCheck check_claim(const CompetitivenessClaim& claim, const AccessSequence& sigma,
                       const PolicyState& p, std::optional<BlockId> block);

// Enumerates every sequence over a canonical block universe of size
// budget.max_blocks up to budget.max_len (up to block renaming), every
// reachable initial state of P within budget.max_state_depth, and (for the
// block modes) every block in the universe. Returns the first violation in
// deterministic (sequence, state, block) order, or nullopt.
std::optional<Counterexample> verify_exhaustive(const CompetitivenessClaim& claim,
                                                const SearchBudget& budget);

// Same, for many claims at once; claims sharing (policy_p) reuse one
// enumeration pass. Results aligned with the input.
std::vector<std::optional<Counterexample>> verify_claims(
    const std::vector<CompetitivenessClaim>& claims, const SearchBudget& budget);

// Sequence rho_1 ... rho_n with rho_i = <b, fillers...> where each rho uses
// l-1 fresh fillers. Block b is 0, fillers are 1,2,3,... Under LRU(l) only
// the first access to b misses; under FIFO(k) the misses to b grow with n.
AccessSequence fifo_block_miss_witness(int k, int l, int n);

// Sequence sigma_h such that MRU(k) started in `target` hits b zero times
// while LRU(l) started empty hits b exactly h times (l >= 3).
AccessSequence mru_block_hit_witness(int k, int l, const MruState& target, BlockId b, int h);

struct ClaimCatalogEntry {
  PolicyKind policy;
  ClaimMode mode;
  std::string source;  // stable tag for reports
  bool refuted = false;
  std::function<bool(int, int)> applicable;                  // (k, l)
  std::function<std::pair<Rat, Rat>(int, int)> factors;      // (r, c); positive entries only
};

// The full catalog of known (r,c) results, parameterized over (k,l):
// positive FIFO/MRU rows, the two refuted rows (carrying witness
// constructions), and the LRU stack-property rows.
const std::vector<ClaimCatalogEntry>& catalog();

std::optional<CompetitivenessClaim> instantiate(const ClaimCatalogEntry& entry, int k, int l);

// All positive claims applicable to policy(k) relative to LRU(l), l in 1..k.
std::vector<CompetitivenessClaim> applicable_claims(PolicyKind policy, int k);

// Line format: `P k Q l MODE r_num/r_den c_num/c_den`, '#' comments.
std::vector<CompetitivenessClaim> parse_claim_file(const std::string& text);
std::string format_claim_line(const CompetitivenessClaim& claim);

}  // namespace qcache
