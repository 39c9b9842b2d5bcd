#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcache {

// Memory-block index. Blocks are opaque non-negative integers; the set a
// block maps to is block % nb_sets.
using BlockId = std::uint32_t;

using AccessSequence = std::vector<BlockId>;

struct SetAssocConfig {
  int nb_sets = 1;
  int assoc = 1;

  SetAssocConfig() = default;
  SetAssocConfig(int sets, int k) : nb_sets(sets), assoc(k) {
    if (sets < 1 || k < 1)
      throw std::invalid_argument("SetAssocConfig: nb_sets and assoc must be >= 1");
  }

  int set_of(BlockId b) const { return static_cast<int>(b % static_cast<BlockId>(nb_sets)); }
};

// Trace files: one decimal block id per line, '#' starts a comment.
AccessSequence parse_trace(const std::string& text);
std::string format_trace(const AccessSequence& seq);

std::string format_sequence(const AccessSequence& seq);  // "<a,b,c>" style, for reports

}  // namespace qcache
