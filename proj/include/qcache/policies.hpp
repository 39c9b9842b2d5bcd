#pragma once

#include <array>
#include <cassert>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcache/types.hpp"

namespace qcache {

enum class PolicyKind { Lru, Fifo, Mru };

const char* policy_name(PolicyKind p);
PolicyKind policy_from_name(const std::string& name);

enum class AccessOutcome : std::uint8_t { Hit, Miss };

namespace core {

// Raw step semantics shared by the state structs and the exhaustive search
// engine, which keeps states in flat buffers. All operate in place and
// return true on a hit.

constexpr std::uint32_t kEmptySlot = 0xffffffffu;

// lines[0..len) ordered most-recently-used first.
bool lru_step(std::uint32_t* lines, std::uint8_t& len, std::uint8_t k, std::uint32_t b);

// queue[0..len) ordered oldest-inserted first. A hit leaves the queue alone.
bool fifo_step(std::uint32_t* queue, std::uint8_t& len, std::uint8_t k, std::uint32_t b);

// blocks[i] == kEmptySlot marks an empty line; bits[i] is the use bit.
// A miss fills the lowest empty slot, else replaces the lowest line with a
// zero use bit. Setting the last zero bit (on hit or miss) triggers the
// global bit flip, leaving only the accessed line's bit set.
bool mru_step(std::uint32_t* blocks, std::uint8_t* bits, std::uint8_t k, std::uint32_t b);

}  // namespace core

struct LruState {
  int capacity = 1;
  std::vector<BlockId> lines;  // most-recently-used first, size <= capacity

  static LruState empty(int k) { return LruState{k, {}}; }
  bool contains(BlockId b) const;
  bool operator==(const LruState&) const = default;
};

struct FifoState {
  int capacity = 1;
  std::vector<BlockId> queue;  // oldest-inserted first, size <= capacity

  static FifoState empty(int k) { return FifoState{k, {}}; }
  bool contains(BlockId b) const;
  bool operator==(const FifoState&) const = default;
};

struct MruLine {
  BlockId block = 0;
  bool used = false;
  bool operator==(const MruLine&) const = default;
};

struct MruState {
  int capacity = 1;
  // Fixed array of capacity slots; nullopt marks an empty line (use bit 0).
  std::vector<std::optional<MruLine>> slots;

  static MruState empty(int k) {
    MruState s;
    s.capacity = k;
    s.slots.assign(static_cast<std::size_t>(k), std::nullopt);
    return s;
  }
  bool contains(BlockId b) const;
  bool operator==(const MruState&) const = default;
};

using PolicyState = std::variant<LruState, FifoState, MruState>;

PolicyState empty_state(PolicyKind p, int k);
PolicyKind state_kind(const PolicyState& s);
int state_capacity(const PolicyState& s);
bool state_contains(const PolicyState& s, BlockId b);

AccessOutcome step(PolicyState& s, BlockId b);

std::string format_state(const PolicyState& s);

// Stable byte encoding used for deduplication in reachable-state search.
std::string encode_state(const PolicyState& s);

}  // namespace qcache
