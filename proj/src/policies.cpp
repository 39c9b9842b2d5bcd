#include "qcache/policies.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qcache {

const char* policy_name(PolicyKind p) {
  switch (p) {
    case PolicyKind::Lru: return "LRU";
    case PolicyKind::Fifo: return "FIFO";
    case PolicyKind::Mru: return "MRU";
  }
  return "?";
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "LRU" || name == "lru") return PolicyKind::Lru;
  if (name == "FIFO" || name == "fifo") return PolicyKind::Fifo;
  if (name == "MRU" || name == "mru") return PolicyKind::Mru;
  throw std::invalid_argument("unknown policy: " + name);
}

namespace core {

bool lru_step(std::uint32_t* lines, std::uint8_t& len, std::uint8_t k, std::uint32_t b) {
  for (std::uint8_t i = 0; i < len; ++i) {
    if (lines[i] == b) {
      // Move to front; everything younger ages by one.
      for (std::uint8_t j = i; j > 0; --j) lines[j] = lines[j - 1];
      lines[0] = b;
      return true;
    }
  }
  std::uint8_t new_len = len < k ? static_cast<std::uint8_t>(len + 1) : k;
  for (std::uint8_t j = static_cast<std::uint8_t>(new_len - 1); j > 0; --j)
    lines[j] = lines[j - 1];
  lines[0] = b;
  len = new_len;
  return false;
}

bool fifo_step(std::uint32_t* queue, std::uint8_t& len, std::uint8_t k, std::uint32_t b) {
  for (std::uint8_t i = 0; i < len; ++i)
    if (queue[i] == b) return true;
  if (len < k) {
    queue[len++] = b;
  } else {
    for (std::uint8_t j = 0; j + 1 < k; ++j) queue[j] = queue[j + 1];
    queue[k - 1] = b;
  }
  return false;
}

bool mru_step(std::uint32_t* blocks, std::uint8_t* bits, std::uint8_t k, std::uint32_t b) {
  std::uint8_t pos = k;
  for (std::uint8_t i = 0; i < k; ++i) {
    if (blocks[i] == b) {
      pos = i;
      break;
    }
  }
  bool hit = pos < k;
  if (!hit) {
    // Lowest empty slot first, then lowest line with a zero use bit.
    for (std::uint8_t i = 0; i < k; ++i) {
      if (blocks[i] == kEmptySlot) {
        pos = i;
        break;
      }
    }
    if (pos == k) {
      for (std::uint8_t i = 0; i < k; ++i) {
        if (!bits[i]) {
          pos = i;
          break;
        }
      }
    }
    if (pos == k) pos = 0;  // k == 1 only: the flip left the single bit set
    blocks[pos] = b;
  }
  bits[pos] = 1;
  bool all_set = true;
  for (std::uint8_t i = 0; i < k; ++i) {
    if (blocks[i] == kEmptySlot || !bits[i]) {
      all_set = false;
      break;
    }
  }
  if (all_set && k > 1) {
    for (std::uint8_t i = 0; i < k; ++i) bits[i] = (i == pos) ? 1 : 0;
  }
  return hit;
}

}  // namespace core

bool LruState::contains(BlockId b) const {
  return std::find(lines.begin(), lines.end(), b) != lines.end();
}

bool FifoState::contains(BlockId b) const {
  return std::find(queue.begin(), queue.end(), b) != queue.end();
}

bool MruState::contains(BlockId b) const {
  for (const auto& s : slots)
    if (s && s->block == b) return true;
  return false;
}

PolicyState empty_state(PolicyKind p, int k) {
  if (k < 1) throw std::invalid_argument("associativity must be >= 1");
  switch (p) {
    case PolicyKind::Lru: return LruState::empty(k);
    case PolicyKind::Fifo: return FifoState::empty(k);
    case PolicyKind::Mru: return MruState::empty(k);
  }
  throw std::logic_error("bad policy kind");
}

PolicyKind state_kind(const PolicyState& s) {
  if (std::holds_alternative<LruState>(s)) return PolicyKind::Lru;
  if (std::holds_alternative<FifoState>(s)) return PolicyKind::Fifo;
  return PolicyKind::Mru;
}

int state_capacity(const PolicyState& s) {
  return std::visit([](const auto& st) { return st.capacity; }, s);
}

bool state_contains(const PolicyState& s, BlockId b) {
  return std::visit([b](const auto& st) { return st.contains(b); }, s);
}

namespace {

constexpr std::size_t kMaxScratch = 256;

}  // namespace

AccessOutcome step(PolicyState& s, BlockId b) {
  if (auto* lru = std::get_if<LruState>(&s)) {
    std::uint8_t k = static_cast<std::uint8_t>(lru->capacity);
    assert(lru->capacity <= static_cast<int>(kMaxScratch));
    std::uint32_t buf[kMaxScratch];
    std::uint8_t len = static_cast<std::uint8_t>(lru->lines.size());
    std::copy(lru->lines.begin(), lru->lines.end(), buf);
    bool hit = core::lru_step(buf, len, k, b);
    lru->lines.assign(buf, buf + len);
    return hit ? AccessOutcome::Hit : AccessOutcome::Miss;
  }
  if (auto* fifo = std::get_if<FifoState>(&s)) {
    std::uint8_t k = static_cast<std::uint8_t>(fifo->capacity);
    assert(fifo->capacity <= static_cast<int>(kMaxScratch));
    std::uint32_t buf[kMaxScratch];
    std::uint8_t len = static_cast<std::uint8_t>(fifo->queue.size());
    std::copy(fifo->queue.begin(), fifo->queue.end(), buf);
    bool hit = core::fifo_step(buf, len, k, b);
    fifo->queue.assign(buf, buf + len);
    return hit ? AccessOutcome::Hit : AccessOutcome::Miss;
  }
  auto& mru = std::get<MruState>(s);
  std::uint8_t k = static_cast<std::uint8_t>(mru.capacity);
  assert(mru.capacity <= static_cast<int>(kMaxScratch));
  std::uint32_t blocks[kMaxScratch];
  std::uint8_t bits[kMaxScratch];
  for (std::uint8_t i = 0; i < k; ++i) {
    if (mru.slots[i]) {
      blocks[i] = mru.slots[i]->block;
      bits[i] = mru.slots[i]->used ? 1 : 0;
    } else {
      blocks[i] = core::kEmptySlot;
      bits[i] = 0;
    }
  }
  bool hit = core::mru_step(blocks, bits, k, b);
  for (std::uint8_t i = 0; i < k; ++i) {
    if (blocks[i] == core::kEmptySlot)
      mru.slots[i] = std::nullopt;
    else
      mru.slots[i] = MruLine{blocks[i], bits[i] != 0};
  }
  return hit ? AccessOutcome::Hit : AccessOutcome::Miss;
}

std::string format_state(const PolicyState& s) {
  std::ostringstream os;
  if (const auto* lru = std::get_if<LruState>(&s)) {
    os << "LRU(" << lru->capacity << ")[";
    for (std::size_t i = 0; i < lru->lines.size(); ++i)
      os << (i ? "," : "") << lru->lines[i];
    os << "]";
  } else if (const auto* fifo = std::get_if<FifoState>(&s)) {
    os << "FIFO(" << fifo->capacity << ")[";
    for (std::size_t i = 0; i < fifo->queue.size(); ++i)
      os << (i ? "," : "") << fifo->queue[i];
    os << "]";
  } else {
    const auto& mru = std::get<MruState>(s);
    os << "MRU(" << mru.capacity << ")[";
    for (std::size_t i = 0; i < mru.slots.size(); ++i) {
      os << (i ? "," : "");
      if (mru.slots[i])
        os << mru.slots[i]->block << ":" << (mru.slots[i]->used ? 1 : 0);
      else
        os << "-";
    }
    os << "]";
  }
  return os.str();
}

std::string encode_state(const PolicyState& s) {
  std::string out;
  auto push32 = [&out](std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
  };
  if (const auto* lru = std::get_if<LruState>(&s)) {
    out.push_back('L');
    for (BlockId b : lru->lines) push32(b);
  } else if (const auto* fifo = std::get_if<FifoState>(&s)) {
    out.push_back('F');
    for (BlockId b : fifo->queue) push32(b);
  } else {
    const auto& mru = std::get<MruState>(s);
    out.push_back('M');
    for (const auto& slot : mru.slots) {
      if (slot) {
        push32(slot->block);
        out.push_back(slot->used ? 1 : 0);
      } else {
        push32(core::kEmptySlot);
        out.push_back(0);
      }
    }
  }
  return out;
}

}  // namespace qcache
