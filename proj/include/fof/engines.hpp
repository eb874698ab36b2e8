#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fof/flow.hpp"
#include "fof/index.hpp"
#include "fof/signature.hpp"

namespace fof {

struct MatchResult {
  uint32_t entry_id = 0;
  uint32_t priority = 0;
  std::string action;
  double hit_rate = 0.0;
  uint64_t candidates_examined = 0;  // diagnostic, engine-specific
};

// Fraction of the packet's present fields on which the entry agrees
// (present in both with equal value). The denominator is the packet's
// tuple length; a packet with no present fields has no defined rate.
inline double hit_rate(const PacketHeader& pkt, const FlowEntry& entry) {
  int den = tuple_length(pkt);
  if (den == 0) throw std::domain_error("hit rate undefined for empty packet");
  int num = 0;
  uint16_t both = uint16_t(entry.match.present_mask() & pkt.fields.present_mask());
  for (uint16_t rest = both; rest != 0; rest &= uint16_t(rest - 1)) {
    int i = std::countr_zero(rest);
    if (entry.match.raw_values()[i] == pkt.fields.raw_values()[i]) ++num;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

namespace detail {

// Internal hit representation used by the engine cores; result construction
// (action string, hit rate) happens only for the winner.
struct RawHit {
  uint32_t pos = 0;  // insertion index in the table
  uint32_t priority = 0;
  uint64_t examined = 0;
};

// Tie-break shared by all engines: priority desc, insertion index asc.
inline bool beats(uint32_t pri, uint32_t pos, const RawHit& best) {
  return pri > best.priority || (pri == best.priority && pos < best.pos);
}

inline std::optional<RawHit> linear_find(const FlowTable& table,
                                         const PacketHeader& pkt) {
  const uint16_t pkt_mask = pkt.fields.present_mask();
  const auto& pkt_values = pkt.fields.raw_values();
  std::optional<RawHit> best;
  const auto& entries = table.entries();
  for (uint32_t pos = 0; pos < entries.size(); ++pos) {
    const FlowEntry& e = entries[pos];
    if (!matches_raw(e.match.present_mask(), e.match.raw_values(), pkt_mask,
                     pkt_values))
      continue;
    if (!best || beats(e.priority, pos, *best))
      best = RawHit{pos, e.priority, 0};
  }
  if (best) best->examined = entries.size();
  return best;
}

inline MatchResult make_result(const FlowTable& table, const PacketHeader& pkt,
                               const RawHit& hit) {
  const FlowEntry& e = table.entries()[hit.pos];
  return MatchResult{e.id, e.priority, e.action, hit_rate(pkt, e),
                     hit.examined};
}

}  // namespace detail

// Baseline engine: full scan over the table; among all matching entries the
// highest-priority one wins, earliest insertion breaking ties.
inline std::optional<MatchResult> linear_match(const FlowTable& table,
                                               const PacketHeader& pkt) {
  auto hit = detail::linear_find(table, pkt);
  if (!hit) return std::nullopt;
  return detail::make_result(table, pkt, *hit);
}

// One tuple-space group: all entries sharing one present-field mask, hashed
// by their projected value vector.
struct TupleGroup {
  struct Slot {
    uint32_t priority = 0;
    uint32_t pos = 0;
  };

  // Projected value vector, inline so probes never allocate.
  struct ValueKey {
    std::array<uint64_t, kFieldCount> values{};
    uint8_t count = 0;

    bool operator==(const ValueKey& other) const {
      if (count != other.count) return false;
      for (int i = 0; i < count; ++i)
        if (values[i] != other.values[i]) return false;
      return true;
    }
  };

  struct ValueKeyHash {
    size_t operator()(const ValueKey& k) const {
      uint64_t h = 1469598103934665603ull;  // FNV-1a
      for (int i = 0; i < k.count; ++i) {
        h ^= k.values[i];
        h *= 1099511628211ull;
      }
      return size_t(h);
    }
  };

  uint16_t field_mask = 0;
  uint32_t max_priority = 0;
  std::unordered_map<ValueKey, std::vector<Slot>, ValueKeyHash> buckets;
};

namespace detail {

inline TupleGroup::ValueKey project(uint16_t mask,
                                    const std::array<uint64_t, kFieldCount>& values) {
  TupleGroup::ValueKey key;
  for (uint16_t rest = mask; rest != 0; rest &= uint16_t(rest - 1))
    key.values[key.count++] = values[std::countr_zero(rest)];
  return key;
}

}  // namespace detail

// One group per distinct present-field mask, ordered by descending group
// max priority so lookups can stop early. Bucket slots are kept in
// (priority desc, insertion asc) order.
inline std::vector<TupleGroup> build_tuple_groups(const FlowTable& table) {
  std::unordered_map<uint16_t, size_t> by_mask;
  std::vector<TupleGroup> groups;
  for (uint32_t pos = 0; pos < table.size(); ++pos) {
    const FlowEntry& e = table.entries()[pos];
    uint16_t mask = e.match.present_mask();
    auto [it, inserted] = by_mask.try_emplace(mask, groups.size());
    if (inserted) {
      groups.emplace_back();
      groups.back().field_mask = mask;
    }
    TupleGroup& g = groups[it->second];
    g.max_priority = std::max(g.max_priority, e.priority);
    g.buckets[detail::project(mask, e.match.raw_values())].push_back(
        TupleGroup::Slot{e.priority, pos});
  }
  for (auto& g : groups) {
    for (auto& [key, slots] : g.buckets)
      std::sort(slots.begin(), slots.end(),
                [](const TupleGroup::Slot& a, const TupleGroup::Slot& b) {
                  if (a.priority != b.priority) return a.priority > b.priority;
                  return a.pos < b.pos;
                });
  }
  std::sort(groups.begin(), groups.end(),
            [](const TupleGroup& a, const TupleGroup& b) {
              if (a.max_priority != b.max_priority)
                return a.max_priority > b.max_priority;
              return a.field_mask < b.field_mask;
            });
  return groups;
}

namespace detail {

inline std::optional<RawHit> tuple_space_find(std::span<const TupleGroup> groups,
                                              const PacketHeader& pkt) {
  const uint16_t pkt_mask = pkt.fields.present_mask();
  const auto& pkt_values = pkt.fields.raw_values();
  std::optional<RawHit> best;
  uint64_t examined = 0;
  for (const TupleGroup& g : groups) {
    // Groups are priority-sorted; ties can still improve on insertion
    // index, so only a strictly higher best ends the walk.
    if (best && best->priority > g.max_priority) break;
    if ((g.field_mask & pkt_mask) != g.field_mask) continue;
    auto it = g.buckets.find(project(g.field_mask, pkt_values));
    if (it == g.buckets.end()) continue;
    // Every slot in a probed bucket matches the packet by construction, and
    // slots are (priority desc, insertion asc): the first is the bucket winner.
    const TupleGroup::Slot& top = it->second.front();
    ++examined;
    if (!best || beats(top.priority, top.pos, *best))
      best = RawHit{top.pos, top.priority, 0};
  }
  if (best) best->examined = examined;
  return best;
}

}  // namespace detail

// Tuple-space search: probe each group whose mask the packet covers with an
// exact hash lookup. Chooses the same entry as linear_match on every input.
inline std::optional<MatchResult> tuple_space_match(
    const FlowTable& table, std::span<const TupleGroup> groups,
    const PacketHeader& pkt) {
  auto hit = detail::tuple_space_find(groups, pkt);
  if (!hit) return std::nullopt;
  return detail::make_result(table, pkt, *hit);
}

namespace detail {

inline std::optional<RawHit> fopenflow_find(const PreMatchIndex& index,
                                            const PacketHeader& pkt,
                                            CandidateMode mode) {
  const uint16_t pkt_mask = pkt.fields.present_mask();
  const auto& pkt_values = pkt.fields.raw_values();
  const LayerSignature sig = extract_signature(pkt);

  std::optional<RawHit> best;
  uint64_t examined = 0;

  auto scan_class = [&](const PreMatchIndex::ClassEntry& cls) {
    for (const PreMatchIndex::Candidate& cand : cls.candidates) {
      if (best && !beats(cand.priority, cand.pos, *best)) break;
      ++examined;
      if (matches_raw(cand.match_mask, cand.match_values, pkt_mask, pkt_values)) {
        best = RawHit{cand.pos, cand.priority, 0};
        break;  // candidates are (priority desc, insertion asc)
      }
    }
  };

  if (mode == CandidateMode::strict) {
    if (const auto* cls = index.find_class(signature_key(sig))) scan_class(*cls);
  } else {
    for (uint32_t slot : index.walk_order()) {
      const auto& cls = index.classes()[slot];
      if (best && best->priority > cls.max_priority) break;
      if (!dominates(sig, cls.sig)) continue;
      scan_class(cls);
    }
  }
  if (best) best->examined = examined;
  return best;
}

}  // namespace detail

// Layered pre-match pipeline: extract the packet's layer signature, select
// candidate classes from the front table, evaluate only those candidates,
// and return the highest-priority match. In dominant mode the chosen entry
// equals linear_match's on every input; strict mode is the pure
// signature-equality variant and may miss wildcard entries.
inline std::optional<MatchResult> fopenflow_match(
    const PreMatchIndex& index, const FlowTable& table, const PacketHeader& pkt,
    CandidateMode mode = CandidateMode::dominant) {
  auto hit = detail::fopenflow_find(index, pkt, mode);
  if (!hit) return std::nullopt;
  return detail::make_result(table, pkt, *hit);
}

// Counter update on a successful match: one more packet, byte_len more bytes.
inline const Counters& apply_match(FlowEntry& entry, const PacketHeader& pkt) {
  if (!matches(entry.match, pkt))
    throw std::logic_error("apply_match called with a non-matching entry");
  entry.counters.packet_count += 1;
  entry.counters.byte_count += pkt.byte_len;
  return entry.counters;
}

}  // namespace fof
