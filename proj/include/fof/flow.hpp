#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "fof/fields.hpp"

namespace fof {

// Partial assignment of the 12 match fields. An absent field is a full
// wildcard; there are no per-bit masks. Present fields are tracked in a
// 12-bit mask, values of absent fields are kept at zero so that equality
// is plain member equality.
class FieldMap {
 public:
  bool has(FieldName f) const { return (mask_ >> field_index(f)) & 1u; }

  std::optional<uint64_t> find(FieldName f) const {
    if (!has(f)) return std::nullopt;
    return values_[field_index(f)];
  }

  // Value of a present field; throws if the field is absent.
  uint64_t at(FieldName f) const {
    if (!has(f))
      throw std::out_of_range("field not present: " +
                              std::string(field_name(f)));
    return values_[field_index(f)];
  }

  // Sets a field. Values must fit the field's bit width.
  FieldMap& set(FieldName f, uint64_t value) {
    if (value > field_max(f))
      throw std::out_of_range("value " + std::to_string(value) +
                              " exceeds width of " +
                              std::string(field_name(f)));
    mask_ |= uint16_t(1u << field_index(f));
    values_[field_index(f)] = value;
    return *this;
  }

  void erase(FieldName f) {
    mask_ &= uint16_t(~(1u << field_index(f)));
    values_[field_index(f)] = 0;
  }

  int size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }

  uint16_t present_mask() const { return mask_; }
  const std::array<uint64_t, kFieldCount>& raw_values() const { return values_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (uint16_t rest = mask_; rest != 0; rest &= uint16_t(rest - 1)) {
      int i = std::countr_zero(rest);
      fn(field_from_index(i), values_[i]);
    }
  }

  bool operator==(const FieldMap&) const = default;

 private:
  uint16_t mask_ = 0;
  std::array<uint64_t, kFieldCount> values_{};
};

using MatchFieldSet = FieldMap;

// Number of present (non-wildcard) fields.
inline int tuple_length(const FieldMap& m) { return m.size(); }

// A concrete packet header: present field values plus frame length in bytes.
// in_port is always present and byte_len is at least 1.
struct PacketHeader {
  FieldMap fields;
  uint32_t byte_len = 0;

  bool operator==(const PacketHeader&) const = default;

  void validate() const {
    if (!fields.has(FieldName::in_port))
      throw std::invalid_argument("packet lacks in_port");
    if (byte_len < 1) throw std::invalid_argument("packet byte_len must be >= 1");
  }
};

inline int tuple_length(const PacketHeader& p) { return p.fields.size(); }

struct Counters {
  uint64_t packet_count = 0;
  uint64_t byte_count = 0;

  bool operator==(const Counters&) const = default;
};

struct FlowEntry {
  uint32_t id = 0;
  uint32_t priority = 0;
  MatchFieldSet match;
  std::string action;
  Counters counters;

  bool operator==(const FlowEntry&) const = default;
};

// Ordered list of flow entries; insertion order is preserved and entry ids
// must be distinct.
class FlowTable {
 public:
  void add(FlowEntry entry) {
    if (!ids_.insert(entry.id).second)
      throw std::invalid_argument("duplicate flow entry id " +
                                  std::to_string(entry.id));
    entries_.push_back(std::move(entry));
  }

  const std::vector<FlowEntry>& entries() const { return entries_; }
  std::vector<FlowEntry>& entries_mut() { return entries_; }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  void reserve(size_t n) { entries_.reserve(n); }

 private:
  std::vector<FlowEntry> entries_;
  std::unordered_set<uint32_t> ids_;
};

namespace detail {

// Shared core of the match predicate, on raw mask/value storage.
inline bool matches_raw(uint16_t entry_mask,
                        const std::array<uint64_t, kFieldCount>& entry_values,
                        uint16_t pkt_mask,
                        const std::array<uint64_t, kFieldCount>& pkt_values) {
  if ((entry_mask & pkt_mask) != entry_mask) return false;
  for (uint16_t rest = entry_mask; rest != 0; rest &= uint16_t(rest - 1)) {
    int i = std::countr_zero(rest);
    if (entry_values[i] != pkt_values[i]) return false;
  }
  return true;
}

}  // namespace detail

// True iff every field the entry requires is present in the packet with an
// equal value. Absent entry fields are wildcards; an entry requiring a field
// the packet lacks does not match.
inline bool matches(const MatchFieldSet& entry_match, const FieldMap& pkt_fields) {
  return detail::matches_raw(entry_match.present_mask(), entry_match.raw_values(),
                             pkt_fields.present_mask(), pkt_fields.raw_values());
}

inline bool matches(const MatchFieldSet& entry_match, const PacketHeader& pkt) {
  return matches(entry_match, pkt.fields);
}

}  // namespace fof
