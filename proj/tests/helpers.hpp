#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fof/fof.hpp"

namespace fof::test {

inline MatchFieldSet fields(
    std::initializer_list<std::pair<FieldName, uint64_t>> assignments) {
  MatchFieldSet m;
  for (const auto& [f, v] : assignments) m.set(f, v);
  return m;
}

inline PacketHeader packet(
    std::initializer_list<std::pair<FieldName, uint64_t>> assignments,
    uint32_t byte_len = 64) {
  PacketHeader pkt;
  for (const auto& [f, v] : assignments) pkt.fields.set(f, v);
  pkt.byte_len = byte_len;
  return pkt;
}

inline FlowEntry entry(uint32_t id, uint32_t priority, MatchFieldSet match,
                       std::string action = "out:0") {
  FlowEntry e;
  e.id = id;
  e.priority = priority;
  e.match = std::move(match);
  e.action = std::move(action);
  return e;
}

inline FlowTable table_of(std::vector<FlowEntry> entries) {
  FlowTable t;
  for (auto& e : entries) t.add(std::move(e));
  return t;
}

// Five match sets realizing the per-layer counts (1,2,3,1), (0,3,2,1),
// (1,1,1,1), (1,3,2,1), (1,2,3,1). Sets 1 and 5 use different fields but
// share a signature.
inline std::vector<MatchFieldSet> five_reference_sets() {
  using F = FieldName;
  return {
      fields({{F::in_port, 1}, {F::eth_src, 0xa}, {F::eth_type, 0x800},
              {F::ip_src, 10}, {F::ip_dst, 20}, {F::ip_proto, 6},
              {F::tp_src, 80}}),
      fields({{F::eth_src, 0xb}, {F::eth_dst, 0xc}, {F::eth_type, 0x800},
              {F::ip_src, 30}, {F::ip_proto, 17}, {F::tp_dst, 53}}),
      fields({{F::in_port, 2}, {F::eth_type, 0x806}, {F::ip_proto, 6},
              {F::tp_dst, 443}}),
      fields({{F::in_port, 3}, {F::eth_src, 0xd}, {F::eth_dst, 0xe},
              {F::eth_type, 0x800}, {F::ip_src, 40}, {F::ip_dst, 50},
              {F::tp_src, 8080}}),
      fields({{F::in_port, 4}, {F::eth_dst, 0xf}, {F::vlan_id, 100},
              {F::ip_dst, 60}, {F::ip_proto, 6}, {F::ip_tos, 8},
              {F::tp_dst, 22}}),
  };
}

// The five reference sets as a table with entry ids 1..5.
inline FlowTable five_reference_table() {
  FlowTable t;
  uint32_t id = 1;
  for (auto& m : five_reference_sets()) {
    t.add(entry(id, 10 * id, std::move(m), "out:" + std::to_string(id)));
    ++id;
  }
  return t;
}

// Class profile for a 60-entry table with 7/21/19/13 entries whose deepest
// layers are 1/2/3/4.
inline std::vector<std::pair<LayerSignature, uint32_t>> sixty_entry_profile() {
  return {
      {make_signature(1, 0, 0, 0), 7},
      {make_signature(1, 2, 0, 0), 11},
      {make_signature(0, 3, 0, 0), 10},
      {make_signature(1, 2, 3, 0), 10},
      {make_signature(0, 1, 2, 0), 9},
      {make_signature(1, 2, 3, 1), 7},
      {make_signature(0, 3, 2, 1), 6},
  };
}

// Uniformly random packet with small values, biased to collide with tables
// generated from narrow value spaces.
inline PacketHeader random_small_packet(std::mt19937_64& rng, int max_extra = 11) {
  PacketHeader pkt;
  pkt.fields.set(FieldName::in_port, rng() % 4);
  int extra = int(rng() % uint64_t(max_extra + 1));
  for (int k = 0; k < extra; ++k) {
    FieldName f = kAllFields[rng() % kFieldCount];
    if (f == FieldName::in_port || pkt.fields.has(f)) continue;
    pkt.fields.set(f, rng() % 4);
  }
  pkt.byte_len = 64 + uint32_t(rng() % 1437);
  return pkt;
}

// Narrow value space so random rules and packets actually collide.
inline ValueSpace narrow_values(uint64_t cap = 3) {
  ValueSpace vs;
  for (FieldName f : kAllFields)
    vs.max_value[field_index(f)] = std::min(cap, field_max(f));
  return vs;
}

}  // namespace fof::test
