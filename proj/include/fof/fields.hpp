#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace fof {

// The OpenFlow v1.0 12-tuple match fields, grouped by TCP/IP layer:
//   layer 1: ingress port
//   layer 2: Ethernet addresses, ethertype, VLAN tag and priority
//   layer 3: IP addresses, protocol, ToS
//   layer 4: transport ports
enum class FieldName : uint8_t {
  in_port = 0,
  eth_src,
  eth_dst,
  eth_type,
  vlan_id,
  vlan_pcp,
  ip_src,
  ip_dst,
  ip_proto,
  ip_tos,
  tp_src,
  tp_dst,
};

inline constexpr int kFieldCount = 12;
inline constexpr int kLayerCount = 4;

constexpr int field_index(FieldName f) { return static_cast<int>(f); }
constexpr FieldName field_from_index(int i) { return static_cast<FieldName>(i); }

inline constexpr std::array<FieldName, kFieldCount> kAllFields = {
    FieldName::in_port, FieldName::eth_src,  FieldName::eth_dst,
    FieldName::eth_type, FieldName::vlan_id, FieldName::vlan_pcp,
    FieldName::ip_src,  FieldName::ip_dst,   FieldName::ip_proto,
    FieldName::ip_tos,  FieldName::tp_src,   FieldName::tp_dst,
};

namespace detail {

inline constexpr std::array<int, kFieldCount> kFieldLayer = {
    1,              // in_port
    2, 2, 2, 2, 2,  // eth_src, eth_dst, eth_type, vlan_id, vlan_pcp
    3, 3, 3, 3,     // ip_src, ip_dst, ip_proto, ip_tos
    4, 4,           // tp_src, tp_dst
};

inline constexpr std::array<int, kFieldCount> kFieldBits = {
    16, 48, 48, 16, 12, 3, 32, 32, 8, 6, 16, 16,
};

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "in_port", "eth_src", "eth_dst", "eth_type", "vlan_id", "vlan_pcp",
    "ip_src",  "ip_dst",  "ip_proto", "ip_tos",  "tp_src",  "tp_dst",
};

}  // namespace detail

constexpr int field_layer(FieldName f) { return detail::kFieldLayer[field_index(f)]; }
constexpr int field_bits(FieldName f) { return detail::kFieldBits[field_index(f)]; }

// Largest value representable in the field's bit width.
constexpr uint64_t field_max(FieldName f) {
  return (uint64_t{1} << field_bits(f)) - 1;
}

constexpr std::string_view field_name(FieldName f) {
  return detail::kFieldNames[field_index(f)];
}

inline std::optional<FieldName> field_from_name(std::string_view name) {
  for (int i = 0; i < kFieldCount; ++i)
    if (detail::kFieldNames[i] == name) return field_from_index(i);
  return std::nullopt;
}

// Fields of one layer, in canonical field order.
inline std::span<const FieldName> layer_fields(int layer) {
  static constexpr std::array<FieldName, 1> l1 = {FieldName::in_port};
  static constexpr std::array<FieldName, 5> l2 = {
      FieldName::eth_src, FieldName::eth_dst, FieldName::eth_type,
      FieldName::vlan_id, FieldName::vlan_pcp};
  static constexpr std::array<FieldName, 4> l3 = {
      FieldName::ip_src, FieldName::ip_dst, FieldName::ip_proto,
      FieldName::ip_tos};
  static constexpr std::array<FieldName, 2> l4 = {FieldName::tp_src,
                                                  FieldName::tp_dst};
  switch (layer) {
    case 1: return l1;
    case 2: return l2;
    case 3: return l3;
    case 4: return l4;
    default: return {};
  }
}

// Number of fields a layer can contribute: 1, 5, 4, 2.
constexpr int layer_capacity(int layer) {
  constexpr std::array<int, kLayerCount + 1> cap = {0, 1, 5, 4, 2};
  return layer >= 1 && layer <= kLayerCount ? cap[layer] : 0;
}

}  // namespace fof
