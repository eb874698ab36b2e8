#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fof/fields.hpp"
#include "fof/flow.hpp"

namespace fof {

// Per-layer count of present fields: (c1, c2, c3, c4). Two field sets with
// equal signatures form one structure class regardless of which concrete
// fields or values they carry.
struct LayerSignature {
  std::array<uint8_t, kLayerCount> counts{};

  int count(int layer) const { return counts[layer - 1]; }

  int sum() const {
    return counts[0] + counts[1] + counts[2] + counts[3];
  }

  bool valid() const {
    for (int layer = 1; layer <= kLayerCount; ++layer)
      if (count(layer) > layer_capacity(layer)) return false;
    return true;
  }

  bool operator==(const LayerSignature&) const = default;
};

inline LayerSignature make_signature(int c1, int c2, int c3, int c4) {
  return LayerSignature{{uint8_t(c1), uint8_t(c2), uint8_t(c3), uint8_t(c4)}};
}

// Counts the present fields per layer, ignoring field values.
inline LayerSignature extract_signature(const FieldMap& fields) {
  LayerSignature sig;
  fields.for_each([&sig](FieldName f, uint64_t) {
    sig.counts[field_layer(f) - 1]++;
  });
  return sig;
}

inline LayerSignature extract_signature(const PacketHeader& pkt) {
  return extract_signature(pkt.fields);
}

// Canonical "c1-c2-c3-c4" form; injective over valid signatures.
inline std::string signature_key(const LayerSignature& sig) {
  std::string key;
  key.reserve(7);
  for (int layer = 1; layer <= kLayerCount; ++layer) {
    if (layer > 1) key.push_back('-');
    key += std::to_string(sig.count(layer));
  }
  return key;
}

inline LayerSignature parse_signature_key(std::string_view key) {
  LayerSignature sig;
  const char* p = key.data();
  const char* end = key.data() + key.size();
  for (int i = 0; i < kLayerCount; ++i) {
    if (i > 0) {
      if (p >= end || *p != '-')
        throw std::invalid_argument("malformed signature key: " + std::string(key));
      ++p;
    }
    unsigned value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || next == p)
      throw std::invalid_argument("malformed signature key: " + std::string(key));
    sig.counts[i] = uint8_t(value);
    p = next;
  }
  if (p != end || !sig.valid())
    throw std::invalid_argument("invalid signature key: " + std::string(key));
  return sig;
}

inline bool same_class(const LayerSignature& a, const LayerSignature& b) {
  return a == b;
}

// inner <= outer component-wise. A matching entry's signature is always
// dominated by the packet's signature.
inline bool dominates(const LayerSignature& outer, const LayerSignature& inner) {
  for (int i = 0; i < kLayerCount; ++i)
    if (inner.counts[i] > outer.counts[i]) return false;
  return true;
}

// Deepest layer with a nonzero count; 0 for the all-wildcard signature.
inline int deepest_layer(const LayerSignature& sig) {
  for (int layer = kLayerCount; layer >= 1; --layer)
    if (sig.count(layer) > 0) return layer;
  return 0;
}

// All 180 signatures admissible under the per-layer capacities, in
// lexicographic (c1, c2, c3, c4) order.
inline std::vector<LayerSignature> all_valid_signatures() {
  std::vector<LayerSignature> sigs;
  for (int c1 = 0; c1 <= layer_capacity(1); ++c1)
    for (int c2 = 0; c2 <= layer_capacity(2); ++c2)
      for (int c3 = 0; c3 <= layer_capacity(3); ++c3)
        for (int c4 = 0; c4 <= layer_capacity(4); ++c4)
          sigs.push_back(make_signature(c1, c2, c3, c4));
  return sigs;
}

}  // namespace fof
