#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fof/engines.hpp"
#include "fof/flow.hpp"
#include "fof/signature.hpp"

namespace fof {

namespace detail {

// Bounded draw independent of std::uniform_int_distribution, so the same
// seed yields the same stream on every platform.
inline uint64_t draw_below(std::mt19937_64& rng, uint64_t bound) {
  return uint64_t((static_cast<__uint128_t>(rng()) * bound) >> 64);
}

inline uint64_t draw_in(std::mt19937_64& rng, uint64_t lo, uint64_t hi) {
  return lo + draw_below(rng, hi - lo + 1);
}

}  // namespace detail

// Per-field inclusive upper bound on generated values. Narrow spaces raise
// the collision rate between rules and packets.
struct ValueSpace {
  std::array<uint64_t, kFieldCount> max_value{};

  static ValueSpace full() {
    ValueSpace vs;
    for (FieldName f : kAllFields) vs.max_value[field_index(f)] = field_max(f);
    return vs;
  }

  uint64_t max_for(FieldName f) const { return max_value[field_index(f)]; }
};

struct TableSpec {
  uint32_t entry_count = 0;
  std::vector<std::pair<LayerSignature, uint32_t>> class_profile;
  uint32_t priority_min = 0;
  uint32_t priority_max = 1000;
  ValueSpace values = ValueSpace::full();
  uint64_t seed = 0;
};

struct TraceSpec {
  uint32_t packet_count = 0;
  double target_hit_rate = 1.0;
  int tuple_length = 12;
  uint64_t seed = 0;
};

namespace detail {

// Chooses `count` distinct fields of one layer, uniformly over the layer's
// subsets of that size (partial Fisher-Yates on a scratch copy).
inline void choose_layer_fields(std::mt19937_64& rng, int layer, int count,
                                MatchFieldSet& out, const ValueSpace& values) {
  auto fields = layer_fields(layer);
  std::array<FieldName, 5> scratch{};
  std::copy(fields.begin(), fields.end(), scratch.begin());
  int n = int(fields.size());
  for (int k = 0; k < count; ++k) {
    int pick = k + int(draw_below(rng, uint64_t(n - k)));
    std::swap(scratch[k], scratch[pick]);
    FieldName f = scratch[k];
    out.set(f, draw_in(rng, 0, values.max_for(f)));
  }
}

}  // namespace detail

// Deterministic synthetic flow table: for each (signature, count) pair of
// the profile, emits count entries realizing exactly that signature, with
// ids 0..entry_count-1 in emission order and priorities drawn uniformly
// from [priority_min, priority_max].
inline FlowTable gen_table(const TableSpec& spec) {
  uint64_t profile_total = 0;
  for (const auto& [sig, count] : spec.class_profile) {
    if (!sig.valid())
      throw std::invalid_argument("infeasible signature in profile: " +
                                  signature_key(sig));
    profile_total += count;
  }
  if (profile_total != spec.entry_count)
    throw std::invalid_argument("profile counts sum to " +
                                std::to_string(profile_total) + ", expected " +
                                std::to_string(spec.entry_count));
  if (spec.priority_min > spec.priority_max)
    throw std::invalid_argument("empty priority range");

  std::mt19937_64 rng(spec.seed);
  FlowTable table;
  table.reserve(spec.entry_count);
  uint32_t next_id = 0;
  for (const auto& [sig, count] : spec.class_profile) {
    for (uint32_t k = 0; k < count; ++k) {
      FlowEntry entry;
      entry.id = next_id++;
      entry.priority = uint32_t(
          detail::draw_in(rng, spec.priority_min, spec.priority_max));
      for (int layer = 1; layer <= kLayerCount; ++layer)
        detail::choose_layer_fields(rng, layer, sig.count(layer), entry.match,
                                    spec.values);
      entry.action = "out:" + std::to_string(detail::draw_below(rng, 8));
      table.add(std::move(entry));
    }
  }
  return table;
}

namespace detail {

// Packet skeleton that is guaranteed to match `entry`: the entry's fields
// plus in_port, padded with random absent fields up to tuple_length.
inline PacketHeader packet_from_entry(std::mt19937_64& rng,
                                      const FlowEntry& entry,
                                      int tuple_length) {
  PacketHeader pkt;
  pkt.fields = entry.match;
  if (!pkt.fields.has(FieldName::in_port))
    pkt.fields.set(FieldName::in_port,
                   draw_in(rng, 0, field_max(FieldName::in_port)));
  while (pkt.fields.size() < tuple_length) {
    std::array<FieldName, kFieldCount> absent{};
    int n = 0;
    for (FieldName f : kAllFields)
      if (!pkt.fields.has(f)) absent[n++] = f;
    FieldName f = absent[draw_below(rng, uint64_t(n))];
    pkt.fields.set(f, draw_in(rng, 0, field_max(f)));
  }
  pkt.byte_len = uint32_t(draw_in(rng, 64, 1500));
  return pkt;
}

inline PacketHeader random_packet(std::mt19937_64& rng, int tuple_length) {
  PacketHeader pkt;
  pkt.fields.set(FieldName::in_port,
                 draw_in(rng, 0, field_max(FieldName::in_port)));
  while (pkt.fields.size() < tuple_length) {
    FieldName f = kAllFields[draw_below(rng, kFieldCount)];
    if (pkt.fields.has(f)) continue;
    pkt.fields.set(f, draw_in(rng, 0, field_max(f)));
  }
  pkt.byte_len = uint32_t(draw_in(rng, 64, 1500));
  return pkt;
}

inline bool any_match(const FlowTable& table, const PacketHeader& pkt) {
  for (const FlowEntry& e : table.entries())
    if (matches(e.match, pkt)) return true;
  return false;
}

}  // namespace detail

// Deterministic synthetic trace with an exact-by-construction hit/miss
// decision per packet: hit packets are derived from a uniformly chosen
// feasible entry, miss packets are perturbed templates verified to match no
// entry (rejection sampling, 100 perturbation attempts, then fresh random
// draws). Every packet carries exactly tuple_length present fields.
inline std::vector<PacketHeader> gen_packets(const FlowTable& table,
                                             const TraceSpec& spec) {
  if (table.empty()) throw std::invalid_argument("gen_packets: empty table");
  if (spec.tuple_length < 1 || spec.tuple_length > kFieldCount)
    throw std::invalid_argument("tuple_length out of 1..12");
  if (spec.target_hit_rate < 0.0 || spec.target_hit_rate > 1.0)
    throw std::invalid_argument("target_hit_rate out of [0,1]");

  // Entries a tuple_length-field packet can be derived from: the entry's
  // fields plus in_port must fit.
  std::vector<uint32_t> feasible;
  for (uint32_t pos = 0; pos < table.size(); ++pos) {
    const MatchFieldSet& m = table.entries()[pos].match;
    int required = m.size() + (m.has(FieldName::in_port) ? 0 : 1);
    if (required <= spec.tuple_length) feasible.push_back(pos);
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<PacketHeader> trace;
  trace.reserve(spec.packet_count);

  constexpr int kPerturbAttempts = 100;
  constexpr int kFreshAttempts = 1000;

  for (uint32_t i = 0; i < spec.packet_count; ++i) {
    double coin = double(detail::draw_below(rng, uint64_t{1} << 53)) /
                  double(uint64_t{1} << 53);
    bool want_hit = coin < spec.target_hit_rate;

    if (want_hit) {
      if (feasible.empty())
        throw std::invalid_argument(
            "no entry fits tuple_length " + std::to_string(spec.tuple_length));
      const FlowEntry& entry =
          table.entries()[feasible[detail::draw_below(rng, feasible.size())]];
      trace.push_back(detail::packet_from_entry(rng, entry, spec.tuple_length));
      continue;
    }

    bool placed = false;
    int perturb_attempts = feasible.empty() ? 0 : kPerturbAttempts;
    for (int attempt = 0; attempt < perturb_attempts && !placed; ++attempt) {
      const FlowEntry& entry =
          table.entries()[feasible[detail::draw_below(rng, feasible.size())]];
      PacketHeader pkt =
          detail::packet_from_entry(rng, entry, spec.tuple_length);
      // Flip one of the template's own match fields; padding fields do not
      // influence the template match.
      if (!entry.match.empty()) {
        std::array<FieldName, kFieldCount> present{};
        int n = 0;
        entry.match.for_each(
            [&](FieldName f, uint64_t) { present[n++] = f; });
        FieldName f = present[detail::draw_below(rng, uint64_t(n))];
        uint64_t old = pkt.fields.at(f);
        pkt.fields.set(f, (old + 1 + detail::draw_below(rng, field_max(f))) %
                              (field_max(f) + 1));
      }
      if (!detail::any_match(table, pkt)) {
        trace.push_back(std::move(pkt));
        placed = true;
      }
    }
    for (int attempt = 0; attempt < kFreshAttempts && !placed; ++attempt) {
      PacketHeader pkt = detail::random_packet(rng, spec.tuple_length);
      if (!detail::any_match(table, pkt)) {
        trace.push_back(std::move(pkt));
        placed = true;
      }
    }
    if (!placed)
      throw std::invalid_argument(
          "could not generate a miss packet; the table appears to match "
          "every packet of tuple_length " + std::to_string(spec.tuple_length));
  }
  return trace;
}

// Fraction of trace packets the table matches (linear scan).
inline double measure_empirical_hit_rate(const FlowTable& table,
                                         std::span<const PacketHeader> trace) {
  if (trace.empty())
    throw std::invalid_argument("empirical hit rate undefined for empty trace");
  size_t hits = 0;
  for (const PacketHeader& pkt : trace)
    if (detail::linear_find(table, pkt)) ++hits;
  return double(hits) / double(trace.size());
}

// Profile drawing one signature uniformly per entry over the 179 valid
// non-empty ones; kept unaggregated so emission order is the draw order.
// The all-wildcard signature is left out: a catch-all entry matches every
// packet, which makes any trace with misses ungenerable. Explicit profiles
// may still request the "0-0-0-0" class.
inline std::vector<std::pair<LayerSignature, uint32_t>> uniform_profile(
    uint32_t entry_count, uint64_t seed) {
  std::vector<LayerSignature> sigs;
  for (const LayerSignature& sig : all_valid_signatures())
    if (sig.sum() > 0) sigs.push_back(sig);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::pair<LayerSignature, uint32_t>> profile;
  profile.reserve(entry_count);
  for (uint32_t i = 0; i < entry_count; ++i)
    profile.emplace_back(sigs[detail::draw_below(rng, sigs.size())], 1u);
  return profile;
}

}  // namespace fof
