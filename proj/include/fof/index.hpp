#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "fof/flow.hpp"
#include "fof/signature.hpp"

namespace fof {

// Candidate-class selection: strict keeps only the class whose signature
// equals the packet's (signature-equality pre-match); dominant keeps every
// class whose signature is component-wise <= the packet's, which preserves
// exact equivalence with a linear scan in the presence of wildcard entries.
enum class CandidateMode { strict, dominant };

// Front table: signature class -> flow entries of that class. Built once
// from a flow table and immutable afterwards; lookups may share it freely
// across threads. Candidate match data is kept inline so class walks do not
// touch the source table.
class PreMatchIndex {
 public:
  struct Candidate {
    uint32_t priority = 0;
    uint32_t pos = 0;  // insertion index in the source table
    uint16_t match_mask = 0;
    std::array<uint64_t, kFieldCount> match_values{};
  };

  struct ClassEntry {
    std::string key;
    LayerSignature sig;
    uint32_t max_priority = 0;
    std::vector<uint32_t> ids;          // source-table insertion order
    std::vector<Candidate> candidates;  // priority desc, insertion asc
  };

  const std::vector<ClassEntry>& classes() const { return classes_; }

  // Keys in ascending lexicographic order with their class slot.
  const std::map<std::string, size_t>& key_index() const { return key_index_; }

  // Class walk order for lookups: max_priority desc, key asc.
  const std::vector<uint32_t>& walk_order() const { return walk_order_; }

  const ClassEntry* find_class(const std::string& key) const {
    auto it = key_index_.find(key);
    return it == key_index_.end() ? nullptr : &classes_[it->second];
  }

  size_t source_table_size() const { return source_table_size_; }
  size_t class_count() const { return classes_.size(); }

  friend PreMatchIndex build_index(const FlowTable& table);

 private:
  std::vector<ClassEntry> classes_;
  std::map<std::string, size_t> key_index_;
  std::vector<uint32_t> walk_order_;
  size_t source_table_size_ = 0;
};

// Groups every entry of the table into the class keyed by the signature of
// its match set. Every entry lands in exactly one class; within a class the
// id list keeps table insertion order.
inline PreMatchIndex build_index(const FlowTable& table) {
  PreMatchIndex index;
  index.source_table_size_ = table.size();

  std::unordered_set<uint32_t> seen_ids;
  for (size_t pos = 0; pos < table.size(); ++pos) {
    const FlowEntry& entry = table.entries()[pos];
    if (!seen_ids.insert(entry.id).second)
      throw std::invalid_argument("duplicate flow entry id " +
                                  std::to_string(entry.id) +
                                  " while building index");

    LayerSignature sig = extract_signature(entry.match);
    std::string key = signature_key(sig);
    auto [it, inserted] = index.key_index_.try_emplace(key, index.classes_.size());
    if (inserted) {
      PreMatchIndex::ClassEntry cls;
      cls.key = key;
      cls.sig = sig;
      index.classes_.push_back(std::move(cls));
    }
    PreMatchIndex::ClassEntry& cls = index.classes_[it->second];
    cls.ids.push_back(entry.id);
    cls.max_priority = std::max(cls.max_priority, entry.priority);
    cls.candidates.push_back(PreMatchIndex::Candidate{
        entry.priority, uint32_t(pos), entry.match.present_mask(),
        entry.match.raw_values()});
  }

  for (auto& cls : index.classes_) {
    std::sort(cls.candidates.begin(), cls.candidates.end(),
              [](const PreMatchIndex::Candidate& a,
                 const PreMatchIndex::Candidate& b) {
                if (a.priority != b.priority) return a.priority > b.priority;
                return a.pos < b.pos;
              });
  }

  index.walk_order_.reserve(index.classes_.size());
  for (uint32_t i = 0; i < index.classes_.size(); ++i)
    index.walk_order_.push_back(i);
  std::sort(index.walk_order_.begin(), index.walk_order_.end(),
            [&index](uint32_t a, uint32_t b) {
              const auto& ca = index.classes_[a];
              const auto& cb = index.classes_[b];
              if (ca.max_priority != cb.max_priority)
                return ca.max_priority > cb.max_priority;
              return ca.key < cb.key;
            });
  return index;
}

// Per-layer membership report: an entry belongs to the deepest layer its
// signature touches; all-wildcard entries are reported in a layer-0 bucket.
struct ClassStats {
  struct Bucket {
    std::vector<uint32_t> ids;  // ascending
    size_t count() const { return ids.size(); }
  };

  std::array<Bucket, kLayerCount + 1> layers;  // index 0 = all-wildcard
  size_t total = 0;

  const Bucket& layer(int l) const { return layers[l]; }
};

inline ClassStats class_stats(const PreMatchIndex& index) {
  ClassStats stats;
  stats.total = index.source_table_size();
  for (const auto& cls : index.classes()) {
    int layer = deepest_layer(cls.sig);
    auto& bucket = stats.layers[layer];
    bucket.ids.insert(bucket.ids.end(), cls.ids.begin(), cls.ids.end());
  }
  for (auto& bucket : stats.layers)
    std::sort(bucket.ids.begin(), bucket.ids.end());
  return stats;
}

// Keys of the classes a packet with the given signature may have to probe,
// in ascending lexicographic key order. Strict mode yields at most the one
// class with an equal signature; dominant mode yields every class whose
// signature the packet's dominates.
inline std::vector<std::string> candidate_classes(const LayerSignature& sig,
                                                  const PreMatchIndex& index,
                                                  CandidateMode mode) {
  std::vector<std::string> keys;
  if (mode == CandidateMode::strict) {
    std::string key = signature_key(sig);
    if (index.find_class(key) != nullptr) keys.push_back(std::move(key));
    return keys;
  }
  for (const auto& [key, slot] : index.key_index()) {
    if (dominates(sig, index.classes()[slot].sig)) keys.push_back(key);
  }
  return keys;
}

}  // namespace fof
