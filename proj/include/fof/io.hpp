#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fof/flow.hpp"
#include "fof/signature.hpp"

namespace fof {

// Input errors carry the 1-based line number of the offending record.
class ParseError : public std::runtime_error {
 public:
  ParseError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline uint64_t field_value_from_json(size_t line, FieldName f,
                                      const nlohmann::json& v) {
  if (!v.is_number_unsigned())
    throw ParseError(line, "field " + std::string(field_name(f)) +
                               " must be an unsigned integer");
  uint64_t value = v.get<uint64_t>();
  if (value > field_max(f))
    throw ParseError(line, "value " + std::to_string(value) +
                               " exceeds width of " +
                               std::string(field_name(f)));
  return value;
}

inline FieldMap field_map_from_json(size_t line, const nlohmann::json& obj,
                                    const char* what) {
  if (!obj.is_object())
    throw ParseError(line, std::string(what) + " must be an object");
  FieldMap map;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    auto f = field_from_name(it.key());
    if (!f) throw ParseError(line, "unknown field name: " + it.key());
    map.set(*f, field_value_from_json(line, *f, it.value()));
  }
  return map;
}

inline ordered_json field_map_to_json(const FieldMap& map) {
  ordered_json obj = ordered_json::object();
  for (FieldName f : kAllFields)
    if (map.has(f)) obj[std::string(field_name(f))] = map.at(f);
  return obj;
}

inline uint64_t require_uint(size_t line, const nlohmann::json& obj,
                             const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(line, std::string("missing key: ") + key);
  if (!it->is_number_unsigned())
    throw ParseError(line, std::string(key) + " must be an unsigned integer");
  return it->get<uint64_t>();
}

inline nlohmann::json parse_record(size_t line, const std::string& text) {
  nlohmann::json rec = nlohmann::json::parse(text, nullptr, false);
  if (rec.is_discarded() || !rec.is_object())
    throw ParseError(line, "not a JSON object record");
  return rec;
}

}  // namespace detail

// Table files are newline-delimited JSON records:
//   {"id":0,"priority":10,"match":{"eth_type":2048},"action":"out:1"}
inline FlowTable load_table(std::istream& in) {
  FlowTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec = detail::parse_record(line_no, line);
    FlowEntry entry;
    entry.id = uint32_t(detail::require_uint(line_no, rec, "id"));
    entry.priority = uint32_t(detail::require_uint(line_no, rec, "priority"));
    auto match_it = rec.find("match");
    if (match_it == rec.end())
      throw ParseError(line_no, "missing key: match");
    entry.match = detail::field_map_from_json(line_no, *match_it, "match");
    auto action_it = rec.find("action");
    if (action_it == rec.end() || !action_it->is_string())
      throw ParseError(line_no, "action must be a string");
    entry.action = action_it->get<std::string>();
    try {
      table.add(std::move(entry));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return table;
}

inline void save_table(const FlowTable& table, std::ostream& out) {
  for (const FlowEntry& e : table.entries()) {
    detail::ordered_json rec;
    rec["id"] = e.id;
    rec["priority"] = e.priority;
    rec["match"] = detail::field_map_to_json(e.match);
    rec["action"] = e.action;
    out << rec.dump() << "\n";
  }
  if (!out) throw std::runtime_error("failed to write table stream");
}

// Trace files are newline-delimited JSON records:
//   {"header":{"in_port":3,"eth_type":2048},"len":64}
inline std::vector<PacketHeader> load_trace(std::istream& in) {
  std::vector<PacketHeader> trace;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec = detail::parse_record(line_no, line);
    PacketHeader pkt;
    auto header_it = rec.find("header");
    if (header_it == rec.end())
      throw ParseError(line_no, "missing key: header");
    pkt.fields = detail::field_map_from_json(line_no, *header_it, "header");
    pkt.byte_len = uint32_t(detail::require_uint(line_no, rec, "len"));
    try {
      pkt.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    trace.push_back(std::move(pkt));
  }
  return trace;
}

inline void save_trace(std::span<const PacketHeader> trace, std::ostream& out) {
  for (const PacketHeader& pkt : trace) {
    detail::ordered_json rec;
    rec["header"] = detail::field_map_to_json(pkt.fields);
    rec["len"] = pkt.byte_len;
    out << rec.dump() << "\n";
  }
  if (!out) throw std::runtime_error("failed to write trace stream");
}

// Class-profile files hold one "c1-c2-c3-c4:count" per line; blank lines
// and '#' comments are skipped.
inline std::vector<std::pair<LayerSignature, uint32_t>> load_profile(
    std::istream& in) {
  std::vector<std::pair<LayerSignature, uint32_t>> profile;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = line;
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t'))
      sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r'))
      sv.remove_suffix(1);
    if (sv.empty() || sv.front() == '#') continue;
    size_t colon = sv.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(line_no, "expected \"c1-c2-c3-c4:count\"");
    LayerSignature sig;
    try {
      sig = parse_signature_key(sv.substr(0, colon));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    uint64_t count = 0;
    std::string_view count_sv = sv.substr(colon + 1);
    auto [p, ec] = std::from_chars(count_sv.data(),
                                   count_sv.data() + count_sv.size(), count);
    if (ec != std::errc{} || p != count_sv.data() + count_sv.size())
      throw ParseError(line_no, "bad count: " + std::string(count_sv));
    profile.emplace_back(sig, uint32_t(count));
  }
  return profile;
}

// Convenience file-path wrappers.

inline FlowTable load_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_table(in);
}

inline void save_table_file(const FlowTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_table(table, out);
}

inline std::vector<PacketHeader> load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_trace(in);
}

inline void save_trace_file(std::span<const PacketHeader> trace,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_trace(trace, out);
}

inline std::vector<std::pair<LayerSignature, uint32_t>> load_profile_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_profile(in);
}

}  // namespace fof
