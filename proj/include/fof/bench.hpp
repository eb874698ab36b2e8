#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fof/engines.hpp"
#include "fof/index.hpp"
#include "fof/workload.hpp"

namespace fof {

enum class Scenario { hit_rate_sweep, tuple_length_sweep, stability };

enum class EngineKind { linear, tuple_space, fopenflow_strict, fopenflow_dominant };

inline constexpr std::array<EngineKind, 4> kAllEngines = {
    EngineKind::linear, EngineKind::tuple_space, EngineKind::fopenflow_strict,
    EngineKind::fopenflow_dominant};

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::hit_rate_sweep: return "hit_rate_sweep";
    case Scenario::tuple_length_sweep: return "tuple_length_sweep";
    case Scenario::stability: return "stability";
  }
  return "?";
}

inline std::string_view to_string(EngineKind e) {
  switch (e) {
    case EngineKind::linear: return "linear";
    case EngineKind::tuple_space: return "tuple_space";
    case EngineKind::fopenflow_strict: return "fopenflow_strict";
    case EngineKind::fopenflow_dominant: return "fopenflow_dominant";
  }
  return "?";
}

inline std::optional<Scenario> parse_scenario(std::string_view s) {
  for (Scenario v : {Scenario::hit_rate_sweep, Scenario::tuple_length_sweep,
                     Scenario::stability})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

inline std::optional<EngineKind> parse_engine(std::string_view s) {
  for (EngineKind v : kAllEngines)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

struct BenchRecord {
  Scenario scenario = Scenario::hit_rate_sweep;
  EngineKind engine = EngineKind::linear;
  double param = 0.0;  // hit-rate percent, tuple length, or repetition index
  uint32_t repetition = 0;
  double time_per_packet_ns = 0.0;
  double empirical_hit_rate = 0.0;

  bool operator==(const BenchRecord&) const = default;
};

struct BenchConfig {
  TableSpec table_spec;
  uint32_t trace_size = 0;
  uint32_t warmup_iters = 3;
  uint32_t measured_iters = 10;
  uint64_t seed = 0;
  std::vector<EngineKind> engines{kAllEngines.begin(), kAllEngines.end()};
};

// Prebuilt lookup structures shared by all engines of a sweep. Build times
// are reported separately and never enter the per-packet figures.
struct EngineContext {
  FlowTable table;
  PreMatchIndex index;
  std::vector<TupleGroup> groups;
  double index_build_ns = 0.0;
  double groups_build_ns = 0.0;
};

namespace detail {

inline std::atomic<uint64_t> bench_sink{0};

inline double elapsed_ns(std::chrono::steady_clock::time_point t0,
                         std::chrono::steady_clock::time_point t1) {
  return double(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

struct PassStats {
  uint64_t hits = 0;
  uint64_t checksum = 0;
};

inline double median_of(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  return (n % 2 == 1) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace detail

inline EngineContext prepare_context(const TableSpec& spec) {
  EngineContext ctx;
  ctx.table = gen_table(spec);
  auto t0 = std::chrono::steady_clock::now();
  ctx.index = build_index(ctx.table);
  auto t1 = std::chrono::steady_clock::now();
  ctx.groups = build_tuple_groups(ctx.table);
  auto t2 = std::chrono::steady_clock::now();
  ctx.index_build_ns = detail::elapsed_ns(t0, t1);
  ctx.groups_build_ns = detail::elapsed_ns(t1, t2);
  return ctx;
}

namespace detail {

// One untimed-or-timed pass over the whole trace. Counters stay untouched;
// only hits and a winner checksum leave the loop.
inline PassStats run_pass(EngineKind engine, const EngineContext& ctx,
                          std::span<const PacketHeader> trace) {
  PassStats stats;
  auto account = [&stats](const std::optional<RawHit>& hit) {
    if (hit) {
      ++stats.hits;
      stats.checksum += hit->pos + 1;
    }
  };
  switch (engine) {
    case EngineKind::linear:
      for (const PacketHeader& pkt : trace) account(linear_find(ctx.table, pkt));
      break;
    case EngineKind::tuple_space:
      for (const PacketHeader& pkt : trace)
        account(tuple_space_find(ctx.groups, pkt));
      break;
    case EngineKind::fopenflow_strict:
      for (const PacketHeader& pkt : trace)
        account(fopenflow_find(ctx.index, pkt, CandidateMode::strict));
      break;
    case EngineKind::fopenflow_dominant:
      for (const PacketHeader& pkt : trace)
        account(fopenflow_find(ctx.index, pkt, CandidateMode::dominant));
      break;
  }
  return stats;
}

}  // namespace detail

struct TimingResult {
  double time_per_packet_ns = 0.0;
  double hit_fraction = 0.0;
};

// Runs warmup_iters untimed passes, then measured_iters timed passes over
// the whole trace; reports the median pass time divided by the trace length.
inline TimingResult time_engine(EngineKind engine, const EngineContext& ctx,
                                std::span<const PacketHeader> trace,
                                uint32_t warmup_iters, uint32_t measured_iters) {
  if (trace.empty()) throw std::invalid_argument("time_engine: empty trace");
  if (measured_iters < 1)
    throw std::invalid_argument("time_engine: measured_iters must be >= 1");

  detail::PassStats stats;
  for (uint32_t i = 0; i < warmup_iters; ++i) {
    stats = detail::run_pass(engine, ctx, trace);
    detail::bench_sink.fetch_add(stats.checksum, std::memory_order_relaxed);
  }
  std::vector<double> pass_ns;
  pass_ns.reserve(measured_iters);
  for (uint32_t i = 0; i < measured_iters; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    stats = detail::run_pass(engine, ctx, trace);
    detail::bench_sink.fetch_add(stats.checksum, std::memory_order_relaxed);
    auto t1 = std::chrono::steady_clock::now();
    pass_ns.push_back(detail::elapsed_ns(t0, t1));
  }
  return TimingResult{detail::median_of(pass_ns) / double(trace.size()),
                      double(stats.hits) / double(trace.size())};
}

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t trace_seed(uint64_t base, uint64_t scenario_tag, uint64_t step) {
  return splitmix64(base ^ splitmix64(scenario_tag * 1315423911ull + step));
}

}  // namespace detail

// One trace per hit rate at a fixed tuple length; every configured engine
// consumes the identical trace.
inline std::vector<BenchRecord> sweep_hit_rate(const BenchConfig& cfg,
                                               int tuple_length,
                                               std::span<const double> hit_rates,
                                               EngineContext* shared_ctx = nullptr) {
  EngineContext local;
  const EngineContext& ctx = shared_ctx ? *shared_ctx : local;
  if (!shared_ctx) local = prepare_context(cfg.table_spec);

  std::vector<BenchRecord> records;
  for (size_t step = 0; step < hit_rates.size(); ++step) {
    double rate = hit_rates[step];
    TraceSpec tspec{cfg.trace_size, rate, tuple_length,
                    detail::trace_seed(cfg.seed, 1, step)};
    auto trace = gen_packets(ctx.table, tspec);
    for (EngineKind engine : cfg.engines) {
      TimingResult r =
          time_engine(engine, ctx, trace, cfg.warmup_iters, cfg.measured_iters);
      records.push_back(BenchRecord{Scenario::hit_rate_sweep, engine,
                                    rate * 100.0, 0, r.time_per_packet_ns,
                                    r.hit_fraction});
    }
  }
  return records;
}

// One trace per tuple length at a fixed hit rate.
inline std::vector<BenchRecord> sweep_tuple_length(const BenchConfig& cfg,
                                                   double hit_rate,
                                                   std::span<const int> lengths,
                                                   EngineContext* shared_ctx = nullptr) {
  EngineContext local;
  const EngineContext& ctx = shared_ctx ? *shared_ctx : local;
  if (!shared_ctx) local = prepare_context(cfg.table_spec);

  std::vector<BenchRecord> records;
  for (size_t step = 0; step < lengths.size(); ++step) {
    TraceSpec tspec{cfg.trace_size, hit_rate, lengths[step],
                    detail::trace_seed(cfg.seed, 2, step)};
    auto trace = gen_packets(ctx.table, tspec);
    for (EngineKind engine : cfg.engines) {
      TimingResult r =
          time_engine(engine, ctx, trace, cfg.warmup_iters, cfg.measured_iters);
      records.push_back(BenchRecord{Scenario::tuple_length_sweep, engine,
                                    double(lengths[step]), 0,
                                    r.time_per_packet_ns, r.hit_fraction});
    }
  }
  return records;
}

// Times the same (table, trace) pair reps times per engine for dispersion
// analysis; param and repetition both carry the repetition index. Within a
// repetition the engines' passes are interleaved pass by pass, so every
// engine samples the same slow machine-state drift; each engine's figure is
// still the median of its own measured passes. Records come out grouped per
// engine.
inline std::vector<BenchRecord> repeat_stability(const BenchConfig& cfg,
                                                 double hit_rate,
                                                 int tuple_length, uint32_t reps,
                                                 EngineContext* shared_ctx = nullptr) {
  if (reps < 2) throw std::invalid_argument("repeat_stability: reps must be >= 2");
  if (cfg.measured_iters < 1)
    throw std::invalid_argument("repeat_stability: measured_iters must be >= 1");
  EngineContext local;
  const EngineContext& ctx = shared_ctx ? *shared_ctx : local;
  if (!shared_ctx) local = prepare_context(cfg.table_spec);

  TraceSpec tspec{cfg.trace_size, hit_rate, tuple_length,
                  detail::trace_seed(cfg.seed, 3, 0)};
  auto trace = gen_packets(ctx.table, tspec);
  if (trace.empty())
    throw std::invalid_argument("repeat_stability: empty trace");

  const size_t n_engines = cfg.engines.size();
  std::vector<std::vector<BenchRecord>> per_engine(n_engines);
  std::vector<double> hit_fraction(n_engines, 0.0);
  for (uint32_t rep = 0; rep < reps; ++rep) {
    for (uint32_t i = 0; i < cfg.warmup_iters; ++i) {
      for (size_t e = 0; e < n_engines; ++e) {
        auto stats = detail::run_pass(cfg.engines[e], ctx, trace);
        detail::bench_sink.fetch_add(stats.checksum, std::memory_order_relaxed);
      }
    }
    std::vector<std::vector<double>> pass_ns(n_engines);
    for (uint32_t i = 0; i < cfg.measured_iters; ++i) {
      for (size_t e = 0; e < n_engines; ++e) {
        auto t0 = std::chrono::steady_clock::now();
        auto stats = detail::run_pass(cfg.engines[e], ctx, trace);
        detail::bench_sink.fetch_add(stats.checksum, std::memory_order_relaxed);
        auto t1 = std::chrono::steady_clock::now();
        pass_ns[e].push_back(detail::elapsed_ns(t0, t1));
        hit_fraction[e] = double(stats.hits) / double(trace.size());
      }
    }
    for (size_t e = 0; e < n_engines; ++e) {
      double per_packet = detail::median_of(pass_ns[e]) / double(trace.size());
      per_engine[e].push_back(BenchRecord{Scenario::stability, cfg.engines[e],
                                          double(rep), rep, per_packet,
                                          hit_fraction[e]});
    }
  }
  std::vector<BenchRecord> records;
  for (auto& group : per_engine)
    records.insert(records.end(), group.begin(), group.end());
  return records;
}

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace detail

inline constexpr std::string_view kCsvHeader =
    "scenario,engine,param,repetition,time_per_packet_ns,empirical_hit_rate";

inline void write_csv(std::span<const BenchRecord> records, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const BenchRecord& r : records) {
    out << to_string(r.scenario) << ',' << to_string(r.engine) << ','
        << detail::format_double(r.param) << ',' << r.repetition << ','
        << detail::format_double(r.time_per_packet_ns) << ','
        << detail::format_double(r.empirical_hit_rate) << "\n";
  }
  if (!out) throw std::runtime_error("failed to write CSV stream");
}

inline void write_csv(std::span<const BenchRecord> records,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(records, out);
}

inline std::vector<BenchRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("bad CSV header");
  std::vector<BenchRecord> records;
  auto parse_number = [](std::string_view s, double& out_value) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out_value);
    return ec == std::errc{} && p == s.data() + s.size();
  };
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<std::string_view, 6> cols{};
    std::string_view rest = line;
    for (int c = 0; c < 6; ++c) {
      size_t comma = c < 5 ? rest.find(',') : std::string_view::npos;
      if (c < 5 && comma == std::string_view::npos)
        throw std::runtime_error("bad CSV row at line " + std::to_string(line_no));
      cols[c] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{}
                                             : rest.substr(comma + 1);
    }
    BenchRecord r;
    auto scenario = parse_scenario(cols[0]);
    auto engine = parse_engine(cols[1]);
    double rep = 0;
    if (!scenario || !engine || !parse_number(cols[2], r.param) ||
        !parse_number(cols[3], rep) ||
        !parse_number(cols[4], r.time_per_packet_ns) ||
        !parse_number(cols[5], r.empirical_hit_rate))
      throw std::runtime_error("bad CSV row at line " + std::to_string(line_no));
    r.scenario = *scenario;
    r.engine = *engine;
    r.repetition = uint32_t(rep);
    records.push_back(r);
  }
  return records;
}

inline std::vector<BenchRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

}  // namespace fof
