// Command-line front end: synthetic table/trace generation, signature
// classification reports, single-shot matching with counters, and the
// benchmark scenarios, all on top of the fof library.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fof/fof.hpp"

namespace {

using nlohmann::ordered_json;

std::vector<fof::EngineKind> parse_engine_list(const std::string& list) {
  std::vector<fof::EngineKind> engines;
  size_t start = 0;
  while (start <= list.size()) {
    size_t comma = list.find(',', start);
    std::string name = list.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    for (char& c : name)
      if (c == '-') c = '_';
    auto engine = fof::parse_engine(name);
    if (!engine)
      throw CLI::ValidationError("--engines", "unknown engine: " + name);
    engines.push_back(*engine);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (engines.empty())
    throw CLI::ValidationError("--engines", "at least one engine is required");
  return engines;
}

struct GenTableOpts {
  uint32_t entries = 0;
  std::string profile_path;
  bool uniform = false;
  uint64_t seed = 0;
  uint32_t priority_min = 0;
  uint32_t priority_max = 1000;
  std::string out;
};

void run_gen_table(const GenTableOpts& opts) {
  fof::TableSpec spec;
  spec.entry_count = opts.entries;
  spec.class_profile = opts.uniform
                           ? fof::uniform_profile(opts.entries, opts.seed)
                           : fof::load_profile_file(opts.profile_path);
  spec.priority_min = opts.priority_min;
  spec.priority_max = opts.priority_max;
  spec.seed = opts.seed;
  fof::save_table_file(fof::gen_table(spec), opts.out);
}

struct GenPacketsOpts {
  std::string table_path;
  uint32_t count = 0;
  double hit_rate_pct = 100.0;
  int tuple_length = 12;
  uint64_t seed = 0;
  std::string out;
};

void run_gen_packets(const GenPacketsOpts& opts) {
  fof::FlowTable table = fof::load_table_file(opts.table_path);
  fof::TraceSpec spec{opts.count, opts.hit_rate_pct / 100.0, opts.tuple_length,
                      opts.seed};
  fof::save_trace_file(fof::gen_packets(table, spec), opts.out);
}

struct ClassifyOpts {
  std::string table_path;
  std::string packets_path;
  std::string out;
};

void run_classify(const ClassifyOpts& opts) {
  fof::FlowTable table = fof::load_table_file(opts.table_path);
  fof::PreMatchIndex index = fof::build_index(table);
  fof::ClassStats stats = fof::class_stats(index);

  ordered_json report;
  report["table_size"] = index.source_table_size();
  report["class_count"] = index.class_count();

  ordered_json classes = ordered_json::object();
  for (const auto& [key, slot] : index.key_index()) {
    const auto& cls = index.classes()[slot];
    classes[key] = ordered_json{{"size", cls.ids.size()}, {"ids", cls.ids}};
  }
  report["classes"] = std::move(classes);

  ordered_json layers = ordered_json::object();
  for (int layer = 0; layer <= fof::kLayerCount; ++layer) {
    const auto& bucket = stats.layer(layer);
    layers[std::to_string(layer)] =
        ordered_json{{"count", bucket.count()}, {"ids", bucket.ids}};
  }
  report["layers"] = std::move(layers);

  if (!opts.packets_path.empty()) {
    auto trace = fof::load_trace_file(opts.packets_path);
    ordered_json packets = ordered_json::array();
    for (size_t i = 0; i < trace.size(); ++i) {
      std::string key = fof::signature_key(fof::extract_signature(trace[i]));
      const auto* cls = index.find_class(key);
      packets.push_back(ordered_json{
          {"index", i},
          {"key", key},
          {"known_class", cls != nullptr},
          {"class_size", cls ? cls->ids.size() : 0},
      });
    }
    report["packets"] = std::move(packets);
  }

  std::ofstream out(opts.out);
  if (!out) throw std::runtime_error("cannot open " + opts.out + " for writing");
  out << report.dump(2) << "\n";
}

struct MatchOpts {
  std::string table_path;
  std::string packets_path;
  std::string engine = "linear";
  std::string mode = "dominant";
  std::string out;
};

void run_match(const MatchOpts& opts) {
  fof::FlowTable table = fof::load_table_file(opts.table_path);
  auto trace = fof::load_trace_file(opts.packets_path);

  fof::PreMatchIndex index;
  std::vector<fof::TupleGroup> groups;
  fof::CandidateMode mode = opts.mode == "strict" ? fof::CandidateMode::strict
                                                  : fof::CandidateMode::dominant;
  if (opts.engine == "fopenflow") index = fof::build_index(table);
  if (opts.engine == "tuple-space") groups = fof::build_tuple_groups(table);

  std::unordered_map<uint32_t, size_t> pos_of_id;
  for (size_t pos = 0; pos < table.size(); ++pos)
    pos_of_id.emplace(table.entries()[pos].id, pos);

  std::ofstream out(opts.out);
  if (!out) throw std::runtime_error("cannot open " + opts.out + " for writing");

  uint64_t hits = 0;
  for (size_t i = 0; i < trace.size(); ++i) {
    const fof::PacketHeader& pkt = trace[i];
    std::optional<fof::MatchResult> result;
    if (opts.engine == "linear")
      result = fof::linear_match(table, pkt);
    else if (opts.engine == "tuple-space")
      result = fof::tuple_space_match(table, groups, pkt);
    else
      result = fof::fopenflow_match(index, table, pkt, mode);

    ordered_json rec;
    rec["packet"] = i;
    if (result) {
      ++hits;
      fof::apply_match(table.entries_mut()[pos_of_id.at(result->entry_id)], pkt);
      rec["result"] = "hit";
      rec["entry"] = result->entry_id;
      rec["priority"] = result->priority;
      rec["action"] = result->action;
      rec["hit_rate"] = result->hit_rate;
      rec["candidates_examined"] = result->candidates_examined;
    } else {
      rec["result"] = "MISS";
    }
    out << rec.dump() << "\n";
  }

  ordered_json counters = ordered_json::array();
  for (const fof::FlowEntry& e : table.entries()) {
    if (e.counters.packet_count == 0) continue;
    counters.push_back(ordered_json{{"id", e.id},
                                    {"packets", e.counters.packet_count},
                                    {"bytes", e.counters.byte_count}});
  }
  ordered_json summary;
  summary["summary"] = ordered_json{
      {"packets", trace.size()},
      {"hits", hits},
      {"misses", trace.size() - hits},
      {"hit_fraction",
       trace.empty() ? 0.0 : double(hits) / double(trace.size())},
      {"counters", std::move(counters)},
  };
  out << summary.dump() << "\n";
}

struct BenchOpts {
  std::string scenario;
  uint32_t entries = 10000;
  uint32_t trace = 100000;
  uint64_t seed = 0;
  std::string engines = "linear,tuple-space,fopenflow-strict,fopenflow-dominant";
  std::string profile_path;
  uint32_t priority_max = 1000;
  int tuple_length = -1;
  double hit_rate_pct = -1.0;
  uint32_t reps = 20;
  uint32_t warmup = 3;
  uint32_t passes = 10;
  std::string out;
};

void run_bench(const BenchOpts& opts) {
  fof::BenchConfig cfg;
  cfg.table_spec.entry_count = opts.entries;
  cfg.table_spec.class_profile =
      opts.profile_path.empty()
          ? fof::uniform_profile(opts.entries, opts.seed)
          : fof::load_profile_file(opts.profile_path);
  cfg.table_spec.priority_max = opts.priority_max;
  cfg.table_spec.seed = opts.seed;
  cfg.trace_size = opts.trace;
  cfg.warmup_iters = opts.warmup;
  cfg.measured_iters = opts.passes;
  cfg.seed = opts.seed;
  cfg.engines = parse_engine_list(opts.engines);

  fof::EngineContext ctx = fof::prepare_context(cfg.table_spec);
  std::cout << "table: " << ctx.table.size() << " entries, "
            << ctx.index.class_count() << " signature classes, "
            << ctx.groups.size() << " tuple groups\n";
  std::cout << "build time: index " << ctx.index_build_ns / 1e6
            << " ms, tuple groups " << ctx.groups_build_ns / 1e6 << " ms\n";

  std::vector<fof::BenchRecord> records;
  if (opts.scenario == "hit-rate") {
    if (opts.tuple_length < 0)
      throw CLI::ValidationError("--tuple-length",
                                 "required for --scenario hit-rate");
    std::vector<double> rates;
    for (int pct = 10; pct <= 100; pct += 10) rates.push_back(pct / 100.0);
    records = fof::sweep_hit_rate(cfg, opts.tuple_length, rates, &ctx);
  } else if (opts.scenario == "tuple-length") {
    if (opts.hit_rate_pct < 0)
      throw CLI::ValidationError("--hit-rate",
                                 "required for --scenario tuple-length");
    std::vector<int> lengths;
    for (int len = 1; len <= fof::kFieldCount; ++len) lengths.push_back(len);
    records = fof::sweep_tuple_length(cfg, opts.hit_rate_pct / 100.0, lengths,
                                      &ctx);
  } else {
    if (opts.tuple_length < 0 || opts.hit_rate_pct < 0)
      throw CLI::ValidationError(
          "--scenario", "stability requires --hit-rate and --tuple-length");
    records = fof::repeat_stability(cfg, opts.hit_rate_pct / 100.0,
                                    opts.tuple_length, opts.reps, &ctx);
  }

  fof::write_csv(records, opts.out);
  std::cout << "wrote " << records.size() << " records to " << opts.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fof: flow-table lookup engines (linear scan, tuple-space search, "
      "layered pre-match) with synthetic workloads and benchmarks"};
  app.require_subcommand(1);

  GenTableOpts gen_table_opts;
  auto* gen_table_cmd =
      app.add_subcommand("gen-table", "Generate a deterministic flow table");
  gen_table_cmd->add_option("--entries", gen_table_opts.entries, "Entry count")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* profile_opt = gen_table_cmd->add_option(
      "--profile", gen_table_opts.profile_path,
      "Class profile file (\"c1-c2-c3-c4:count\" per line)");
  profile_opt->check(CLI::ExistingFile);
  auto* uniform_flag = gen_table_cmd->add_flag(
      "--uniform", gen_table_opts.uniform,
      "Draw signatures uniformly over the valid non-empty ones");
  profile_opt->excludes(uniform_flag);
  gen_table_cmd->add_option("--seed", gen_table_opts.seed, "RNG seed");
  gen_table_cmd->add_option("--priority-min", gen_table_opts.priority_min,
                            "Lowest priority drawn");
  gen_table_cmd->add_option("--priority-max", gen_table_opts.priority_max,
                            "Highest priority drawn");
  gen_table_cmd->add_option("--out", gen_table_opts.out, "Output table file")
      ->required();
  gen_table_cmd->callback([&] {
    if (!gen_table_opts.uniform && gen_table_opts.profile_path.empty())
      throw CLI::ValidationError("gen-table",
                                 "one of --profile or --uniform is required");
    run_gen_table(gen_table_opts);
  });

  GenPacketsOpts gen_packets_opts;
  auto* gen_packets_cmd = app.add_subcommand(
      "gen-packets", "Generate a deterministic packet trace for a table");
  gen_packets_cmd
      ->add_option("--table", gen_packets_opts.table_path, "Table file")
      ->required()
      ->check(CLI::ExistingFile);
  gen_packets_cmd->add_option("--count", gen_packets_opts.count, "Packet count")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_packets_cmd
      ->add_option("--hit-rate", gen_packets_opts.hit_rate_pct,
                   "Target hit rate in percent")
      ->required()
      ->check(CLI::Range(0.0, 100.0));
  gen_packets_cmd
      ->add_option("--tuple-length", gen_packets_opts.tuple_length,
                   "Present fields per packet")
      ->required()
      ->check(CLI::Range(1, 12));
  gen_packets_cmd->add_option("--seed", gen_packets_opts.seed, "RNG seed");
  gen_packets_cmd->add_option("--out", gen_packets_opts.out, "Output trace file")
      ->required();
  gen_packets_cmd->callback([&] { run_gen_packets(gen_packets_opts); });

  ClassifyOpts classify_opts;
  auto* classify_cmd = app.add_subcommand(
      "classify", "Report signature classes and per-layer statistics");
  classify_cmd->add_option("--table", classify_opts.table_path, "Table file")
      ->required()
      ->check(CLI::ExistingFile);
  classify_cmd
      ->add_option("--packets", classify_opts.packets_path,
                   "Optional trace; adds per-packet signature keys")
      ->check(CLI::ExistingFile);
  classify_cmd->add_option("--out", classify_opts.out, "Output report (JSON)")
      ->required();
  classify_cmd->callback([&] { run_classify(classify_opts); });

  MatchOpts match_opts;
  auto* match_cmd = app.add_subcommand(
      "match", "Run one engine over a trace and report matches and counters");
  match_cmd->add_option("--table", match_opts.table_path, "Table file")
      ->required()
      ->check(CLI::ExistingFile);
  match_cmd->add_option("--packets", match_opts.packets_path, "Trace file")
      ->required()
      ->check(CLI::ExistingFile);
  match_cmd->add_option("--engine", match_opts.engine, "Lookup engine")
      ->required()
      ->check(CLI::IsMember({"linear", "tuple-space", "fopenflow"}));
  match_cmd
      ->add_option("--mode", match_opts.mode,
                   "Candidate-class mode (fopenflow only)")
      ->check(CLI::IsMember({"strict", "dominant"}));
  match_cmd->add_option("--out", match_opts.out, "Output results (JSON lines)")
      ->required();
  match_cmd->callback([&] { run_match(match_opts); });

  BenchOpts bench_opts;
  auto* bench_cmd =
      app.add_subcommand("bench", "Run a benchmark scenario and write CSV");
  bench_cmd->add_option("--scenario", bench_opts.scenario, "Scenario")
      ->required()
      ->check(CLI::IsMember({"hit-rate", "tuple-length", "stability"}));
  bench_cmd->add_option("--entries", bench_opts.entries, "Table size")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--trace", bench_opts.trace, "Trace size")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench_opts.seed, "RNG seed");
  bench_cmd->add_option("--engines", bench_opts.engines,
                        "Comma-separated engine list");
  bench_cmd
      ->add_option("--profile", bench_opts.profile_path,
                   "Class profile file (default: uniform signatures)")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--priority-max", bench_opts.priority_max,
                        "Highest priority drawn");
  bench_cmd
      ->add_option("--tuple-length", bench_opts.tuple_length,
                   "Tuple length (hit-rate and stability scenarios)")
      ->check(CLI::Range(1, 12));
  bench_cmd
      ->add_option("--hit-rate", bench_opts.hit_rate_pct,
                   "Hit rate in percent (tuple-length and stability scenarios)")
      ->check(CLI::Range(0.0, 100.0));
  bench_cmd->add_option("--reps", bench_opts.reps, "Stability repetitions")
      ->check(CLI::Range(2, 1000000));
  bench_cmd->add_option("--warmup", bench_opts.warmup, "Untimed passes");
  bench_cmd->add_option("--passes", bench_opts.passes, "Timed passes")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench_opts.out, "Output CSV file")->required();
  bench_cmd->callback([&] { run_bench(bench_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const fof::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
