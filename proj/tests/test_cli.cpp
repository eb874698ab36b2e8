#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fof/fof.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;

  TempDir() {
    path = fs::temp_directory_path() /
           ("fof_cli_test_" + std::to_string(std::rand()) + "_" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }

  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(FOF_CLI_PATH) + " " + args +
                    " >/dev/null 2>/dev/null";
  return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> read_json_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<json> records;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) records.push_back(json::parse(line));
  return records;
}

}  // namespace

TEST_CASE("gen-table is deterministic and validates its flags") {
  TempDir dir;
  std::string base = "gen-table --entries 40 --uniform --seed 11 --out ";
  REQUIRE(run_cli(base + dir.file("a.table")) == 0);
  REQUIRE(run_cli(base + dir.file("b.table")) == 0);
  CHECK(slurp(dir.file("a.table")) == slurp(dir.file("b.table")));

  CHECK(run_cli("gen-table --entries 0 --uniform --out " + dir.file("z.table")) != 0);
  CHECK(run_cli("gen-table --entries 5 --out " + dir.file("z.table")) != 0);
}

TEST_CASE("gen-table rejects a profile that does not sum to --entries") {
  TempDir dir;
  std::ofstream profile(dir.file("p.profile"));
  profile << "1-0-0-0:3\n";
  profile.close();
  CHECK(run_cli("gen-table --entries 5 --profile " + dir.file("p.profile") +
                " --out " + dir.file("t.table")) != 0);
  CHECK(run_cli("gen-table --entries 3 --profile " + dir.file("p.profile") +
                " --out " + dir.file("t.table")) == 0);
}

TEST_CASE("gen-packets is deterministic") {
  TempDir dir;
  REQUIRE(run_cli("gen-table --entries 30 --uniform --seed 2 --out " +
                  dir.file("t.table")) == 0);
  std::string base = "gen-packets --table " + dir.file("t.table") +
                     " --count 200 --hit-rate 50 --tuple-length 9 --seed 4 --out ";
  REQUIRE(run_cli(base + dir.file("a.trace")) == 0);
  REQUIRE(run_cli(base + dir.file("b.trace")) == 0);
  CHECK(slurp(dir.file("a.trace")) == slurp(dir.file("b.trace")));
}

TEST_CASE("classify groups the five reference sets") {
  TempDir dir;
  fof::save_table_file(fof::test::five_reference_table(), dir.file("t.table"));
  fof::PacketHeader full;
  for (fof::FieldName f : fof::kAllFields) full.fields.set(f, 1);
  full.byte_len = 64;
  fof::save_trace_file(std::vector<fof::PacketHeader>{full}, dir.file("p.trace"));

  REQUIRE(run_cli("classify --table " + dir.file("t.table") + " --packets " +
                  dir.file("p.trace") + " --out " + dir.file("report.json")) == 0);

  json report = json::parse(slurp(dir.file("report.json")));
  CHECK(report["table_size"] == 5);
  CHECK(report["class_count"] == 4);
  CHECK(report["classes"]["1-2-3-1"]["size"] == 2);
  CHECK(report["classes"]["1-2-3-1"]["ids"] == json::array({1, 5}));
  CHECK(report["classes"]["0-3-2-1"]["size"] == 1);
  CHECK(report["classes"]["1-1-1-1"]["size"] == 1);
  CHECK(report["classes"]["1-3-2-1"]["size"] == 1);
  CHECK(report["packets"][0]["key"] == "1-5-4-2");
  CHECK(report["packets"][0]["known_class"] == false);
}

TEST_CASE("match engines agree and conserve counters") {
  TempDir dir;
  REQUIRE(run_cli("gen-table --entries 60 --uniform --seed 5 --out " +
                  dir.file("t.table")) == 0);
  REQUIRE(run_cli("gen-packets --table " + dir.file("t.table") +
                  " --count 400 --hit-rate 70 --tuple-length 10 --seed 6 --out " +
                  dir.file("p.trace")) == 0);

  std::string common = "match --table " + dir.file("t.table") + " --packets " +
                       dir.file("p.trace");
  REQUIRE(run_cli(common + " --engine linear --out " + dir.file("linear.out")) == 0);
  REQUIRE(run_cli(common + " --engine tuple-space --out " + dir.file("ts.out")) == 0);
  REQUIRE(run_cli(common + " --engine fopenflow --mode dominant --out " +
                  dir.file("fof.out")) == 0);

  auto linear = read_json_lines(dir.file("linear.out"));
  auto ts = read_json_lines(dir.file("ts.out"));
  auto fof_out = read_json_lines(dir.file("fof.out"));
  REQUIRE(linear.size() == 401);  // 400 packets + summary
  REQUIRE(ts.size() == linear.size());
  REQUIRE(fof_out.size() == linear.size());

  for (size_t i = 0; i + 1 < linear.size(); ++i) {
    CHECK(linear[i]["result"] == ts[i]["result"]);
    CHECK(linear[i]["result"] == fof_out[i]["result"]);
    if (linear[i]["result"] == "hit") {
      CHECK(linear[i]["entry"] == ts[i]["entry"]);
      CHECK(linear[i]["entry"] == fof_out[i]["entry"]);
    }
  }

  // counter conservation against the trace file
  auto trace = fof::load_trace_file(dir.file("p.trace"));
  uint64_t hit_packets = 0, hit_bytes = 0;
  for (size_t i = 0; i + 1 < linear.size(); ++i) {
    if (linear[i]["result"] == "hit") {
      ++hit_packets;
      hit_bytes += trace[i].byte_len;
    }
  }
  const json& summary = linear.back()["summary"];
  CHECK(summary["hits"] == hit_packets);
  uint64_t counted_packets = 0, counted_bytes = 0;
  for (const json& c : summary["counters"]) {
    counted_packets += c["packets"].get<uint64_t>();
    counted_bytes += c["bytes"].get<uint64_t>();
  }
  CHECK(counted_packets == hit_packets);
  CHECK(counted_bytes == hit_bytes);
}

TEST_CASE("match on an empty trace writes the summary only") {
  TempDir dir;
  REQUIRE(run_cli("gen-table --entries 5 --uniform --seed 1 --out " +
                  dir.file("t.table")) == 0);
  std::ofstream(dir.file("empty.trace")).close();
  REQUIRE(run_cli("match --table " + dir.file("t.table") + " --packets " +
                  dir.file("empty.trace") + " --engine linear --out " +
                  dir.file("o.out")) == 0);
  auto lines = read_json_lines(dir.file("o.out"));
  REQUIRE(lines.size() == 1);
  CHECK(lines[0]["summary"]["packets"] == 0);
  CHECK(lines[0]["summary"]["hits"] == 0);
  CHECK(lines[0]["summary"]["hit_fraction"] == 0.0);
}

TEST_CASE("a single wildcard entry catches every packet") {
  TempDir dir;
  fof::save_table_file(
      fof::test::table_of(
          {fof::test::entry(0, 1, fof::MatchFieldSet{}, "punt")}),
      dir.file("t.table"));
  REQUIRE(run_cli("gen-packets --table " + dir.file("t.table") +
                  " --count 50 --hit-rate 100 --tuple-length 6 --seed 2 "
                  "--out " + dir.file("p.trace")) == 0);
  REQUIRE(run_cli("match --table " + dir.file("t.table") + " --packets " +
                  dir.file("p.trace") + " --engine fopenflow --out " +
                  dir.file("o.out")) == 0);
  auto lines = read_json_lines(dir.file("o.out"));
  REQUIRE(lines.size() == 51);
  for (size_t i = 0; i + 1 < lines.size(); ++i) {
    CHECK(lines[i]["result"] == "hit");
    CHECK(lines[i]["entry"] == 0);
    CHECK(lines[i]["action"] == "punt");
  }
  CHECK(lines.back()["summary"]["hit_fraction"] == 1.0);
}

TEST_CASE("the 60-entry profile reproduces its layer counts end to end") {
  TempDir dir;
  std::ofstream profile(dir.file("layers.profile"));
  profile << "1-0-0-0:7\n1-2-0-0:11\n0-3-0-0:10\n1-2-3-0:10\n"
          << "0-1-2-0:9\n1-2-3-1:7\n0-3-2-1:6\n";
  profile.close();
  REQUIRE(run_cli("gen-table --entries 60 --profile " +
                  dir.file("layers.profile") + " --seed 3 --out " +
                  dir.file("t.table")) == 0);
  REQUIRE(run_cli("classify --table " + dir.file("t.table") + " --out " +
                  dir.file("report.json")) == 0);
  json report = json::parse(slurp(dir.file("report.json")));
  CHECK(report["table_size"] == 60);
  CHECK(report["layers"]["1"]["count"] == 7);
  CHECK(report["layers"]["2"]["count"] == 21);
  CHECK(report["layers"]["3"]["count"] == 19);
  CHECK(report["layers"]["4"]["count"] == 13);
}

TEST_CASE("match rejects unknown engines and modes") {
  TempDir dir;
  REQUIRE(run_cli("gen-table --entries 5 --uniform --out " + dir.file("t.table")) == 0);
  REQUIRE(run_cli("gen-packets --table " + dir.file("t.table") +
                  " --count 5 --hit-rate 100 --tuple-length 12 --out " +
                  dir.file("p.trace")) == 0);
  std::string common = "match --table " + dir.file("t.table") + " --packets " +
                       dir.file("p.trace") + " --out " + dir.file("o.out");
  CHECK(run_cli(common + " --engine quantum") != 0);
  CHECK(run_cli(common + " --engine fopenflow --mode fuzzy") != 0);
}

TEST_CASE("bench stability writes a parsable CSV") {
  TempDir dir;
  REQUIRE(run_cli("bench --scenario stability --entries 30 --trace 100 "
                  "--hit-rate 50 --tuple-length 8 --reps 2 --warmup 0 "
                  "--passes 1 --engines linear,fopenflow-dominant --seed 3 "
                  "--out " + dir.file("bench.csv")) == 0);
  auto records = fof::read_csv(dir.file("bench.csv"));
  REQUIRE(records.size() == 4);  // 2 engines x 2 reps
  for (const auto& r : records) CHECK(r.scenario == fof::Scenario::stability);

  CHECK(run_cli("bench --scenario hit-rate --entries 10 --trace 10 --out " +
                dir.file("x.csv")) != 0);  // missing --tuple-length
}

TEST_CASE("bench sweeps cover the documented parameter grids") {
  TempDir dir;
  // short signatures keep every tuple length feasible
  std::ofstream profile(dir.file("p.profile"));
  profile << "1-0-0-0:2\n1-2-0-0:10\n0-1-1-0:8\n1-2-3-1:10\n";
  profile.close();

  REQUIRE(run_cli("bench --scenario hit-rate --tuple-length 10 --entries 30 "
                  "--trace 80 --warmup 0 --passes 1 --engines linear "
                  "--profile " + dir.file("p.profile") + " --seed 4 --out " +
                  dir.file("hr.csv")) == 0);
  auto hr = fof::read_csv(dir.file("hr.csv"));
  REQUIRE(hr.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(hr[i].param == 10.0 * (i + 1));

  REQUIRE(run_cli("bench --scenario tuple-length --hit-rate 100 --entries 30 "
                  "--trace 80 --warmup 0 --passes 1 --engines fopenflow-strict "
                  "--profile " + dir.file("p.profile") + " --seed 4 --out " +
                  dir.file("tl.csv")) == 0);
  auto tl = fof::read_csv(dir.file("tl.csv"));
  REQUIRE(tl.size() == 12);
  for (int i = 0; i < 12; ++i) CHECK(tl[i].param == double(i + 1));
}
