#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "essh/runner/cli.hpp"
#include "essh/runner/config.hpp"
#include "essh/runner/csv.hpp"
#include "essh/runner/output.hpp"

namespace fs = std::filesystem;
using essh::runner::cli_main;

namespace {

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("essh_cli_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& s) const { return path / s; }
};

struct Invocation {
  int status;
  std::string out;
  std::string err;
};

Invocation run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "essh");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

std::vector<std::string> second_line_fields(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::vector<std::string> fields;
  std::stringstream ls(line);
  for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
  return fields;
}

const std::vector<std::string> kWindingOne{"--v", "0.1", "--w", "0.6", "--nu", "0.28", "--mu", "0.38", "--gamma", "0"};
const std::vector<std::string> kPathStart{"--v", "0", "--w", "0.17", "--nu", "0.43", "--mu", "0.17", "--gamma", "0.37"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sha256 matches the standard test vectors") {
  CHECK(essh::runner::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(essh::runner::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv floats round-trip exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    const std::string s = essh::runner::format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(essh::runner::format_double(0.5) == "0.5");
  CHECK(essh::runner::format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("config survives a json round trip") {
  const auto doc = essh::runner::parse_json_text(R"({
    "kind": "path-study", "n_cells": 50, "params": {"v": 0.1, "w": 0.5},
    "study": [{"name": "A", "vary": "v", "endpoints": [0.3]}],
    "ripple_baseline": [1, 2], "seed": 9, "threads": 2
  })");
  const auto c = essh::runner::config_from_json(doc);
  const auto again = essh::runner::config_from_json(essh::runner::config_to_json(c));
  CHECK(essh::runner::config_to_json(again) == essh::runner::config_to_json(c));
  CHECK(again.params == c.params);
  CHECK(again.study.front().endpoints == std::vector<double>{0.3});
}

TEST_CASE("winding diagram of a C=1 set reports winding=1") {
  ScratchDir tmp("winding");
  const auto out = tmp / "run";
  const auto r = run_cli(concat({"winding-diagram", "--out", out.string()}, kWindingOne));
  REQUIRE(r.status == 0);
  CHECK(slurp(out / "winding.txt") == "winding=1\n");
  const std::string curve = slurp(out / "d_curve.csv");
  CHECK(curve.rfind("k,d_x,d_y\n", 0) == 0);
  CHECK(std::count(curve.begin(), curve.end(), '\n') == 4097);
}

TEST_CASE("classify-path on P1 gives 2,4,0") {
  ScratchDir tmp("classify");
  const auto out = tmp / "run";
  const auto r = run_cli(concat({"classify-path", "--vary", "v", "--from", "0", "--to", "0.2", "--out", out.string()},
                             kPathStart));
  REQUIRE(r.status == 0);
  const auto fields = second_line_fields(slurp(out / "classification.csv"));
  REQUIRE(fields.size() == 5);
  CHECK(fields[0] + "," + fields[1] + "," + fields[2] == "2,4,0");
  CHECK(fields[4] == "true");
}

TEST_CASE("malformed configs exit 1 and write nothing") {
  ScratchDir tmp("malformed");
  const auto out = tmp / "run";
  SUBCASE("negative k_points") {
    write_text(tmp / "c.json", R"({"thresholds": {"k_points": -5}})");
    const auto r = run_cli({"winding-diagram", "--config", (tmp / "c.json").string(), "--out", out.string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("/thresholds/k_points") != std::string::npos);
  }
  SUBCASE("negative k_points flag") {
    const auto r = run_cli({"winding-diagram", "--k-points", "-5", "--out", out.string()});
    CHECK(r.status == 1);
  }
  SUBCASE("unknown key") {
    write_text(tmp / "c.json", R"({"time": {"t_max": 10, "dt": 0.1}})");
    const auto r = run_cli({"quench", "--config", (tmp / "c.json").string(), "--out", out.string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("/time/dt: unknown key") != std::string::npos);
  }
  SUBCASE("syntax error names line and column") {
    write_text(tmp / "c.json", "{\n  \"n_cells\": 40,\n  \"params\": {\"v\": 0.1,}\n}");
    const auto r = run_cli({"quench", "--config", (tmp / "c.json").string(), "--out", out.string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("c.json:3:") != std::string::npos);
  }
  SUBCASE("chain too short") {
    const auto r = run_cli({"winding-diagram", "--gamma", "0.3", "--n-cells", "4", "--out", out.string()});
    CHECK(r.status == 1);
  }
  SUBCASE("unknown flag") {
    const auto r = run_cli({"winding-diagram", "--bogus", "1", "--out", out.string()});
    CHECK(r.status == 1);
  }
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("flags override the config file") {
  ScratchDir tmp("precedence");
  write_text(tmp / "c.json", R"({"params": {"v": 0.1, "w": 0.6, "nu": 0.28, "mu": 0.38}})");
  auto r = run_cli({"winding-diagram", "--config", (tmp / "c.json").string(), "--out", (tmp / "a").string()});
  REQUIRE(r.status == 0);
  CHECK(slurp(tmp / "a" / "winding.txt") == "winding=1\n");
  r = run_cli({"winding-diagram", "--config", (tmp / "c.json").string(), "--v", "2", "--out", (tmp / "b").string()});
  REQUIRE(r.status == 0);
  CHECK(slurp(tmp / "b" / "winding.txt") == "winding=0\n");
}

TEST_CASE("gapless winding diagram is a numerical failure with a manifest") {
  ScratchDir tmp("gapless");
  const auto r = run_cli({"winding-diagram", "--v", "0.5", "--w", "0.5", "--out", (tmp / "run").string()});
  CHECK(r.status == 2);
  const auto m = manifest(tmp / "run");
  CHECK(m["status"] == "failed");
  CHECK(m["failures"].size() == 1);
}

TEST_CASE("runs are deterministic and the manifest is complete") {
  ScratchDir tmp("determinism");
  const std::vector<std::string> args{"band-sweep", "--n-cells", "30", "--w", "0.5", "--nu", "0.2",
                                      "--vary",     "v",         "--from", "0", "--to", "1", "--steps", "9"};
  REQUIRE(run_cli(concat(args, {"--out", (tmp / "a").string(), "--threads", "1"})).status == 0);
  REQUIRE(run_cli(concat(args, {"--out", (tmp / "b").string(), "--threads", "3"})).status == 0);

  const auto m = manifest(tmp / "a");
  std::set<std::string> listed;
  for (const auto& f : m["files"]) {
    const std::string path = f["path"];
    listed.insert(path);
    const std::string bytes = slurp(tmp / "a" / path);
    CHECK(f["sha256"] == essh::runner::sha256_hex(bytes));
    CHECK(f["bytes"] == bytes.size());
  }
  std::set<std::string> present;
  for (const auto& e : fs::recursive_directory_iterator(tmp / "a")) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") {
      present.insert(fs::relative(e.path(), tmp / "a").generic_string());
    }
  }
  CHECK(listed == present);
  CHECK(listed.count("bands.csv") == 1);
  CHECK(slurp(tmp / "a" / "manifest.json") == slurp(tmp / "b" / "manifest.json"));
  CHECK(slurp(tmp / "a" / "bands.csv") == slurp(tmp / "b" / "bands.csv"));
}

TEST_CASE("rerunning into a previous run directory replaces it") {
  ScratchDir tmp("rerun");
  const auto out = (tmp / "run").string();
  REQUIRE(run_cli(concat({"winding-diagram", "--out", out}, kWindingOne)).status == 0);
  REQUIRE(run_cli({"classify-path", "--w", "1", "--vary", "v", "--from", "0.1", "--to", "0.5", "--out", out}).status ==
          0);
  CHECK_FALSE(fs::exists(tmp / "run" / "winding.txt"));
  CHECK(fs::exists(tmp / "run" / "classification.csv"));

  write_text(tmp / "run" / "notes.txt", "mine");
  CHECK(run_cli(concat({"winding-diagram", "--out", out}, kWindingOne)).status == 1);
  CHECK(slurp(tmp / "run" / "notes.txt") == "mine");
}

TEST_CASE("path-study isolates a gapless endpoint") {
  ScratchDir tmp("study");
  write_text(tmp / "c.json", R"({
    "n_cells": 40,
    "params": {"v": 0.2, "w": 0.5},
    "path": {"steps": 3},
    "time": {"t_max": 20, "t_points": 41},
    "study": [{"name": "ssh", "vary": "v", "endpoints": [0.35, 0.5, 0.7]}]
  })");
  const auto out = tmp / "run";
  const auto r = run_cli({"path-study", "--config", (tmp / "c.json").string(), "--out", out.string(), "--threads", "2"});
  CHECK(r.status == 2);
  const auto m = manifest(out);
  REQUIRE(m["failures"].size() == 1);
  CHECK(m["failures"][0]["scope"] == "ssh/v_0.5");
  CHECK(fs::exists(out / "ssh" / "v_0.35" / "survival.csv"));
  CHECK(fs::exists(out / "ssh" / "v_0.7" / "lightcone.csv"));
  CHECK_FALSE(fs::exists(out / "ssh" / "v_0.5"));

  const std::string summary = slurp(out / "summary.csv");
  CHECK(summary.find("ssh,v,0.35,1,1,0,") != std::string::npos);
  CHECK(summary.find("ssh,v,0.5,,,,,,,,failed") != std::string::npos);
  CHECK(summary.find("ssh,v,0.7,1,0,0,") != std::string::npos);
}

TEST_CASE("single-endpoint study matches a plain quench") {
  ScratchDir tmp("single");
  write_text(tmp / "s.json", R"({
    "n_cells": 30, "params": {"v": 0.2, "w": 0.5}, "path": {"steps": 2},
    "time": {"t_max": 10, "t_points": 21},
    "study": [{"name": "one", "vary": "v", "endpoints": [0.4]}]
  })");
  REQUIRE(run_cli({"path-study", "--config", (tmp / "s.json").string(), "--out", (tmp / "s").string()}).status == 0);
  REQUIRE(run_cli({"quench", "--n-cells", "30", "--w", "0.5", "--vary", "v", "--from", "0.2", "--to", "0.4", "--t-max",
                "10", "--t-points", "21", "--out", (tmp / "q").string()})
              .status == 0);
  CHECK(slurp(tmp / "s" / "one" / "v_0.4" / "survival.csv") == slurp(tmp / "q" / "survival.csv"));
  CHECK(slurp(tmp / "s" / "one" / "v_0.4" / "coefficients.csv") == slurp(tmp / "q" / "coefficients.csv"));
}

TEST_CASE("property-check passes with a fixed seed") {
  ScratchDir tmp("props");
  write_text(tmp / "p.json", R"({"trials": 5})");
  const auto r =
      run_cli({"property-check", "--config", (tmp / "p.json").string(), "--seed", "11", "--out", (tmp / "p").string()});
  CHECK(r.status == 0);
  const std::string csv = slurp(tmp / "p" / "properties.csv");
  CHECK(csv.find("fail") == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

}  // TEST_SUITE
