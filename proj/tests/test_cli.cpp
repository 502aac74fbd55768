// End-to-end checks of the offfsp binary: exit codes, artifact layout, and
// run determinism. The binary path comes in via OFFFSP_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = OFFFSP_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("offfsp_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

int run(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status < 0 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// report.csv minus the wall-clock timing columns (the only non-deterministic
// file content).
std::string semantic_report(const fs::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) {
    std::stringstream fields(line);
    std::string field;
    for (int i = 0; i < 4 && std::getline(fields, field, ','); ++i) {
      out += field + ',';
    }
    out += '\n';
  }
  return out;
}

void write_config(const fs::path& p, const std::string& body) {
  std::ofstream(p) << body;
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("no-such-command") == 1);
  CHECK(run("gen-expert --game rps --out /tmp/x") == 1);  // missing required
  CHECK(run("gen-expert --game rps --iterations 0 --out /tmp/x") == 1);
  CHECK(run("sample --game rps --recipe bogus --out /tmp/x.jsonl") == 1);
  CHECK(run("sample --game rps_asym --recipe d1 --out /tmp/x.jsonl") == 1);
  CHECK(run("eval --game rps") == 1);  // no input file selected
}

TEST_CASE("runtime errors exit with code 2") {
  CHECK(run("inspect --dataset /tmp/offfsp_cli_missing.jsonl") == 2);
  CHECK(run("eval --game rps --profile /tmp/offfsp_cli_missing.json") == 2);
}

TEST_CASE("gen-expert writes checkpoints and a curve") {
  TempDir dir;
  const auto out = (dir.path / "experts").string();
  REQUIRE(run("gen-expert --game kuhn --iterations 40 --every 20 --out " +
              out) == 0);
  CHECK(fs::exists(fs::path(out) / "expert_20.json"));
  CHECK(fs::exists(fs::path(out) / "expert_40.json"));
  const auto curve = slurp(fs::path(out) / "nashconv_curve.csv");
  CHECK(curve.rfind("iteration,nashconv\n", 0) == 0);
  CHECK(curve.find("\n40,") != std::string::npos);
}

TEST_CASE("sample + inspect + run round trip on rps d1") {
  TempDir dir;
  const auto data = (dir.path / "d1.jsonl").string();
  REQUIRE(run("sample --game rps --recipe d1 --out " + data) == 0);
  CHECK(fs::exists(data));
  CHECK(fs::exists(data + ".coverage.csv"));
  CHECK(run("inspect --dataset " + data) == 0);

  const auto config = dir.path / "run.json";
  write_config(config, R"({
    "game": "rps",
    "dataset": ")" + data + R"(",
    "iterations": 5,
    "eval_every": 5,
    "learner": {"algorithm": "cql", "steps": 32},
    "baselines": ["bc"],
    "seed": 7,
    "out": ")" + (dir.path / "out_a").string() + R"("
  })");
  REQUIRE(run("run --config " + config.string()) == 0);
  for (const char* artifact :
       {"report.csv", "store.json", "avg_profile.json", "baselines.csv",
        "baseline_bc.json", "final.json"}) {
    CHECK(fs::exists(dir.path / "out_a" / artifact));
  }
  const auto report = slurp(dir.path / "out_a" / "report.csv");
  CHECK(report.rfind("iteration,nashconv,", 0) == 0);

  // Same config, different --out: byte-identical store and identical report
  // up to wall-clock timings.
  REQUIRE(run("run --config " + config.string() + " --out " +
              (dir.path / "out_b").string()) == 0);
  CHECK(semantic_report(dir.path / "out_b" / "report.csv") ==
        semantic_report(dir.path / "out_a" / "report.csv"));
  CHECK(slurp(dir.path / "out_b" / "store.json") ==
        slurp(dir.path / "out_a" / "store.json"));

  // The store artifact evaluates cleanly.
  CHECK(run("eval --game rps --store " +
            (dir.path / "out_a" / "store.json").string() + " --out " +
            (dir.path / "eval.csv").string()) == 0);
  CHECK(slurp(dir.path / "eval.csv").rfind("nashconv,", 0) == 0);
}

TEST_CASE("config validation failures exit with code 1") {
  TempDir dir;
  const auto config = dir.path / "bad.json";
  write_config(config, R"({"game": "rps", "unknown_key": 1})");
  CHECK(run("run --config " + config.string()) == 1);

  write_config(config, R"({not json)");
  CHECK(run("run --config " + config.string()) == 1);

  // Dataset/game mismatch.
  const auto data = (dir.path / "d2.jsonl").string();
  REQUIRE(run("sample --game rps_asym --recipe d2 --out " + data) == 0);
  write_config(config, R"({"game": "rps", "dataset": ")" + data +
                           R"(", "iterations": 1, "out": ")" +
                           (dir.path / "o").string() + R"("})");
  CHECK(run("run --config " + config.string()) == 1);
}

TEST_CASE("mix recipe needs an expert only when the ratio is positive") {
  TempDir dir;
  const auto data = (dir.path / "mix0.jsonl").string();
  CHECK(run("sample --game kuhn --recipe mix:0 --n 50 --seed 3 --out " +
            data) == 0);
  CHECK(run("sample --game kuhn --recipe mix:0.5 --n 50 --seed 3 --out " +
            (dir.path / "mix5.jsonl").string()) == 2);  // missing --expert

  const auto experts = (dir.path / "experts").string();
  REQUIRE(run("gen-expert --game kuhn --iterations 20 --every 20 --out " +
              experts) == 0);
  CHECK(run("sample --game kuhn --recipe mix:0.5 --n 50 --seed 3 --expert " +
            experts + "/expert_20.json --out " +
            (dir.path / "mix5.jsonl").string()) == 0);
  CHECK(run("sample --game kuhn --recipe population:20 --n 50 --seed 3 "
            "--expert-dir " +
            experts + " --out " + (dir.path / "pop.jsonl").string()) == 0);
}
