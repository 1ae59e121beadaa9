#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "srn_cli_out.txt";
  const std::string cmd =
      std::string(SRN_CLI_BIN) + " " + args + " > " + out.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream is(out);
  std::stringstream ss;
  ss << is.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "srn_cli_scratch";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream os(p);
  os << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kMmConfig = R"({
  "schema_version": 1,
  "seed": 5,
  "network": {"preset": "michaelis-menten"},
  "observable": {"species": "C", "threshold": 22},
  "regression": {"paths": 500, "dt": 0.0625},
  "forward": {"paths": 1000, "dt_list": [0.0625], "policy": "mp-mapped",
              "crude_baseline": false}
})";

}  // namespace

TEST_CASE("simulate writes one file per path with N data rows") {
  const auto dir = scratch_dir();
  write_file(dir / "cfg.json", kMmConfig);
  const auto r = run_cli("simulate -c " + (dir / "cfg.json").string() +
                         " --paths 10 --dt 0.0625 -o " + (dir / "paths").string());
  REQUIRE(r.exit_code == 0);

  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "paths")) {
    ++files;
    std::ifstream is(entry.path());
    std::string line;
    int data_rows = 0;
    while (std::getline(is, line))
      if (!line.empty() && line[0] != '#') ++data_rows;
    CHECK(data_rows == 16);  // N = T/dt = 16
  }
  CHECK(files == 10);
}

TEST_CASE("simulate is byte-identical for a fixed seed") {
  const auto dir = scratch_dir();
  write_file(dir / "cfg.json", kMmConfig);
  const std::string cfg = (dir / "cfg.json").string();
  REQUIRE(run_cli("simulate -c " + cfg + " --paths 3 -o " + (dir / "a").string())
              .exit_code == 0);
  REQUIRE(run_cli("simulate -c " + cfg + " --paths 3 -o " + (dir / "b").string())
              .exit_code == 0);
  for (int m = 0; m < 3; ++m) {
    char name[32];
    std::snprintf(name, sizeof(name), "path_%05d.csv", m);
    CHECK(read_file(dir / "a" / name) == read_file(dir / "b" / name));
  }
}

TEST_CASE("schema violations exit with the config code and name the key") {
  const auto dir = scratch_dir();
  write_file(dir / "missing.json", R"({
    "schema_version": 1,
    "network": {"preset": "michaelis-menten"},
    "observable": {"species": "C"}
  })");
  auto r = run_cli("pipeline -c " + (dir / "missing.json").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("threshold") != std::string::npos);

  write_file(dir / "unknown.json", R"({
    "schema_version": 1,
    "network": {"preset": "michaelis-menten"},
    "observable": {"species": "C", "threshold": 22},
    "fowrard": {}
  })");
  r = run_cli("pipeline -c " + (dir / "unknown.json").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("fowrard") != std::string::npos);
}

TEST_CASE("pipeline on the goutsias preset emits one summary row per dt") {
  const auto dir = scratch_dir();
  write_file(dir / "g.json", R"({
    "schema_version": 1,
    "seed": 3,
    "network": {"preset": "goutsias"},
    "observable": {"species": "D", "threshold": 8},
    "regression": {"paths": 1000, "dt": 0.0625},
    "forward": {"paths": 2000, "dt_list": [0.125, 0.0625], "policy": "mp-mapped",
                "crude_baseline": false}
  })");
  const auto r = run_cli("pipeline -c " + (dir / "g.json").string() + " -o " +
                         (dir / "run").string());
  REQUIRE(r.exit_code == 0);

  std::ifstream is(dir / "run" / "summary.csv");
  std::string line;
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);  // header + 2 dt rows
  CHECK(fs::exists(dir / "run" / "model.txt"));
  CHECK(fs::exists(dir / "run" / "grid.txt"));
  CHECK(fs::exists(dir / "run" / "provenance.json"));
  CHECK(fs::exists(dir / "run" / "manifest.json"));
  CHECK(fs::exists(dir / "run" / "is_dt_8.csv"));
}

TEST_CASE("reusing saved artifacts reproduces the summary bytes") {
  const auto dir = scratch_dir();
  write_file(dir / "cfg.json", kMmConfig);
  const std::string cfg = (dir / "cfg.json").string();
  REQUIRE(run_cli("pipeline -c " + cfg + " -o " + (dir / "r1").string())
              .exit_code == 0);
  REQUIRE(run_cli("pipeline -c " + cfg + " -o " + (dir / "r2").string() +
                  " --model " + (dir / "r1" / "model.txt").string() + " --grid " +
                  (dir / "r1" / "grid.txt").string())
              .exit_code == 0);
  CHECK(read_file(dir / "r1" / "summary.csv") ==
        read_file(dir / "r2" / "summary.csv"));
}

TEST_CASE("crude policy reduction factor is close to one") {
  const auto dir = scratch_dir();
  write_file(dir / "cfg.json", R"({
    "schema_version": 1,
    "seed": 5,
    "network": {"preset": "michaelis-menten"},
    "observable": {"species": "C", "threshold": 5},
    "forward": {"paths": 20000, "dt_list": [0.0625], "policy": "crude",
                "crude_baseline": false}
  })");
  const auto r = run_cli("pipeline -c " + (dir / "cfg.json").string() + " -o " +
                         (dir / "run").string());
  REQUIRE(r.exit_code == 0);

  // variance_reduction column of the single data row
  std::ifstream is(dir / "run" / "summary.csv");
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  std::stringstream hs(header), rs(row);
  std::string h, v;
  double reduction = 0.0;
  while (std::getline(hs, h, ',') && std::getline(rs, v, ','))
    if (h == "variance_reduction") reduction = std::stod(v);
  CHECK(reduction == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("validate runs the orthonormality suite") {
  const auto r = run_cli("validate --suite orthonormality --seed 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("[PASS] orthonormality") != std::string::npos);
  const auto bad = run_cli("validate --suite nonsense");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cost-model prints the work decomposition") {
  const auto r = run_cli(
      "cost-model --lambda 9 --paths 10000 --dt 0.0625 --reactions 3 "
      "--regressed 1 --species 4 --forward-paths 100000");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("w_gram_schmidt") != std::string::npos);
  CHECK(r.output.find("w_forward") != std::string::npos);
}

TEST_CASE("mp-fit writes a loadable model and distribution check") {
  const auto dir = scratch_dir();
  write_file(dir / "cfg.json", kMmConfig);
  const auto r = run_cli("mp-fit -c " + (dir / "cfg.json").string() +
                         " --model-out " + (dir / "m.txt").string() +
                         " --distribution-check 2000");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("total_variation") != std::string::npos);
  CHECK(fs::exists(dir / "m.txt"));

  // the model file round-trips through hjb-solve and is-run
  const auto r2 = run_cli("hjb-solve -c " + (dir / "cfg.json").string() +
                          " --model " + (dir / "m.txt").string() +
                          " --grid-out " + (dir / "g.txt").string());
  REQUIRE(r2.exit_code == 0);
  const auto r3 = run_cli("is-run -c " + (dir / "cfg.json").string() +
                          " --model " + (dir / "m.txt").string() + " --grid " +
                          (dir / "g.txt").string() + " -o " +
                          (dir / "fwd").string());
  REQUIRE(r3.exit_code == 0);
  CHECK(fs::exists(dir / "fwd" / "summary.csv"));
}
