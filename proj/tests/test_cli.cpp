// End-to-end tests of the command-line binary: exit codes for usage,
// success, failure, and counterexample paths; file and manifest emission;
// byte-identical reruns; and config-file handling. Each case runs the real
// executable in a subprocess with a private output directory.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

fs::path scratch_root() {
  const fs::path dir = fs::temp_directory_path() / "fairprop_cli_tests";
  fs::create_directories(dir);
  return dir;
}

// A fresh directory per call so manifest appends never mix across cases.
fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir =
      scratch_root() / (tag + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path capture =
      scratch_root() / ("capture_" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(FAIRPROP_CLI_PATH) + " " + args + " > " +
                          capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int count_lines(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(static_cast<bool>(in));
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines;
}

std::string fixture(const std::string& name) {
  return (fs::path(FAIRPROP_FIXTURE_DIR) / name).string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("levelset --no-such-flag").exit_code == 2);
}

TEST_CASE("help exits with code 0") {
  const CliResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("levelset") != std::string::npos);
}

TEST_CASE("unknown identifiers are config errors") {
  CHECK(run_cli("levelset --reg nope --lambda 0.5 --res 5").exit_code == 2);
  CHECK(run_cli("sweep --mode bogus").exit_code == 2);
  CHECK(run_cli("sweep --mode lambda --trials 2").exit_code == 2);
}

TEST_CASE("levelset writes rasters and manifest records") {
  const fs::path dir = fresh_dir("levelset");
  const CliResult r = run_cli("--out-dir " + dir.string() +
                              " levelset --reg dp --lambda 0.5 --res 21"
                              " --format both");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "dp_0.5_21.csv"));
  CHECK(fs::exists(dir / "dp_0.5_21.pgm"));
  REQUIRE(fs::exists(dir / "manifest.jsonl"));
  CHECK(count_lines(dir / "manifest.jsonl") == 2);
  const std::string manifest = read_file(dir / "manifest.jsonl");
  CHECK(manifest.find("\"command\":\"levelset\"") != std::string::npos);
  CHECK(manifest.find("\"tie_cells\"") != std::string::npos);

  const std::string pgm = read_file(dir / "dp_0.5_21.pgm");
  REQUIRE(pgm.size() >= 2);
  CHECK(pgm[0] == 'P');
  CHECK(pgm[1] == '5');
}

TEST_CASE("levelset reruns are byte identical") {
  const fs::path dir_a = fresh_dir("rerun_a");
  const fs::path dir_b = fresh_dir("rerun_b");
  const std::string args = " levelset --reg eeo --lambda 0.3 --res 21";
  CHECK(run_cli("--out-dir " + dir_a.string() + " --jobs 3" + args)
            .exit_code == 0);
  CHECK(run_cli("--out-dir " + dir_b.string() + args).exit_code == 0);
  CHECK(read_file(dir_a / "eeo_0.3_21.csv") ==
        read_file(dir_b / "eeo_0.3_21.csv"));
}

TEST_CASE("config files fill options that flags then override") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "levelset.ini";
  {
    std::ofstream out(cfg);
    out << "reg=dp\nres=7\nformat=csv\n";
  }
  const CliResult from_file =
      run_cli("--out-dir " + dir.string() + " levelset --config " +
              cfg.string() + " --lambda 0.5");
  CHECK(from_file.exit_code == 0);
  CHECK(fs::exists(dir / "dp_0.5_7.csv"));

  const CliResult overridden =
      run_cli("--out-dir " + dir.string() + " levelset --config " +
              cfg.string() + " --lambda 0.5 --res 11");
  CHECK(overridden.exit_code == 0);
  CHECK(fs::exists(dir / "dp_0.5_11.csv"));
}

TEST_CASE("equiv reports counterexamples with exit 3") {
  const CliResult r = run_cli(
      "equiv --reg dp --lambda 0.3 --grid-step 0.25 --samples 5 --seed 42");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("equivalent: no") != std::string::npos);
  CHECK(r.output.find("gamma=") != std::string::npos);
}

TEST_CASE("equiv passes for group-blind regularizers with exit 0") {
  const CliResult r = run_cli(
      "equiv --reg bgl --lambda 0.5 --grid-step 0.2 --samples 5 --seed 42");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("equivalent: yes") != std::string::npos);
}

TEST_CASE("check nonenforcing suite passes") {
  const CliResult r = run_cli("check --suite nonenforcing --seed 42");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("all checks passed") != std::string::npos);
  CHECK(r.output.find("reg=none -> nonenforcing") != std::string::npos);
}

TEST_CASE("check subset suite passes") {
  const CliResult r = run_cli("check --suite subset --seed 42");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("all checks passed") != std::string::npos);
}

TEST_CASE("check concavity suite reports violations with exit 3") {
  const CliResult r = run_cli("check --suite concavity --segments 60 --seed 42");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("VIOLATION") != std::string::npos);
  CHECK(r.output.find("violations found") != std::string::npos);
}

TEST_CASE("train on synthetic data writes a results table") {
  const fs::path dir = fresh_dir("train");
  const CliResult r = run_cli("--out-dir " + dir.string() +
                              " train --reg dp --lambda 0.3 --n 200"
                              " --epochs 30 --trials 2 --lr 0.2");
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "results.csv"));
  CHECK(count_lines(dir / "results.csv") == 3);
  const std::string manifest = read_file(dir / "manifest.jsonl");
  CHECK(manifest.find("\"command\":\"train\"") != std::string::npos);
  CHECK(r.output.find("mean_acc=") != std::string::npos);
}

TEST_CASE("stats prints group statistics and the placement") {
  const CliResult r = run_cli("stats --data " + fixture("german_synth.csv") +
                              " --label-col label --group-col age"
                              " --group-threshold 25 --lambda 0.1 --reg dp");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("base_rate=0.728059") != std::string::npos);
  CHECK(r.output.find("placement: (0.728059, 0.578534)") != std::string::npos);
  CHECK(r.output.find("reg=dp lambda=0.1") != std::string::npos);
}

TEST_CASE("missing data files exit with code 1") {
  CHECK(run_cli("stats --data /no/such/file.csv").exit_code == 1);
  CHECK(run_cli("train --data /no/such/file.csv --epochs 5").exit_code == 1);
}

}  // TEST_SUITE
