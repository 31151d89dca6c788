#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

const char* cli_bin() { return std::getenv("GIBBS1D_BIN"); }

std::string models_dir() {
  const char* dir = std::getenv("GIBBS1D_MODELS");
  return dir ? dir : "models";
}

/// Run the CLI with stderr folded into stdout.
CliResult run_cli(const std::string& args) {
  CliResult r;
  const std::string cmd = std::string(cli_bin()) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#define REQUIRE_CLI()                                   \
  if (!cli_bin()) {                                     \
    MESSAGE("GIBBS1D_BIN not set; skipping CLI tests"); \
    return;                                             \
  }

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("conditional emits one row per boundary and target configuration") {
  REQUIRE_CLI();
  const CliResult r = run_cli("conditional --model " + models_dir() +
                              "/ising_nn.json --channel flip10 --n 1 --tail + --tail -");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line.rfind("# config:", 0) == 0);
  REQUIRE(std::getline(in, line));
  CHECK(line == "tail,xi,value,supported");
  size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",1") != std::string::npos);  // everything is supported here
  }
  CHECK(rows == 2 * 8);  // two tails, 2^3 target configurations
}

TEST_CASE("a flat potential with a constant-row kernel reproduces the kernel") {
  REQUIRE_CLI();
  const CliResult r =
      run_cli("conditional --model " + models_dir() + "/zero.json --channel noise --n 1");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string tail, xi, value, supported;
    std::getline(cells, tail, ',');
    std::getline(cells, xi, ',');
    std::getline(cells, value, ',');
    std::getline(cells, supported, ',');
    const double v = std::strtod(value.c_str(), nullptr);
    const double want = xi[1] == '+' ? 0.7 : 0.3;
    CHECK(v == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("missing files, channels, and flags map to exit code 2") {
  REQUIRE_CLI();
  const CliResult missing = run_cli("conditional --model /no/such.json --channel c --n 1");
  CHECK(missing.code == 2);
  CHECK(missing.out.find("model not found") != std::string::npos);

  const CliResult channel =
      run_cli("conditional --model " + models_dir() + "/ising_nn.json --channel nope --n 1");
  CHECK(channel.code == 2);
  CHECK(channel.out.find("flip10") != std::string::npos);

  const CliResult flag = run_cli("conditional --bogus-flag");
  CHECK(flag.code == 2);

  const CliResult none = run_cli("");
  CHECK(none.code == 2);
}

TEST_CASE("divergent decay sums map to exit code 3") {
  REQUIRE_CLI();
  const CliResult r = run_cli("bounds --model " + models_dir() + "/powerlaw_gamma2.json --n 4");
  CHECK(r.code == 3);
  CHECK(r.out.find("divergence") != std::string::npos);
}

TEST_CASE("enumeration blowups map to exit code 4") {
  REQUIRE_CLI();
  const CliResult r = run_cli("conditional --model " + models_dir() +
                              "/ising_nn.json --channel flip10 --n 14");
  CHECK(r.code == 4);
}

TEST_CASE("an unfittable scan still exits 0 and records the failure") {
  REQUIRE_CLI();
  const std::string out = "/tmp/gibbs1d_test_scan_degenerate";
  const CliResult r = run_cli("kozlov-scan --model " + models_dir() +
                              "/ising_nn.json --channel flip10 --diameters 3 --n 4 --out " + out);
  CHECK(r.code == 0);
  CHECK(r.out.find("warning:") != std::string::npos);
  CHECK(slurp(out + ".fit.json").find("fit_error") != std::string::npos);
  std::remove(out.c_str());
  std::remove((out + ".fit.json").c_str());
}

TEST_CASE("every command is byte-stable under a repeated seed") {
  REQUIRE_CLI();
  const std::string dir = models_dir();
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"conditional --model " + dir + "/ising_nn.json --channel flip30 --n 2 --tail -", {}},
      {"kozlov-scan --model " + dir + "/exp_pair.json --channel flip10 --diameters 4 --n 4",
       {".fit.json"}},
      {"coupling --model " + dir + "/ising_nn.json --n 3 --runs 500 --seed 7 --dump-trajectories",
       {".trajectories.csv"}},
      {"bounds --model " + dir + "/exp_pair.json --n 16", {}},
      {"lemma-check --model " + dir + "/exp_pair.json --n 1 --m 2", {}},
  };
  int idx = 0;
  for (const auto& [args, extras] : cases) {
    const std::string out1 = "/tmp/gibbs1d_test_rerun_a" + std::to_string(idx);
    const std::string out2 = "/tmp/gibbs1d_test_rerun_b" + std::to_string(idx);
    CHECK(run_cli(args + " --out " + out1).code == 0);
    CHECK(run_cli(args + " --out " + out2).code == 0);
    CHECK(slurp(out1) != "");
    // the config echo names the output-independent part of the invocation, so
    // compare below the first line
    const auto body = [](const std::string& text) { return text.substr(text.find('\n')); };
    CHECK(body(slurp(out1)) == body(slurp(out2)));
    for (const std::string& ext : extras) CHECK(slurp(out1 + ext) == slurp(out2 + ext));
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    for (const std::string& ext : extras) {
      std::remove((out1 + ext).c_str());
      std::remove((out2 + ext).c_str());
    }
    ++idx;
  }
}

TEST_CASE("trajectory dumps carry one row per stage") {
  REQUIRE_CLI();
  const std::string out = "/tmp/gibbs1d_test_traj";
  const CliResult r = run_cli("coupling --model " + models_dir() +
                              "/ising_nn.json --n 2 --runs 10 --seed 3 --dump-trajectories --out " +
                              out);
  CHECK(r.code == 0);
  const std::string traj = slurp(out + ".trajectories.csv");
  std::istringstream in(traj);
  std::string line;
  std::getline(in, line);  // config comment
  std::getline(in, line);
  CHECK(line == "pair,run,stage,left_site,right_site,a1,b1,a2,b2,matched,z");
  size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2 * 10 * 3);  // two boundary pairs, ten runs, stages 0..2
  std::remove(out.c_str());
  std::remove((out + ".trajectories.csv").c_str());
}

TEST_SUITE_END();
