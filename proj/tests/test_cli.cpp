#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <traindesign/experiments.hpp>

using namespace traindesign;

namespace {

std::string cli_path() {
  const char* p = std::getenv("TRAINDESIGN_CLI");
  REQUIRE_MESSAGE(p != nullptr,
                  "TRAINDESIGN_CLI must point at the traindesign binary");
  return p;
}

struct RunResult {
  int code;
  std::string stderr_text;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string err = "/tmp/traindesign_cli_err_" + std::to_string(counter++);
  std::string cmd =
      cli_path() + " " + args + " >/dev/null 2>" + err;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.stderr_text = ss.str();
  std::remove(err.c_str());
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("run writes a parsable csv and exits cleanly") {
  std::string out = "/tmp/traindesign_cli_ok.csv";
  RunResult r = run_cli("run --experiment nmse --trials 5 --seed 7 "
                        "--gamma-grid 0 --out " + out);
  CHECK(r.code == 0);
  auto rows = parse_csv(out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].scheme == "asgpp");
  CHECK(rows[1].scheme == "cmse");
  CHECK(rows[2].scheme == "white");
  for (const CurveRow& row : rows) {
    CHECK(row.trials == 5);
    CHECK(row.seed == 7);
    CHECK(row.x == 0.0);
  }
  std::remove(out.c_str());
}

TEST_CASE("flags override the config file") {
  std::string cfg = "/tmp/traindesign_cli_cfg.conf";
  write_file(cfg,
             "experiment = nmse\n"
             "trials = 9   # flag below wins\n"
             "gamma_grid_db = 0\n"
             "seed = 1\n");
  std::string out = "/tmp/traindesign_cli_override.csv";
  RunResult r = run_cli("run --config " + cfg + " --trials 4 --seed 11 --out " +
                        out);
  CHECK(r.code == 0);
  auto rows = parse_csv(out);
  REQUIRE(!rows.empty());
  CHECK(rows[0].trials == 4);
  CHECK(rows[0].seed == 11);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("identical invocations produce identical files") {
  std::string a = "/tmp/traindesign_cli_rep_a.csv";
  std::string b = "/tmp/traindesign_cli_rep_b.csv";
  std::string args = "run --experiment nmse --trials 6 --seed 3 "
                     "--gamma-grid -5,5 --out ";
  CHECK(run_cli(args + a).code == 0);
  CHECK(run_cli(args + b).code == 0);
  std::string ta = slurp(a);
  CHECK(ta == slurp(b));
  CHECK(ta.size() > 100);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("config problems exit with 2 and explain themselves") {
  std::string out = "/tmp/traindesign_cli_err.csv";

  SUBCASE("unknown experiment") {
    RunResult r = run_cli("run --experiment sideways --out " + out);
    CHECK(r.code == 2);
    CHECK(r.stderr_text.find("sideways") != std::string::npos);
  }
  SUBCASE("unknown config key") {
    std::string cfg = "/tmp/traindesign_cli_badkey.conf";
    write_file(cfg, "experiment = nmse\nwarp_factor = 9\n");
    RunResult r = run_cli("run --config " + cfg + " --out " + out);
    CHECK(r.code == 2);
    CHECK(r.stderr_text.find("warp_factor") != std::string::npos);
    std::remove(cfg.c_str());
  }
  SUBCASE("missing config file") {
    RunResult r = run_cli("run --config /nonexistent.conf --out " + out);
    CHECK(r.code == 2);
  }
  SUBCASE("no experiment anywhere") {
    RunResult r = run_cli("run --out " + out);
    CHECK(r.code == 2);
    CHECK(r.stderr_text.find("experiment") != std::string::npos);
  }
  SUBCASE("invalid dimension combination") {
    std::string cfg = "/tmp/traindesign_cli_baddim.conf";
    write_file(cfg, "experiment = zf\nn_r = 3\ntrials = 2\n");
    RunResult r = run_cli("run --config " + cfg + " --out " + out);
    CHECK(r.code == 2);
    std::remove(cfg.c_str());
  }
  std::remove(out.c_str());
}

TEST_CASE("argument errors exit with 2") {
  CHECK(run_cli("run --experiment nmse").code == 2);  // --out is required
  CHECK(run_cli("run --experiment nmse --out /tmp/x.csv --bogus 1").code == 2);
  CHECK(run_cli("").code == 2);  // a subcommand is required
}

TEST_CASE("help exits with 0") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("run --help").code == 0);
}

TEST_CASE("an unreachable accuracy target exits with 3 and names the issue") {
  std::string cfg = "/tmp/traindesign_cli_inf.conf";
  // A vanishing accuracy weight makes the prior alone sufficient, so the
  // guaranteed design is all-zero and the outage sweep cannot proceed.
  write_file(cfg, "experiment = outage\ngamma = 1e-9\ntrials = 2\n");
  std::string out = "/tmp/traindesign_cli_inf.csv";
  RunResult r = run_cli("run --config " + cfg + " --out " + out);
  CHECK(r.code == 3);
  CHECK(r.stderr_text.find("infeasible") != std::string::npos);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}
