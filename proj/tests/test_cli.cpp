#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SUBCOUNT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("bounds prints the constant and a positive screening value") {
  const RunResult r = run_cli("bounds --r 2^4.3^3.13");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "c(2) = 7.371969"));
  CHECK(contains(r.out, "= 5616"));
  // The screening value certifies this order with margin > 0.46.
  CHECK(contains(r.out, "f = 0.472227"));
  CHECK(contains(r.out, "verdict = tgood"));
  // Plain integers are accepted and auto-factorized.
  const RunResult plain = run_cli("bounds --r 5616");
  CHECK(plain.exit_code == 0);
  CHECK(plain.out == r.out);
}

TEST_CASE("verify-group families") {
  const RunResult alt5 = run_cli("verify-group --family alt5");
  CHECK(alt5.exit_code == 0);
  CHECK(contains(alt5.out, "A5,60,59,"));
  CHECK(contains(alt5.out, ",true"));

  const RunResult c12 = run_cli("verify-group --family cyclic:12");
  CHECK(c12.exit_code == 0);
  CHECK(contains(c12.out, ",12,6,"));

  const RunResult md =
      run_cli("verify-group --family dihedral:4 --format markdown");
  CHECK(md.exit_code == 0);
  CHECK(contains(md.out, "| 8 | 10 |"));

  const RunResult js =
      run_cli("verify-group --family dicyclic:2 --format json");
  CHECK(js.exit_code == 0);
  CHECK(contains(js.out, "\"sub_count\":6"));
  CHECK(contains(js.out, "\"holds\":true"));
}

TEST_CASE("verify-group reads group files") {
  const std::string table_path = "/tmp/subcount_cli_c4.grp";
  {
    std::ofstream f(table_path);
    f << "4\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n";
  }
  const RunResult table = run_cli("verify-group --file " + table_path);
  CHECK(table.exit_code == 0);
  CHECK(contains(table.out, ",4,3,"));

  const std::string perm_path = "/tmp/subcount_cli_klein.grp";
  {
    std::ofstream f(perm_path);
    f << "perm\n(1 2)\n(3 4)\n";
  }
  const RunResult perm = run_cli("verify-group --file " + perm_path);
  CHECK(perm.exit_code == 0);
  CHECK(contains(perm.out, ",4,5,"));
}

TEST_CASE("exit codes distinguish failure kinds") {
  CHECK(run_cli("no-such-command").exit_code == 1);        // usage
  CHECK(run_cli("screen").exit_code == 1);                 // missing --ell
  CHECK(run_cli("verify-group").exit_code == 1);           // no target
  CHECK(run_cli("verify-group --family alt5 --file x").exit_code == 1);
  CHECK(run_cli("verify-group --family nosuch").exit_code == 1);
  CHECK(run_cli("verify-group --file /tmp/subcount_cli_missing.grp")
            .exit_code == 2);                              // data missing
  CHECK(run_cli("verify-group --family sym6").exit_code == 4);  // order cap
  CHECK(run_cli("verify-group --family alt5 --caps 3").exit_code == 4);
  const RunResult forced =
      run_cli("verify-group --family sym6 --force-large");
  CHECK(forced.exit_code == 0);
  CHECK(contains(forced.out, ",720,"));
}

TEST_CASE("golden diffs pass on the bundled data") {
  CHECK(run_cli("appendix").exit_code == 0);
  const RunResult screen = run_cli("screen --ell 4 --golden table1");
  CHECK(screen.exit_code == 0);
  CHECK(contains(screen.out, "420\n"));
  CHECK(contains(screen.out, "440401920\n"));
}

TEST_CASE("inequality suites run clean") {
  const RunResult technical = run_cli("technical");
  CHECK(technical.exit_code == 0);
  CHECK(contains(technical.out, "thresholds 10.632842 8.624662 2.160964"));
  CHECK(contains(technical.out, "mixture sample ok"));

  const RunResult solvable = run_cli("solvable");
  CHECK(solvable.exit_code == 0);
  CHECK(contains(solvable.out, "B(60) = 4173"));
  CHECK(contains(solvable.out, "refined a1=11"));
  CHECK(!contains(solvable.out, "FAIL"));
}

TEST_CASE("corpus report is deterministic and well-formed") {
  const RunResult a = run_cli("corpus --max-order 24");
  const RunResult b = run_cli("corpus --max-order 24");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "name,order,sub_count,rhs,margin_log,holds"));
  CHECK(contains(a.out, "S4,24,30,"));
  CHECK(!contains(a.out, ",false"));
}
