#include <cstdio>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "support/process.hpp"

using transduct::testing::run_process;
using transduct::testing::shell_quote;

namespace {

transduct::testing::ProcessResult cli(const std::string& args) {
  return run_process(shell_quote(TRANSDUCT_CLI) + " " + args + " 2>/dev/null");
}

std::string scenario(const std::string& name) {
  return shell_quote(std::string(TRANSDUCT_SCENARIOS) + "/" + name);
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(P_tmpdir) + "/transduct_test_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("cotter: the rejected-boxes table as CSV") {
  const auto r = cli("cotter --n0 100,1000,10000,100000 --ratio 0.06 --n 100 --threshold 10 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "prior_sample_size,mean_pct,sd_pct,rejected_pct,additional_rejected_pct\n"
        "100,6.000,3.342,9.922,163.8\n"
        "1000,6.000,2.490,4.525,20.32\n"
        "10000,6.000,2.387,3.838,2.061\n"
        "100000,6.000,2.376,3.768,0.2064\n"
        "inf,6.000,2.375,3.761,0\n");
}

TEST_CASE("cotter: markdown by default") {
  const auto r = cli("cotter --n0 100 --ratio 0.06");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("| Prior Sample Size |", 0) == 0);
  CHECK(r.out.find("| ∞ |") != std::string::npos);
}

TEST_CASE("cotter: JSON records") {
  const auto r = cli("cotter --n0 100 --ratio 0.06 --format json --precision 6");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc[0]["rejected_pct"].get<double>() == 9.92161);
  CHECK(doc[1]["prior_sample_size"] == "inf");
}

TEST_CASE("cotter: invalid input exits with 2") {
  CHECK(cli("cotter --n0 50 --ratio 0.05").exit_code == 2);
  CHECK(cli("cotter --n0 100 --ratio 1.5").exit_code == 2);
  CHECK(cli("cotter --n0 100 --ratio 0.06 --format xml").exit_code == 2);
  CHECK(cli("cotter --n0 abc --ratio 0.06").exit_code == 2);
  CHECK(cli("cotter --n0 100").exit_code == 2);
  CHECK(cli("frobnicate").exit_code == 2);
  CHECK(cli("").exit_code == 2);
}

TEST_CASE("cotter: pseudo-counts are announced on stderr") {
  const auto plain = run_process(shell_quote(TRANSDUCT_CLI) + " cotter --n0 100 --ratio 0.06 2>&1 >/dev/null");
  CHECK(plain.out.empty());
  const auto smoothed =
      run_process(shell_quote(TRANSDUCT_CLI) + " cotter --n0 100 --ratio 0.06 --pseudo-count 0.5 2>&1 >/dev/null");
  CHECK(smoothed.exit_code == 0);
  CHECK(smoothed.out.find("pseudo-count 0.5") != std::string::npos);
  CHECK(cli("cotter --n0 100 --ratio 0.06 --pseudo-count -1").exit_code == 2);
}

TEST_CASE("help exits with 0") { CHECK(cli("--help").exit_code == 0); }

TEST_CASE("run: bundled scenarios") {
  const auto table = cli("run " + scenario("rejected-boxes.json") + " --format csv");
  CHECK(table.exit_code == 0);
  CHECK(table.out.find("100000,6.000,2.376,3.768,0.2064\n") != std::string::npos);

  const auto commander = cli("run " + scenario("commander.json"));
  CHECK(commander.exit_code == 0);
  CHECK(commander.out.find("| signal | 0.410000 | 0.660976 | 0.900000 |") != std::string::npos);

  for (const char* name : {"gauge.json", "outliers.json"}) {
    const auto r = cli("run " + scenario(name) + " --format json");
    INFO(name);
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out).contains("moments"));
  }
}

TEST_CASE("run: exit codes") {
  CHECK(cli("run /nonexistent/scenario.json").exit_code == 2);
  CHECK(cli("run " + shell_quote(write_temp("syntax.json", "{\"name\": "))).exit_code == 2);
  CHECK(cli("run " + shell_quote(write_temp("kind.json", R"({"name": "x", "kind": "frequentist", "parameters": {}})")))
            .exit_code == 2);
  const auto impossible = write_temp("impossible.json", R"({
    "name": "never", "kind": "discrete-models",
    "parameters": {"outcomes": ["a", "b"], "models": [{"id": "m", "prior": 1, "likelihood": [1, 0]}],
                   "observed": ["b"]}})");
  CHECK(cli("run " + shell_quote(impossible)).exit_code == 3);
}

TEST_CASE("selftest passes and is repeatable") {
  const auto a = cli("selftest");
  const auto b = cli("selftest");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("FAIL") == std::string::npos);
}
