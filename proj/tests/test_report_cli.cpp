#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "vc/report.hpp"

using namespace vc;
using nlohmann::json;

namespace {

#ifndef VCHECK_BIN
#define VCHECK_BIN "vcheck"
#endif
#ifndef CORPUS_DIR
#define CORPUS_DIR "corpus"
#endif

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string tmp = "cli_out.tmp";
  std::string cmd = std::string(VCHECK_BIN) + " " + args + " > " + tmp + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(tmp.c_str());
  return {code, ss.str()};
}

std::string corpus(const std::string& name) {
  return std::string(CORPUS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("states_digest is order-independent and distinguishes sets") {
  std::set<LocalState> a = {{1, 1, 5}, {2, 3, 7}};
  std::set<LocalState> b = {{2, 3, 7}, {1, 1, 5}};
  CHECK(states_digest(a) == states_digest(b));
  CHECK(states_digest(a).size() == 16);
  std::set<LocalState> c = {{1, 1, 5}};
  CHECK(states_digest(a) != states_digest(c));
  CHECK(states_digest({}) == "0000000000000000");
}

TEST_CASE("JSON report: stable schema and key order") {
  Report r;
  r.benchmark = "b";
  r.algo = "vcdpor";
  r.root = "main";
  r.realized_traces = 3;
  r.maximal_traces = 2;
  r.hb = 4;
  r.vhb = 1;
  r.states_digest = "00000000deadbeef";
  r.violations.push_back({1, 2, 7});
  std::string s = report_to_json(r);
  CHECK(s == report_to_json(r));  // byte-identical on identical input
  CHECK(s.find('\n') == std::string::npos);

  json j = json::parse(s);
  CHECK(j["benchmark"] == "b");
  CHECK(j["classes"]["hb"] == 4);
  CHECK(j["classes"]["vhb"] == 1);
  CHECK(!j["classes"].contains("obs"));
  CHECK(j["assert_violations"][0]["thread"] == 1);
  CHECK(j["assert_violations"][0]["event"] == 2);
  CHECK(j["assert_violations"][0]["line"] == 7);
  CHECK(j["time_ms"] == 0);
  CHECK(j["status"] == "ok");
  // key order is fixed
  CHECK(s.rfind("{\"benchmark\":", 0) == 0);
  CHECK(s.find("\"algo\":") < s.find("\"root\":"));
  CHECK(s.find("\"states_digest\":") < s.find("\"assert_violations\":"));
}

TEST_CASE("table report mirrors the same fields") {
  Report r;
  r.benchmark = "b";
  r.vhb = 1;
  std::string t = report_to_table(r);
  CHECK(t.find("benchmark") != std::string::npos);
  CHECK(t.find("vhb classes") != std::string::npos);
  CHECK(t.find("obs classes") == std::string::npos);
}

TEST_CASE("cli: run on the racing example") {
  auto r = run_cli("run " + corpus("fig1.vp") +
                   " --algo oracle --root main --classes hb,vhb --json");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["benchmark"] == "fig1");
  CHECK(j["maximal_traces"] == 4);
  CHECK(j["classes"]["hb"] == 4);
  CHECK(j["classes"]["vhb"] == 1);

  auto v = run_cli("run " + corpus("fig1.vp") + " --algo vcdpor --root main --json");
  CHECK(v.exit_code == 0);
  json jv = json::parse(v.out);
  CHECK(jv["maximal_traces"] == 1);
  // both engines reach the same local states
  CHECK(j["states_digest"] == jv["states_digest"]);
}

TEST_CASE("cli: identical invocations produce byte-identical JSON") {
  std::string args = "run " + corpus("float_read.vp") +
                     " --algo vcdpor --classes hb,vhb,obs,obs_c --json";
  auto a = run_cli(args);
  auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("cli: exit codes") {
  CHECK(run_cli("run no_such_file.vp").exit_code == 1);
  CHECK(run_cli("run " + corpus("fig1.vp") + " --root nope").exit_code == 1);
  // limit exceeded
  CHECK(run_cli("run " + corpus("fib_modnone_u2.vp") +
                " --algo oracle --max-traces 5")
            .exit_code == 2);
  // assert violations change the exit code only when asked
  CHECK(run_cli("run " + corpus("assert_race.vp") + " --algo oracle").exit_code == 0);
  CHECK(run_cli("run " + corpus("assert_race.vp") + " --algo oracle --fail-on-assert")
            .exit_code != 0);
}

TEST_CASE("cli: assert violations are reported") {
  auto r = run_cli("run " + corpus("assert_race.vp") + " --algo oracle --json");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["assert_violations"].size() == 1);
  CHECK(j["assert_violations"][0]["thread"] == 0);
}

TEST_CASE("cli: compare agrees on a shipped benchmark") {
  auto r = run_cli("compare " + corpus("fig3a_n2.vp"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("result          PASS") != std::string::npos);
}

TEST_CASE("cli: dump-traces writes one line per realized trace") {
  std::string dump = "traces_dump.tmp";
  auto r = run_cli("run " + corpus("fig1.vp") +
                   " --algo oracle --dump-traces " + dump);
  CHECK(r.exit_code == 0);
  std::ifstream in(dump);
  size_t lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  std::remove(dump.c_str());
  CHECK(lines == 4);
}
