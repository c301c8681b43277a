#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "vc/analysis.hpp"
#include "vc/explorer.hpp"
#include "vc/oracle.hpp"
#include "vc/program.hpp"

using namespace vc;
using namespace vt;

namespace {

const char* kFig1 = R"(var x
thread main {
  spawn p2
  write x 1
}
thread p2 {
  write x 2
  write x 1
  r = read x
}
)";

const char* kFig3aN2 = R"(var x
thread main {
  spawn p1
  a1 = read x
  a2 = read x
}
thread p1 {
  write x 0
  write x 0
}
)";

const char* kLock = R"(var m
var c
thread main {
  spawn p
  spawn q
  join p
  join q
  r = read c
  assert r == 2
}
thread p {
  lock m
  a = read c
  write c a + 1
  unlock m
}
thread q {
  lock m
  b = read c
  write c b + 1
  unlock m
}
)";

size_t count_events(const Trace& t, EventKind k) {
  size_t n = 0;
  for (const Event& e : t.events)
    if (e.kind == k) ++n;
  return n;
}

}  // namespace

TEST_CASE("candidate writes: the all-top map admits every conflicting write") {
  Trace t;
  t.events = {wr(0, 1, 0, 0), wr(2, 1, 0, 1), rd(2, 2, 1, 0), wr(2, 3, 0, 2),
              wr(2, 4, 1, 9)};
  Event r = rd(1, 1, 0, 0);
  auto m = candidate_writes(t, ChbMap{}, r);
  REQUIRE(m.size() == 3);  // the three x-writes; the y-writes never conflict
  CHECK(m[0] == EventId{0, 1});
  CHECK(m[1] == EventId{2, 1});
  CHECK(m[2] == EventId{2, 3});
}

TEST_CASE("candidate writes: a bottom entry excludes only pre-first-read writes") {
  Trace t;
  t.events = {wr(2, 1, 0, 1), rd(2, 2, 1, 0), wr(2, 3, 0, 2)};
  Event r = rd(1, 1, 0, 0);
  ChbMap c;
  c[id_of(r)][2] = ChbEntry{ChbEntry::Bot, {}};
  auto m = candidate_writes(t, c, r);
  // (2,1) has no guard: excluded by Bot; (2,3) is guarded by the read (2,2):
  // still admissible
  REQUIRE(m.size() == 1);
  CHECK(m[0] == EventId{2, 3});
}

TEST_CASE("candidate writes: a read entry excludes writes up to that guard") {
  Trace t;
  t.events = {rd(2, 1, 1, 0), wr(2, 2, 0, 1), rd(2, 3, 1, 0), wr(2, 4, 0, 2)};
  Event r = rd(1, 1, 0, 0);
  ChbMap c;
  c[id_of(r)][2] = ChbEntry{ChbEntry::Read, EventId{2, 1}};
  auto m = candidate_writes(t, c, r);
  // guard of (2,2) is (2,1): not strictly after the frontier, excluded;
  // guard of (2,4) is (2,3): after the frontier, included
  REQUIRE(m.size() == 1);
  CHECK(m[0] == EventId{2, 4});
}

TEST_CASE("wextend from the empty trace stops before each thread's next read") {
  Program p = parse_program(kFig1);
  Trace t = wextend(p, Trace{});
  // forced multiset: init write, spawn, main's w(x,1), p2's two writes;
  // p2 stops before its read
  CHECK(t.size() == 5);
  CHECK(count_events(t, EventKind::Write) == 4);
  CHECK(count_events(t, EventKind::Spawn) == 1);
  CHECK(count_events(t, EventKind::Read) == 0);

  Program p3 = parse_program(kFig3aN2);
  Trace t3 = wextend(p3, Trace{});
  // init + spawn + p1's two writes; main stops before its first read
  CHECK(t3.size() == 4);
  CHECK(count_events(t3, EventKind::Read) == 0);
}

TEST_CASE("wextend leaves a finished trace unchanged") {
  Program p = parse_program(kFig1);
  auto en = enumerate_maximal(p);
  REQUIRE(!en.traces.empty());
  CHECK(wextend(p, en.traces[0]) == en.traces[0]);
}

TEST_CASE("the racing example explores one maximal trace from root main") {
  Program p = parse_program(kFig1);
  ExplorerConfig cfg;
  cfg.root = *p.thread_by_name("main");
  auto rep = vcdpor_run(p, cfg);
  CHECK(rep.maximal_traces == 1);
  CHECK(!rep.limit_exceeded);
  CHECK(rep.maximal_traces <= rep.realized_traces);
  CHECK(rep.recursion_nodes == rep.realized_traces);
}

TEST_CASE("a single-thread program realizes exactly one maximal trace") {
  Program p = parse_program(
      "var x\nthread main {\n  write x 1\n  r = read x\n  write x 2\n}\n");
  ExplorerConfig cfg;
  cfg.root = 0;
  auto rep = vcdpor_run(p, cfg);
  CHECK(rep.realized_traces >= 1);
  CHECK(rep.maximal_traces == 1);
}

TEST_CASE("identical-value writes collapse to one trace") {
  Program p = parse_program(kFig3aN2);
  ExplorerConfig cfg;
  cfg.root = p.default_root();
  auto rep = vcdpor_run(p, cfg);
  CHECK(rep.maximal_traces == 1);
}

TEST_CASE("explorer matches the oracle's states and finds the assert violation") {
  Program p = parse_program(R"(var x
thread main {
  spawn p
  r = read x
  assert r == 0
}
thread p {
  write x 1
}
)");
  ExplorerConfig cfg;
  cfg.root = p.default_root();
  auto rep = vcdpor_run(p, cfg);
  auto en = enumerate_maximal(p);
  auto st = reachable_states(p, en.traces);
  CHECK(rep.states == st.states);
  CHECK(rep.violations == st.violations);
  CHECK(rep.violations.size() == 1);
}

TEST_CASE("realized traces are pairwise VHB-inequivalent") {
  for (const char* src : {kFig1, kFig3aN2, kLock}) {
    Program p = parse_program(src);
    ExplorerConfig cfg;
    cfg.root = p.default_root();
    cfg.collect_traces = true;
    auto rep = vcdpor_run(p, cfg);
    REQUIRE(rep.traces.size() == rep.realized_traces);
    std::vector<TraceAnalysis> as;
    for (const Trace& t : rep.traces) as.push_back(analyze(t, cfg.root));
    for (size_t i = 0; i < as.size(); ++i)
      for (size_t j = i + 1; j < as.size(); ++j) CHECK(!vhb_equiv(as[i], as[j]));
  }
}

TEST_CASE("lock program: two acquires never observe the same release") {
  Program p = parse_program(kLock);
  ExplorerConfig cfg;
  cfg.root = p.default_root();
  cfg.collect_traces = true;
  auto rep = vcdpor_run(p, cfg);
  CHECK(rep.violations.empty());  // the counter always reaches 2
  VarId m = 0;  // first declared variable is the mutex
  for (const Trace& t : rep.traces) {
    auto obs = observations(t);
    std::set<uint64_t> seen;
    for (const Event& e : t.events) {
      if (!e.is_read() || e.var != m) continue;
      auto it = obs.find(id_of(e));
      if (it == obs.end()) continue;
      CHECK(!seen.count(it->second.packed()));
      seen.insert(it->second.packed());
    }
  }
}

TEST_CASE("flags: pruning and read priority preserve the reachable states") {
  for (const char* src : {kFig1, kFig3aN2, kLock}) {
    Program p = parse_program(src);
    ExplorerConfig base;
    base.root = p.default_root();
    auto r0 = vcdpor_run(p, base);
    ExplorerConfig pruned = base;
    pruned.prune = true;
    auto r1 = vcdpor_run(p, pruned);
    ExplorerConfig prio = base;
    prio.read_priority = true;
    auto r2 = vcdpor_run(p, prio);
    CHECK(r1.states == r0.states);
    CHECK(r1.violations == r0.violations);
    CHECK(r2.states == r0.states);
    CHECK(r2.violations == r0.violations);
    CHECK(r1.realized_traces <= r0.realized_traces);
  }
}

TEST_CASE("limits: trace cap reports limit_exceeded") {
  Program p = parse_program(kLock);
  ExplorerConfig cfg;
  cfg.root = p.default_root();
  cfg.max_traces = 1;
  auto rep = vcdpor_run(p, cfg);
  CHECK(rep.limit_exceeded);
  CHECK(rep.realized_traces <= 1);
}

TEST_CASE("exploration is deterministic") {
  Program p = parse_program(kLock);
  ExplorerConfig cfg;
  cfg.root = p.default_root();
  cfg.collect_traces = true;
  auto a = vcdpor_run(p, cfg);
  auto b = vcdpor_run(p, cfg);
  CHECK(a.realized_traces == b.realized_traces);
  CHECK(a.traces.size() == b.traces.size());
  for (size_t i = 0; i < a.traces.size(); ++i) CHECK(a.traces[i] == b.traces[i]);
  // recursion keeps only the active branch alive
  CHECK(a.peak_live_apos <= a.realized_traces);
}
