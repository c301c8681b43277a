#pragma once

#include <set>
#include <tuple>

#include "vc/analysis.hpp"
#include "vc/extend.hpp"

namespace vc {

// Per-read, per-thread frontier of already-considered good writes: a read of
// that thread, or Bot (prefix before the first read) / Top (everything).
struct ChbEntry {
  enum Kind { Top, Bot, Read } kind = Top;
  EventId read{};
};
using ChbMap = std::map<EventId, std::map<ThreadId, ChbEntry>>;

ChbEntry chb_get(const ChbMap& c, EventId r, ThreadId p);

// M_t^C(r): conflicting writes of t whose thread frontier has not yet covered
// them (via their guarding read).
std::vector<EventId> candidate_writes(const Trace& t, const ChbMap& c, const Event& r);

// Extends t with non-read events only, round-robin in canonical thread
// order, until every runnable thread's next event is a read (or it is
// finished/blocked).
Trace wextend(const Program& p, const Trace& t);

struct ExplorerConfig {
  ThreadId root = 0;
  bool prune = false;
  bool read_priority = false;
  size_t max_traces = 0;     // realized-trace cap, 0 = unlimited
  double time_limit_s = 0;   // wall clock, 0 = unlimited
  bool collect_traces = false;
};

using LocalState = std::tuple<ThreadId, uint32_t, Value>;  // (thread, event, value)

struct ExplorationReport {
  size_t realized_traces = 0;
  size_t maximal_traces = 0;
  size_t recursion_nodes = 0;
  size_t peak_live_apos = 0;
  std::set<LocalState> states;
  std::set<AssertViolation> violations;
  bool limit_exceeded = false;
  std::vector<Trace> traces;  // filled when collect_traces
};

ExplorationReport vcdpor_run(const Program& p, const ExplorerConfig& cfg);

}  // namespace vc
