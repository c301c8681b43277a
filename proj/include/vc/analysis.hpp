#pragma once

#include <functional>
#include <map>
#include <optional>

#include "vc/partial_order.hpp"

namespace vc {

// Derived functions of a valid trace: observation O_t, value function (events
// carry their values), side function S_t, and the HB/CHB partial orders.
struct TraceAnalysis {
  Trace trace;
  ThreadId root = 0;
  std::map<EventId, EventId> observation;  // read -> observed write
  std::map<EventId, Value> valuefn;        // event -> value read/written
  std::map<EventId, int> sidefn;           // root reads -> 1 (local) / 2 (remote)
  PartialOrder hb;   // TO + trace order of conflicting pairs
  PartialOrder chb;  // TO + observation edges
};

TraceAnalysis analyze(const Trace& t, ThreadId root);

// Last read of e's thread strictly TO-before e, or nullopt.
std::optional<EventId> guard(const Trace& t, EventId e);

bool hb_equiv(const TraceAnalysis& a, const TraceAnalysis& b);
bool vhb_equiv(const TraceAnalysis& a, const TraceAnalysis& b);
bool obs_equiv(const TraceAnalysis& a, const TraceAnalysis& b);
bool obs_c_equiv(const TraceAnalysis& a, const TraceAnalysis& b);

// Greedy partition by first matching representative; class order follows the
// input order, so results are deterministic.
std::vector<std::vector<size_t>> partition(
    const std::vector<TraceAnalysis>& analyses,
    const std::function<bool(const TraceAnalysis&, const TraceAnalysis&)>& equiv);

}  // namespace vc
