#include "vc/analysis.hpp"

#include <algorithm>
#include <cassert>

namespace vc {

TraceAnalysis analyze(const Trace& t, ThreadId root) {
  TraceAnalysis a;
  a.trace = t;
  a.root = root;

  a.hb = PartialOrder::from_thread_order(t.events);
  a.chb = a.hb;
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = i + 1; j < t.size(); ++j)
      if (conflict(t[i], t[j])) {
        auto q = a.hb.with_ordering(id_of(t[i]), id_of(t[j]));
        assert(q);  // trace order is acyclic by construction
        a.hb = std::move(*q);
      }

  std::map<VarId, EventId> last_write;
  for (const Event& e : t.events) {
    a.valuefn[id_of(e)] = e.is_mem() ? e.value : 0;
    if (e.is_read()) {
      auto it = last_write.find(e.var);
      if (it != last_write.end()) {
        a.observation[id_of(e)] = it->second;
        auto q = a.chb.with_ordering(it->second, id_of(e));
        assert(q);
        a.chb = std::move(*q);
        if (e.thread == root)
          a.sidefn[id_of(e)] = it->second.thread == root ? 1 : 2;
      }
    }
    if (e.is_write()) last_write[e.var] = id_of(e);
  }
  return a;
}

std::optional<EventId> guard(const Trace& t, EventId e) {
  std::optional<EventId> g;
  for (const Event& x : t.events)
    if (x.thread == e.thread && x.index < e.index && x.is_read()) g = id_of(x);
  return g;
}

namespace {

bool same_events(const TraceAnalysis& a, const TraceAnalysis& b) {
  if (a.trace.size() != b.trace.size()) return false;
  auto ea = a.trace.events, eb = b.trace.events;
  std::sort(ea.begin(), ea.end(), canonical_less);
  std::sort(eb.begin(), eb.end(), canonical_less);
  return ea == eb;  // includes kinds, vars, and values
}

std::vector<EventId> ids_where(const TraceAnalysis& a,
                               const std::function<bool(const Event&)>& pred) {
  std::vector<EventId> out;
  for (const Event& e : a.trace.events)
    if (pred(e)) out.push_back(id_of(e));
  return out;
}

bool equal_restricted(const PartialOrder& pa, const PartialOrder& pb,
                      const std::vector<EventId>& ids) {
  return pa.project(ids) == pb.project(ids);
}

}  // namespace

bool hb_equiv(const TraceAnalysis& a, const TraceAnalysis& b) {
  return same_events(a, b) && a.hb == b.hb;
}

bool vhb_equiv(const TraceAnalysis& a, const TraceAnalysis& b) {
  if (a.root != b.root) return false;
  if (!same_events(a, b)) return false;            // equal events + val functions
  if (a.sidefn != b.sidefn) return false;
  auto reads = ids_where(a, [](const Event& e) { return e.is_read(); });
  if (!equal_restricted(a.chb, b.chb, reads)) return false;
  ThreadId root = a.root;
  auto leaves = ids_where(a, [root](const Event& e) { return e.thread != root; });
  return equal_restricted(a.hb, b.hb, leaves);
}

bool obs_equiv(const TraceAnalysis& a, const TraceAnalysis& b) {
  return same_events(a, b) && a.observation == b.observation;
}

bool obs_c_equiv(const TraceAnalysis& a, const TraceAnalysis& b) {
  if (a.root != b.root || !obs_equiv(a, b)) return false;
  ThreadId root = a.root;
  auto leaves = ids_where(a, [root](const Event& e) { return e.thread != root; });
  return equal_restricted(a.hb, b.hb, leaves);
}

std::vector<std::vector<size_t>> partition(
    const std::vector<TraceAnalysis>& analyses,
    const std::function<bool(const TraceAnalysis&, const TraceAnalysis&)>& equiv) {
  std::vector<std::vector<size_t>> classes;
  for (size_t i = 0; i < analyses.size(); ++i) {
    bool placed = false;
    for (auto& cls : classes)
      if (equiv(analyses[cls.front()], analyses[i])) {
        cls.push_back(i);
        placed = true;
        break;
      }
    if (!placed) classes.push_back({i});
  }
  return classes;
}

}  // namespace vc
