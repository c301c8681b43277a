#pragma once

// Shared fixtures and brute-force utilities for the test suites.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "vc/apo.hpp"
#include "vc/oracle.hpp"

namespace vt {

inline vc::Event ev(vc::ThreadId t, uint32_t idx, vc::EventKind k, vc::VarId var,
                    vc::Value v) {
  vc::Event e;
  e.thread = t;
  e.index = idx;
  e.kind = k;
  e.var = var;
  e.value = v;
  return e;
}

inline vc::Event wr(vc::ThreadId t, uint32_t idx, vc::VarId var, vc::Value v) {
  return ev(t, idx, vc::EventKind::Write, var, v);
}
inline vc::Event rd(vc::ThreadId t, uint32_t idx, vc::VarId var, vc::Value v) {
  return ev(t, idx, vc::EventKind::Read, var, v);
}

// The eight-event three-thread trace used as the running HB/CHB example:
//   e1: t1 w(x,1)   e2: t3 w(x,1)   e3: t2 w(y,1)   e4: t2 r(y,1)
//   e5: t2 w(x,1)   e6: t3 w(y,2)   e7: t1 w(y,1)   e8: t1 r(x,1)
// Variables: x = 0, y = 1. Per-thread indices:
// t1: e1=#1 e7=#2 e8=#3;  t2: e3=#1 e4=#2 e5=#3;  t3: e2=#1 e6=#2.
inline vc::Trace three_thread_trace() {
  vc::Trace t;
  t.events = {
      wr(1, 1, 0, 1),  // e1
      wr(3, 1, 0, 1),  // e2
      wr(2, 1, 1, 1),  // e3
      rd(2, 2, 1, 1),  // e4
      wr(2, 3, 0, 1),  // e5
      wr(3, 2, 1, 2),  // e6
      wr(1, 2, 1, 1),  // e7
      rd(1, 3, 0, 1),  // e8
  };
  return t;
}

// The two-thread closure example. Program (x=0, y=1, z=2):
//   p1 (root): a = read x; write z 1; write y 2; b = read z
//   p2 (leaf): write y 1; write x 1; write z 2; c = read y
// GoodW: r_x -> {w_x} (side 2), r_z -> {w_z} (side 1), r_y -> {w_y};
// good writes carry value 1, bad writes value 2.
inline const char* closure_example_source() {
  return R"(var x
var y
var z

thread main {
  spawn p1
  spawn p2
}

thread p1 {
  a = read x
  write z 1
  write y 2
  b = read z
}

thread p2 {
  write y 1
  write x 1
  write z 2
  c = read y
}
)";
}

inline vc::Apo closure_example_apo() {
  using vc::EventId;
  std::vector<vc::Event> events = {
      rd(1, 1, 0, 1),  // r_x
      wr(1, 2, 2, 1),  // w_z
      wr(1, 3, 1, 2),  // wbar_y
      rd(1, 4, 2, 1),  // r_z
      wr(2, 1, 1, 1),  // w_y
      wr(2, 2, 0, 1),  // w_x
      wr(2, 3, 2, 2),  // wbar_z
      rd(2, 4, 1, 1),  // r_y
  };
  vc::Apo apo;
  apo.root = 1;
  apo.p = vc::PartialOrder::from_thread_order(events);
  apo.side[EventId{1, 1}] = 2;
  apo.side[EventId{1, 4}] = 1;
  apo.goodw[EventId{1, 1}] = {EventId{2, 2}};
  apo.goodw[EventId{1, 4}] = {EventId{1, 2}};
  apo.goodw[EventId{2, 4}] = {EventId{2, 1}};
  return apo;
}

// All linear extensions of a partial order (small universes only).
inline void all_linearizations_rec(const vc::PartialOrder& p,
                                   std::vector<bool>& used, vc::Trace& cur,
                                   std::vector<vc::Trace>& out) {
  const auto& evs = p.universe();
  if (cur.size() == evs.size()) {
    out.push_back(cur);
    return;
  }
  for (size_t i = 0; i < evs.size(); ++i) {
    if (used[i]) continue;
    bool avail = true;
    for (size_t j = 0; j < evs.size() && avail; ++j)
      if (!used[j] && j != i && p.ordered(id_of(evs[j]), id_of(evs[i])))
        avail = false;
    if (!avail) continue;
    used[i] = true;
    cur.events.push_back(evs[i]);
    all_linearizations_rec(p, used, cur, out);
    cur.events.pop_back();
    used[i] = false;
  }
}

inline std::vector<vc::Trace> all_linearizations(const vc::PartialOrder& p) {
  std::vector<bool> used(p.size(), false);
  vc::Trace cur;
  std::vector<vc::Trace> out;
  all_linearizations_rec(p, used, cur, out);
  return out;
}

// The trace viewed as a total order over its events.
inline vc::PartialOrder total_order_of(const vc::Trace& t) {
  vc::PartialOrder p = vc::PartialOrder::from_thread_order(t.events);
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = i + 1; j < t.size(); ++j) {
      auto q = p.with_ordering(id_of(t[i]), id_of(t[j]));
      if (q) p = std::move(*q);
    }
  return p;
}

// Does t respect every ordered pair of p (same universe assumed)?
inline bool linearizes(const vc::Trace& t, const vc::PartialOrder& p) {
  std::map<uint64_t, size_t> pos;
  for (size_t i = 0; i < t.size(); ++i) pos[id_of(t[i]).packed()] = i;
  if (pos.size() != p.size()) return false;
  const auto& evs = p.universe();
  for (const vc::Event& e : evs)
    if (!pos.count(id_of(e).packed())) return false;
  for (size_t i = 0; i < evs.size(); ++i)
    for (size_t j = 0; j < evs.size(); ++j) {
      if (i == j) continue;
      vc::EventId a = id_of(evs[i]), b = id_of(evs[j]);
      if (p.ordered(a, b) && pos[a.packed()] >= pos[b.packed()]) return false;
    }
  return true;
}

// Observation of each read within t (last same-variable write before it).
inline std::map<vc::EventId, vc::EventId> observations(const vc::Trace& t) {
  std::map<vc::EventId, vc::EventId> obs;
  std::map<vc::VarId, vc::EventId> last;
  for (const vc::Event& e : t.events) {
    if (e.is_read()) {
      auto it = last.find(e.var);
      if (it != last.end()) obs[id_of(e)] = it->second;
    }
    if (e.is_write()) last[e.var] = id_of(e);
  }
  return obs;
}

// Every read of t observes one of its good writes.
inline bool good_observations(const vc::Trace& t,
                              const std::map<vc::EventId, std::vector<vc::EventId>>& goodw) {
  auto obs = observations(t);
  for (const vc::Event& e : t.events) {
    if (!e.is_read()) continue;
    auto git = goodw.find(id_of(e));
    if (git == goodw.end()) continue;
    auto oit = obs.find(id_of(e));
    if (oit == obs.end()) return false;
    const auto& ws = git->second;
    if (std::find(ws.begin(), ws.end(), oit->second) == ws.end()) return false;
  }
  return true;
}

}  // namespace vt
