#include "vc/apo.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace vc {

bool Apo::is_good(EventId r, EventId w) const {
  auto it = goodw.find(r);
  if (it == goodw.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), w);
}

std::vector<EventId> Apo::reads() const {
  std::vector<EventId> out;
  for (const Event& e : p.universe())
    if (e.is_read()) out.push_back(id_of(e));
  return out;
}

std::vector<EventId> Apo::x_events(int s) const {
  std::vector<EventId> out;
  for (const Event& e : p.universe())
    if ((e.thread == root) == (s == 1)) out.push_back(id_of(e));
  return out;
}

std::string Apo::debug_dump() const {
  std::ostringstream os;
  os << "root t" << root << "\n";
  for (const Event& e : p.universe()) os << event_to_string(e) << "\n";
  os << p.debug_edges();
  for (auto& [r, s] : side)
    os << "S(t" << r.thread << "#" << r.index << ")=" << s << "\n";
  for (auto& [r, ws] : goodw) {
    os << "GoodW(t" << r.thread << "#" << r.index << ")={";
    for (EventId w : ws) os << " t" << w.thread << "#" << w.index;
    os << " }\n";
  }
  return os.str();
}

std::vector<std::string> validate(const Program& prog, const Apo& apo) {
  std::vector<std::string> out;
  auto complain = [&](const std::string& m) { out.push_back(m); };

  for (const Event& e : apo.p.universe()) {
    if (e.is_read()) {
      if (!apo.goodw.count(id_of(e)))
        complain("read without GoodW entry: " + event_to_string(e));
      if (e.thread == apo.root && !apo.side.count(id_of(e)))
        complain("root read without side: " + event_to_string(e));
    }
  }
  for (auto& [r, s] : apo.side) {
    if (!apo.p.contains(r) || !apo.p.event(r).is_read() || r.thread != apo.root)
      complain("side entry on a non-root-read event");
    else if (s != 1 && s != 2)
      complain("side value out of range");
  }
  for (auto& [r, ws] : apo.goodw) {
    if (!apo.p.contains(r) || !apo.p.event(r).is_read()) {
      complain("GoodW entry on a non-read event");
      continue;
    }
    const Event& re = apo.p.event(r);
    for (EventId w : ws) {
      if (!apo.p.contains(w)) {
        complain("good write outside the universe");
        continue;
      }
      const Event& we = apo.p.event(w);
      if (!we.is_write() || we.var != re.var)
        complain("good write does not conflict with its read: " + event_to_string(we));
      else if (we.value != re.value)
        complain("good write has a different value: " + event_to_string(we));
      if (re.thread == apo.root) {
        auto it = apo.side.find(r);
        if (it != apo.side.end() &&
            ((it->second == 1) != (w.thread == apo.root)))
          complain("good write on the wrong side for " + event_to_string(re));
      }
    }
  }

  if (apo.p.project(apo.x_events(1)).width() > 1)
    complain("Width(P|X1) > 1");
  if (apo.p.project(apo.x_events(2)).mazurkiewicz_width() > 1)
    complain("MWidth(P|X2) > 1");

  std::map<ThreadId, std::vector<Event>> per_thread;
  for (const Event& e : apo.p.universe()) per_thread[e.thread].push_back(e);
  for (auto& [t, evs] : per_thread) {
    std::sort(evs.begin(), evs.end(), canonical_less);
    for (size_t i = 0; i < evs.size(); ++i)
      if (evs[i].index != i + 1)
        complain("thread events are not a TO prefix");
    std::string err;
    if (!local_replay(prog, t, evs, &err)) complain("inconsistent: " + err);
  }
  return out;
}

namespace {

std::vector<EventId> intersect_good(const Apo& apo, EventId r,
                                    const std::vector<EventId>& set) {
  std::vector<EventId> out;
  for (EventId w : set)
    if (apo.is_good(r, w)) out.push_back(w);
  return out;
}

// Rule check results for one read; rule = 0 means satisfied.
struct RuleState {
  int rule = 0;
  EventId bad_min{};  // rule 3 culprit
};

RuleState check_read(const Apo& apo, EventId r) {
  auto vis = apo.p.visible_writes(r);
  auto minw = apo.p.min_writes(r);
  auto maxw = apo.p.max_writes(r);

  bool rule1 = false;
  for (EventId w : minw)
    if (apo.is_good(r, w) && apo.p.ordered(w, r)) rule1 = true;
  if (!rule1) return {1, {}};

  if (intersect_good(apo, r, maxw).empty()) return {2, {}};

  auto good_vis = intersect_good(apo, r, vis);
  for (EventId wb : minw) {
    if (apo.is_good(r, wb) || !apo.p.ordered(wb, r)) continue;
    bool covered = false;
    for (EventId w : good_vis)
      if (apo.p.ordered(wb, w)) covered = true;
    if (!covered) return {3, wb};
  }
  return {0, {}};
}

}  // namespace

ClosedCheck is_closed(const Apo& apo) {
  for (EventId r : apo.reads()) {
    RuleState rs = check_read(apo, r);
    if (rs.rule != 0) return {false, r, rs.rule};
  }
  return {};
}

std::optional<Apo> closure(const Apo& apo, const std::vector<EventId>* scan,
                           std::vector<ClosureInsertion>* log) {
  Apo q = apo;
  std::vector<EventId> order = scan ? *scan : apo.reads();

  bool progressed = false;
  auto insert = [&](int rule, EventId a, EventId b) -> bool {
    if (q.p.ordered(a, b)) return true;  // already present: nothing to do
    auto strengthened = q.p.with_ordering(a, b);
    if (!strengthened) return false;
    q.p = std::move(*strengthened);
    if (log) log->push_back(ClosureInsertion{rule, a, b});
    progressed = true;
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (EventId r : order) {
      RuleState rs = check_read(q, r);
      if (rs.rule == 0) continue;
      if (rs.rule == 1) {
        auto y = intersect_good(q, r, q.p.visible_writes(r));
        if (y.empty()) return std::nullopt;
        // the minimum of Y (unique when rule 1 is violated)
        std::vector<EventId> mins;
        for (EventId w : y) {
          bool minimal = true;
          for (EventId w2 : y)
            if (w2 != w && q.p.ordered(w2, w)) minimal = false;
          if (minimal) mins.push_back(w);
        }
        if (!insert(1, mins.front(), r)) return std::nullopt;
      } else if (rs.rule == 2) {
        auto maxw = q.p.max_writes(r);
        int other = 3 - q.side_of(r);
        bool any = false;
        for (EventId w : maxw)
          if (q.side_of(w) == other) {
            if (!insert(2, r, w)) return std::nullopt;
            any = true;
          }
        if (!any) return std::nullopt;
      } else {
        // order the bad minimal write before a maximal good write, remote to
        // it when one exists (always the case when conflicting leaf events
        // are totally ordered; pruned orders may only offer a local one)
        auto maxw = q.p.max_writes(r);
        int other = 3 - q.side_of(rs.bad_min);
        std::vector<EventId> targets;
        for (EventId w : maxw)
          if (q.is_good(r, w) && q.side_of(w) == other) targets.push_back(w);
        if (targets.empty())
          for (EventId w : maxw)
            if (q.is_good(r, w)) targets.push_back(w);
        if (targets.empty()) return std::nullopt;
        if (!insert(3, rs.bad_min, targets.front())) return std::nullopt;
      }
      if (!progressed) return std::nullopt;  // a rule fired but is stuck
      progressed = false;
      changed = true;
      break;  // restart the scan: new violations may have appeared
    }
  }
  return q;
}

Trace realize(const Apo& apo) {
  PartialOrder q = apo.p;
  auto x1 = apo.x_events(1);
  auto x2 = apo.x_events(2);
  for (EventId e1 : x1)
    for (EventId e2 : x2) {
      if (apo.p.ordered(e2, e1)) continue;
      auto next = q.with_ordering(e1, e2);
      if (!next) throw std::logic_error("realize: closed APO produced a cycle");
      q = std::move(*next);
    }
  return q.linearize();
}

}  // namespace vc
