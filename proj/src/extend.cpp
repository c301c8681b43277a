#include "vc/extend.hpp"

#include <algorithm>

namespace vc {

namespace {

// Combined GoodW membership across the current APO and the request.
bool ever_good(const Apo& apo, const ExtendRequest& req, EventId w) {
  for (auto& [r, ws] : apo.goodw)
    if (std::binary_search(ws.begin(), ws.end(), w)) return true;
  for (auto& [r, ws] : req.goodw)
    if (std::find(ws.begin(), ws.end(), w) != ws.end()) return true;
  return false;
}

// Conservative unobservability: w is not visible to any conflicting read in
// the universe. (Observation in a linearization implies visibility in K.)
bool unobservable(const PartialOrder& p, EventId w) {
  const Event& we = p.event(w);
  for (const Event& e : p.universe()) {
    if (!e.is_read() || e.var != we.var) continue;
    auto vis = p.visible_writes(id_of(e));
    if (std::find(vis.begin(), vis.end(), w) != vis.end()) return false;
  }
  return true;
}

struct Extender {
  const ExtendRequest& req;
  bool prune;
  const ApoSink& sink;

  void add_events(const Apo& apo, size_t i) {
    if (i == req.events.size()) {
      sink(apo);
      return;
    }
    const Event& e = req.events[i];
    Apo grown = apo;
    grown.p = apo.p.with_event(e);
    if (e.is_read()) {
      EventId id = id_of(e);
      if (auto it = req.side.find(id); it != req.side.end()) grown.side[id] = it->second;
      auto ws = req.goodw.at(id);
      std::sort(ws.begin(), ws.end());
      grown.goodw[id] = std::move(ws);
    }
    if (e.thread == apo.root) {
      finish(std::move(grown), i);
      return;
    }
    // leaf event: branch over orderings against conflicting X2 events
    std::vector<EventId> confl;
    for (const Event& c : apo.p.universe())
      if (c.thread != apo.root && conflict(e, c)) confl.push_back(id_of(c));
    orient(std::move(grown), id_of(e), confl, 0, i);
  }

  void orient(Apo apo, EventId e, const std::vector<EventId>& confl, size_t k, size_t i) {
    while (k < confl.size() && !apo.p.unordered(e, confl[k])) ++k;
    if (prune && k < confl.size()) {
      const Event& ee = apo.p.event(e);
      const Event& ce = apo.p.event(confl[k]);
      if (ee.is_write() && ce.is_write()) {
        bool never_good = !ever_good(apo, req, e) && !ever_good(apo, req, confl[k]);
        if (never_good || unobservable(apo.p, e) || unobservable(apo.p, confl[k])) {
          orient(std::move(apo), e, confl, k + 1, i);
          return;
        }
      }
    }
    if (k == confl.size()) {
      finish(std::move(apo), i);
      return;
    }
    if (auto q = apo.p.with_ordering(e, confl[k])) {  // earliest position first
      Apo branch = apo;
      branch.p = std::move(*q);
      orient(std::move(branch), e, confl, k + 1, i);
    }
    if (auto q = apo.p.with_ordering(confl[k], e)) {
      Apo branch = std::move(apo);
      branch.p = std::move(*q);
      orient(std::move(branch), e, confl, k + 1, i);
    }
  }

  void finish(Apo apo, size_t i) {
    if (auto closed = closure(apo)) add_events(*closed, i + 1);
  }
};

}  // namespace

void extend(const Apo& apo, const ExtendRequest& req, bool prune, const ApoSink& sink) {
  Extender ex{req, prune, sink};
  ex.add_events(apo, 0);
}

bool leaf_refines(const PartialOrder& q, const PartialOrder& p, ThreadId root) {
  const auto& evs = p.universe();
  for (size_t i = 0; i < evs.size(); ++i) {
    if (evs[i].thread == root) continue;
    for (size_t j = 0; j < evs.size(); ++j) {
      if (i == j || evs[j].thread == root) continue;
      if (!conflict(evs[i], evs[j])) continue;
      EventId a = id_of(evs[i]), b = id_of(evs[j]);
      if (p.ordered(a, b) && !q.ordered(a, b)) return false;
    }
  }
  return true;
}

}  // namespace vc
