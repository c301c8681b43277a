#include "vc/partial_order.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace vc {

void PartialOrder::rebuild_index() {
  index_.clear();
  for (size_t i = 0; i < events_.size(); ++i)
    index_[id_of(events_[i]).packed()] = i;
  words_ = (events_.size() + 63) / 64;
}

void PartialOrder::close_edge(size_t a, size_t b) {
  // every x with x <= a inherits b and everything after b
  for (size_t i = 0; i < events_.size(); ++i) {
    if (i != a && !bit(i, a)) continue;
    for (size_t w = 0; w < words_; ++w)
      reach_[i * words_ + w] |= reach_[b * words_ + w];
    set_bit(i, b);
  }
}

PartialOrder PartialOrder::from_thread_order(std::vector<Event> events) {
  PartialOrder po;
  std::sort(events.begin(), events.end(), canonical_less);
  po.events_ = std::move(events);
  po.rebuild_index();
  size_t n = po.events_.size();
  po.reach_.assign(n * po.words_, 0);
  if (n == 0) return po;

  // per-thread first/last and spawn/join locations
  std::map<ThreadId, size_t> first_of, last_of, spawn_of, join_of;
  std::vector<std::vector<size_t>> succ(n);
  for (size_t i = 0; i < n; ++i) {
    const Event& e = po.events_[i];
    if (!first_of.count(e.thread)) first_of[e.thread] = i;
    last_of[e.thread] = i;
    if (e.index > 1) succ[i - 1].push_back(i);  // TO edge (canonically adjacent)
    if (e.kind == EventKind::Spawn) spawn_of[e.var] = i;
    if (e.kind == EventKind::Join) join_of[e.var] = i;
  }
  for (auto [t, s] : spawn_of) {
    if (auto it = first_of.find(t); it != first_of.end())
      succ[s].push_back(it->second);
    else if (auto jt = join_of.find(t); jt != join_of.end())
      succ[s].push_back(jt->second);
  }
  for (auto [t, j] : join_of)
    if (auto it = last_of.find(t); it != last_of.end()) succ[it->second].push_back(j);

  // transitive closure in reverse topological order
  std::vector<int> indeg(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j : succ[i]) ++indeg[j];
  std::vector<size_t> order, stack;
  for (size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) stack.push_back(i);
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    order.push_back(i);
    for (size_t j : succ[i])
      if (--indeg[j] == 0) stack.push_back(j);
  }
  if (order.size() != n) throw std::logic_error("cyclic thread order input");
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    size_t i = *it;
    for (size_t j : succ[i]) {
      for (size_t w = 0; w < po.words_; ++w)
        po.reach_[i * po.words_ + w] |= po.reach_[j * po.words_ + w];
      po.set_bit(i, j);
    }
  }
  return po;
}

std::optional<PartialOrder> PartialOrder::with_ordering(EventId a, EventId b) const {
  size_t ia = idx(a), ib = idx(b);
  if (ia == ib || bit(ib, ia)) return std::nullopt;  // reflexive or cycle
  if (bit(ia, ib)) return *this;
  PartialOrder q = *this;
  q.close_edge(ia, ib);
  return q;
}

PartialOrder PartialOrder::with_event(const Event& e) const {
  PartialOrder q;
  q.events_ = events_;
  auto pos_it = std::lower_bound(q.events_.begin(), q.events_.end(), e, canonical_less);
  size_t pos = static_cast<size_t>(pos_it - q.events_.begin());
  q.events_.insert(pos_it, e);
  q.rebuild_index();
  size_t n = q.events_.size();
  q.reach_.assign(n * q.words_, 0);
  auto remap = [pos](size_t i) { return i >= pos ? i + 1 : i; };
  for (size_t i = 0; i + 1 < n; ++i)
    for (size_t j = 0; j + 1 < n; ++j)
      if (bit(i, j)) q.set_bit(remap(i), remap(j));

  // incoming edges of the appended event
  auto link = [&](EventId from) {
    if (q.contains(from)) q.close_edge(q.idx(from), pos);
  };
  if (e.index > 1) link(EventId{e.thread, e.index - 1});
  if (e.index == 1) {
    for (const Event& s : events_)
      if (s.kind == EventKind::Spawn && s.var == e.thread) link(id_of(s));
  }
  // keep an already-present join of e's thread after e (events may be added
  // in an order that differs from trace order)
  for (const Event& s : events_)
    if (s.kind == EventKind::Join && s.var == e.thread)
      q.close_edge(pos, q.idx(id_of(s)));
  if (e.kind == EventKind::Join) {
    EventId last{0, 0};
    bool found = false;
    for (const Event& s : events_)
      if (s.thread == e.var && s.index >= last.index) last = id_of(s), found = true;
    if (found) {
      link(last);
    } else {
      for (const Event& s : events_)
        if (s.kind == EventKind::Spawn && s.var == e.var) link(id_of(s));
    }
  }
  return q;
}

bool PartialOrder::refines(const PartialOrder& coarser) const {
  if (events_ != coarser.events_) return false;
  for (size_t i = 0; i < reach_.size(); ++i)
    if (coarser.reach_[i] & ~reach_[i]) return false;
  return true;
}

PartialOrder PartialOrder::project(const std::vector<EventId>& keep) const {
  PartialOrder q;
  for (EventId id : keep) q.events_.push_back(event(id));
  std::sort(q.events_.begin(), q.events_.end(), canonical_less);
  q.rebuild_index();
  q.reach_.assign(q.events_.size() * q.words_, 0);
  for (size_t i = 0; i < q.events_.size(); ++i)
    for (size_t j = 0; j < q.events_.size(); ++j)
      if (i != j && bit(idx(id_of(q.events_[i])), idx(id_of(q.events_[j]))))
        q.set_bit(i, j);
  return q;
}

Trace PartialOrder::linearize() const {
  return linearize(canonical_less);
}

Trace PartialOrder::linearize(
    const std::function<bool(const Event&, const Event&)>& less) const {
  size_t n = events_.size();
  std::vector<bool> done(n, false);
  Trace t;
  for (size_t step = 0; step < n; ++step) {
    int best = -1;
    for (size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      bool avail = true;
      for (size_t j = 0; j < n && avail; ++j)
        if (!done[j] && j != i && bit(j, i)) avail = false;
      if (!avail) continue;
      if (best < 0 || less(events_[i], events_[best])) best = static_cast<int>(i);
    }
    assert(best >= 0);
    done[best] = true;
    t.events.push_back(events_[best]);
  }
  return t;
}

int PartialOrder::subposet_width(const std::vector<size_t>& nodes) const {
  // Dilworth: width = |nodes| - max matching in the comparability bigraph
  size_t m = nodes.size();
  std::vector<int> match_r(m, -1);
  std::vector<bool> used;
  std::function<bool(size_t)> try_kuhn = [&](size_t li) -> bool {
    for (size_t ri = 0; ri < m; ++ri) {
      if (used[ri] || !bit(nodes[li], nodes[ri])) continue;
      used[ri] = true;
      if (match_r[ri] < 0 || try_kuhn(static_cast<size_t>(match_r[ri]))) {
        match_r[ri] = static_cast<int>(li);
        return true;
      }
    }
    return false;
  };
  int matching = 0;
  for (size_t li = 0; li < m; ++li) {
    used.assign(m, false);
    if (try_kuhn(li)) ++matching;
  }
  return static_cast<int>(m) - matching;
}

int PartialOrder::width() const {
  std::vector<size_t> all(events_.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return subposet_width(all);
}

int PartialOrder::mazurkiewicz_width() const {
  if (events_.empty()) return 0;
  int best = 1;
  std::map<VarId, std::vector<size_t>> writes, reads;
  for (size_t i = 0; i < events_.size(); ++i) {
    const Event& e = events_[i];
    if (e.is_write()) writes[e.var].push_back(i);
    if (e.is_read()) reads[e.var].push_back(i);
  }
  for (auto& [v, ws] : writes) {
    best = std::max(best, subposet_width(ws));
    for (size_t r : reads[v]) {
      std::vector<size_t> with_r = ws;
      with_r.push_back(r);
      best = std::max(best, subposet_width(with_r));
    }
  }
  return best;
}

std::vector<EventId> PartialOrder::visible_writes(EventId r) const {
  size_t ir = idx(r);
  const Event& re = events_[ir];
  std::vector<EventId> out;
  for (size_t iw = 0; iw < events_.size(); ++iw) {
    const Event& w = events_[iw];
    if (!w.is_write() || w.var != re.var) continue;
    if (bit(ir, iw)) continue;  // r < w: not visible
    bool hidden = false;
    for (size_t iw2 = 0; iw2 < events_.size() && !hidden; ++iw2) {
      const Event& w2 = events_[iw2];
      if (!w2.is_write() || w2.var != re.var) continue;
      if (bit(iw, iw2) && bit(iw2, ir)) hidden = true;
    }
    if (!hidden) out.push_back(id_of(w));
  }
  return out;
}

std::vector<EventId> PartialOrder::min_writes(EventId r) const {
  auto vis = visible_writes(r);
  std::vector<EventId> out;
  for (EventId w : vis) {
    bool minimal = true;
    for (EventId w2 : vis)
      if (w2 != w && ordered(w2, w)) minimal = false;
    if (minimal) out.push_back(w);
  }
  return out;
}

std::vector<EventId> PartialOrder::max_writes(EventId r) const {
  auto vis = visible_writes(r);
  std::vector<EventId> out;
  for (EventId w : vis) {
    bool maximal = true;
    for (EventId w2 : vis)
      if (w2 != w && ordered(w, w2)) maximal = false;
    if (maximal) out.push_back(w);
  }
  return out;
}

std::string PartialOrder::debug_edges() const {
  std::ostringstream os;
  for (size_t i = 0; i < events_.size(); ++i)
    for (size_t j = 0; j < events_.size(); ++j)
      if (i != j && bit(i, j))
        os << event_to_string(events_[i]) << " < " << event_to_string(events_[j]) << "\n";
  return os.str();
}

}  // namespace vc
