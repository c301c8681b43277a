#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vc/event.hpp"

namespace vc {

// Strict partial order over a set of events, always refining thread order
// (plus spawn/join synchronization). Persistent value type: strengthening or
// growing the order returns a new object. Reachability is kept as per-event
// bitsets, so ordered() is O(1) after construction.
class PartialOrder {
 public:
  PartialOrder() = default;

  // TO on the given events, plus spawn -> first child event, last child
  // event -> join (spawn -> join when the child has no events in the set).
  static PartialOrder from_thread_order(std::vector<Event> events);

  const std::vector<Event>& universe() const { return events_; }
  size_t size() const { return events_.size(); }
  bool contains(EventId id) const { return index_.count(id.packed()) != 0; }
  const Event& event(EventId id) const { return events_[index_.at(id.packed())]; }

  bool ordered(EventId a, EventId b) const {  // a < b
    return bit(index_.at(a.packed()), index_.at(b.packed()));
  }
  bool unordered(EventId a, EventId b) const {
    return a != b && !ordered(a, b) && !ordered(b, a);
  }

  // Transitive strengthening with a < b; nullopt signals a cycle.
  std::optional<PartialOrder> with_ordering(EventId a, EventId b) const;

  // Universe grown by e (which must be TO-last in its thread); incoming TO
  // and sync edges are added and closed.
  PartialOrder with_event(const Event& e) const;

  // True iff this order (the finer candidate) contains every ordered pair of
  // `coarser`; both must share a universe.
  bool refines(const PartialOrder& coarser) const;

  PartialOrder project(const std::vector<EventId>& keep) const;

  // Deterministic linear extension; smallest available event under `less`
  // first (canonical order by default).
  Trace linearize() const;
  Trace linearize(const std::function<bool(const Event&, const Event&)>& less) const;

  int width() const;               // longest antichain
  int mazurkiewicz_width() const;  // longest pairwise-conflicting antichain

  // VisibleW_P(r): conflicting writes w with r not-before w and no
  // conflicting w' strictly between w and r; plus its minimal/maximal
  // elements under this order.
  std::vector<EventId> visible_writes(EventId r) const;
  std::vector<EventId> min_writes(EventId r) const;
  std::vector<EventId> max_writes(EventId r) const;

  // All ordered pairs "a < b", one per line, canonical order (golden tests).
  std::string debug_edges() const;

  friend bool operator==(const PartialOrder& a, const PartialOrder& b) {
    return a.events_ == b.events_ && a.reach_ == b.reach_;
  }

 private:
  size_t idx(EventId id) const { return index_.at(id.packed()); }
  bool bit(size_t i, size_t j) const {
    return (reach_[i * words_ + j / 64] >> (j % 64)) & 1;
  }
  void set_bit(size_t i, size_t j) { reach_[i * words_ + j / 64] |= 1ull << (j % 64); }
  void rebuild_index();
  void close_edge(size_t a, size_t b);  // add a<b and re-close (no cycle check)
  std::vector<size_t> filtered_width_universe(const std::vector<size_t>& nodes) const;
  int subposet_width(const std::vector<size_t>& nodes) const;

  std::vector<Event> events_;            // canonically sorted
  std::map<uint64_t, size_t> index_;     // EventId::packed -> position
  size_t words_ = 0;                     // bitset words per row
  std::vector<uint64_t> reach_;          // n rows of words_ words
};

}  // namespace vc
