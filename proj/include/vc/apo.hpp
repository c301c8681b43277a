#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vc/exec.hpp"
#include "vc/partial_order.hpp"

namespace vc {

// Annotated partial order (X1, X2, P, val, S, GoodW). X1 = root-thread
// events, X2 = everything else; the value function is carried by the events
// in P's universe; BadW(r) is derived.
struct Apo {
  ThreadId root = 0;
  PartialOrder p;
  std::map<EventId, int> side;                       // root reads -> 1 | 2
  std::map<EventId, std::vector<EventId>> goodw;     // read -> sorted writes

  int side_of(EventId e) const { return e.thread == root ? 1 : 2; }  // I_P
  Value val(EventId e) const { return p.event(e).value; }
  bool is_good(EventId r, EventId w) const;
  std::vector<EventId> reads() const;

  // Events of one side, canonical order.
  std::vector<EventId> x_events(int side) const;

  // Canonical dump: events, ordered pairs, side, GoodW (golden tests/fuzzer).
  std::string debug_dump() const;
};

// Checks every structural invariant plus per-thread consistency via
// local_replay. Empty result means valid.
std::vector<std::string> validate(const Program& prog, const Apo& apo);

struct ClosedCheck {
  bool closed = true;
  EventId read{};  // first violating read when !closed
  int rule = 0;    // violated rule 1..3
};
ClosedCheck is_closed(const Apo& apo);

struct ClosureInsertion {
  int rule;  // 1..3
  EventId from, to;
};

// Unique weakest closed strengthening, or nullopt when infeasible. The read
// scan order defaults to canonical; `scan` overrides it (closure is
// order-independent, which tests exercise). `log` records insertions.
std::optional<Apo> closure(const Apo& apo,
                           const std::vector<EventId>* scan = nullptr,
                           std::vector<ClosureInsertion>* log = nullptr);

// Witness construction for a closed APO: orders X1 before X2 wherever P
// allows and linearizes. Every read of the result observes a good write.
Trace realize(const Apo& apo);

}  // namespace vc
