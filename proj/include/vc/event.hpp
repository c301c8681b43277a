#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vc {

using ThreadId = uint32_t;
using VarId = uint32_t;
using Value = int64_t;

enum class EventKind : uint8_t { Read, Write, Spawn, Join };

// One visible instruction instance. (thread, index) identifies the event
// within a trace; index counts visible events of the thread, 1-based.
// For Spawn/Join, var holds the target thread id and value is 0.
struct Event {
  ThreadId thread = 0;
  uint32_t index = 0;
  EventKind kind = EventKind::Read;
  VarId var = 0;
  Value value = 0;

  bool is_read() const { return kind == EventKind::Read; }
  bool is_write() const { return kind == EventKind::Write; }
  bool is_mem() const { return kind == EventKind::Read || kind == EventKind::Write; }

  friend bool operator==(const Event& a, const Event& b) {
    return a.thread == b.thread && a.index == b.index && a.kind == b.kind &&
           a.var == b.var && a.value == b.value;
  }
  friend bool operator!=(const Event& a, const Event& b) { return !(a == b); }
};

// Stable identity of an event across traces/partial orders.
struct EventId {
  ThreadId thread = 0;
  uint32_t index = 0;

  friend bool operator==(EventId a, EventId b) {
    return a.thread == b.thread && a.index == b.index;
  }
  friend bool operator!=(EventId a, EventId b) { return !(a == b); }
  friend bool operator<(EventId a, EventId b) {
    if (a.thread != b.thread) return a.thread < b.thread;
    return a.index < b.index;
  }
  uint64_t packed() const { return (uint64_t(thread) << 32) | index; }
};

inline EventId id_of(const Event& e) { return EventId{e.thread, e.index}; }

// Canonical order used for every deterministic iteration: (thread rank, index).
// Thread ranks are declaration ranks with main first (see Program).
inline bool canonical_less(const Event& a, const Event& b) {
  if (a.thread != b.thread) return a.thread < b.thread;
  return a.index < b.index;
}

// Two events conflict iff they access the same global and at least one writes.
inline bool conflict(const Event& a, const Event& b) {
  if (!a.is_mem() || !b.is_mem()) return false;
  if (a.var != b.var) return false;
  return a.is_write() || b.is_write();
}

struct Trace {
  std::vector<Event> events;

  size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  const Event& operator[](size_t i) const { return events[i]; }

  friend bool operator==(const Trace& a, const Trace& b) { return a.events == b.events; }
};

std::string to_string(EventKind k);
std::string event_to_string(const Event& e);

}  // namespace vc
