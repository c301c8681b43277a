#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vc/program.hpp"

namespace vc {

struct AssertViolation {
  ThreadId thread = 0;
  uint32_t event_index = 0;  // last visible event of the thread before the assert
  int line = 0;

  friend bool operator==(const AssertViolation& a, const AssertViolation& b) {
    return a.thread == b.thread && a.event_index == b.event_index && a.line == b.line;
  }
  friend bool operator<(const AssertViolation& a, const AssertViolation& b) {
    if (a.thread != b.thread) return a.thread < b.thread;
    if (a.event_index != b.event_index) return a.event_index < b.event_index;
    return a.line < b.line;
  }
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Interpreter state. Cloneable value; `advance` runs invisible statements
// (assigns, branches, asserts, loop bookkeeping) so that the next visible
// event of every runnable thread is always fully determined.
class ExecState {
 public:
  explicit ExecState(const Program& p);

  // Next visible event of `t` with its value filled in, or nullopt if the
  // thread is finished, not yet spawned, or blocked (join/lock).
  std::optional<Event> peek(ThreadId t) const;

  // All enabled events, keyed by thread (deterministic order).
  std::map<ThreadId, Event> enabled_events() const;

  bool thread_finished(ThreadId t) const;
  bool all_finished() const;

  // Executes t's next visible event plus the invisible statements after it.
  // Throws RuntimeError if t is not enabled.
  Event step(ThreadId t);

  // Syntactic check: can a write (or unlock) still occur on t's remaining
  // control path, beyond its current statement? Over-approximates branches.
  bool write_may_follow(ThreadId t) const;

  Value global(VarId v) const { return globals_[v]; }
  const std::vector<AssertViolation>& violations() const { return violations_; }

  // Digest input: the values of all globals plus per-thread liveness,
  // identifying the final program state (used for state-space counting).
  std::string state_key() const;

 private:
  enum class Status { NotStarted, Running, Finished };

  struct Frame {
    const Block* block;
    size_t pos = 0;
    int repeats_left = 0;  // >0: re-enter block this many more times
  };

  struct ThreadState {
    Status status = Status::NotStarted;
    std::vector<Frame> control;
    std::map<std::string, Value> regs;
    uint32_t visible_count = 0;
    // Acquire event index per held mutex, for the release value (see below).
    std::map<VarId, uint32_t> held_acquire_idx;
  };

  const Stmt* current_stmt(ThreadId t) const;
  void advance(ThreadId t);  // run invisible statements until next visible/finish
  Value eval(const ThreadState& ts, const Expr& e) const;
  bool eval(const ThreadState& ts, const Cond& c) const;

  const Program* prog_;
  std::vector<Value> globals_;
  std::vector<ThreadState> threads_;
  std::vector<bool> lock_held_;  // indexed by VarId, mutex vars only
  std::vector<AssertViolation> violations_;
};

// Encoding of a lock-acquire event written by the matching release: globally
// unique per acquire and distinct from the initial value 0, so every release
// of the same mutex writes a different value.
inline Value release_value(ThreadId t, uint32_t acquire_idx) {
  return static_cast<Value>(t) * 1'000'000 + acquire_idx;
}

struct ReplayResult {
  bool ok = false;
  size_t fail_index = 0;      // first offending event when !ok
  std::string error;          // human-readable cause when !ok
  std::vector<AssertViolation> violations;
  std::string state_key;      // final state digest (valid when ok)
  bool maximal = false;       // no thread enabled at the end (valid when ok)
};

// Replays t against p; succeeds iff t is a valid trace of p.
ReplayResult replay(const Program& p, const Trace& t);

// Checks that `events` (TO-ordered, 1-based consecutive indices) is a valid
// local run of thread t when each read takes the value carried by its event.
// Ignores the other threads entirely; asserts are evaluated but not recorded.
bool local_replay(const Program& p, ThreadId t, const std::vector<Event>& events,
                  std::string* err = nullptr);

}  // namespace vc
