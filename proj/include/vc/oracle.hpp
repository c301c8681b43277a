#pragma once

#include <random>

#include "vc/explorer.hpp"

namespace vc {

struct EnumerateResult {
  std::vector<Trace> traces;  // deterministic order (canonical DFS)
  bool limit_exceeded = false;
};

// All maximal traces via DFS over scheduler choices.
EnumerateResult enumerate_maximal(const Program& p, size_t max_traces = 0);

struct ClassCounts {
  size_t hb = 0, vhb = 0, obs = 0, obs_c = 0;
};
ClassCounts class_report(const std::vector<Trace>& traces, ThreadId root);

struct StateReport {
  std::set<LocalState> states;
  std::set<AssertViolation> violations;
};
StateReport reachable_states(const Program& p, const std::vector<Trace>& traces);

// Enumerates linear extensions of apo.p; returns the first in which every
// read observes a good write, or nullopt. Throws when the universe exceeds
// max_events.
std::optional<Trace> brute_force_realizable(const Apo& apo, size_t max_events = 8);

// A consistent APO sampled by running a small random branch-free program and
// re-annotating it (values, sides, good-write subsets, extra orderings).
struct RandomApo {
  Program program;
  Apo apo;
};
RandomApo random_consistent_apo(std::mt19937& rng);

}  // namespace vc
