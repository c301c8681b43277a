#pragma once

#include <optional>

#include "vc/oracle.hpp"

namespace vc {

// Machine-readable run summary. Field order is fixed so that identical
// inputs and flags serialize byte-identically (time_ms stays 0 unless the
// caller opts into wall-clock timing).
struct Report {
  std::string benchmark;
  std::string algo;  // "vcdpor" | "oracle"
  std::string root;  // thread name
  size_t realized_traces = 0;
  size_t maximal_traces = 0;
  std::optional<size_t> hb, vhb, obs, obs_c;  // class counts when requested
  std::string states_digest;
  std::vector<AssertViolation> violations;
  long long time_ms = 0;
  std::string status = "ok";  // "ok" | "limit" | "error"
};

// Order-independent FNV-based digest of the reachable-state set.
std::string states_digest(const std::set<LocalState>& states);

std::string report_to_json(const Report& r);   // single line, stable key order
std::string report_to_table(const Report& r);  // human-readable

}  // namespace vc
