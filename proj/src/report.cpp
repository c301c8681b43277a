#include "vc/report.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace vc {

std::string states_digest(const std::set<LocalState>& states) {
  // XOR of per-element FNV-1a hashes: order-independent, exact for set
  // comparison purposes at these sizes.
  uint64_t acc = 0;
  for (const auto& [t, idx, val] : states) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix(t);
    mix(idx);
    mix(static_cast<uint64_t>(val));
    acc ^= h;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << acc;
  return os.str();
}

std::string report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["benchmark"] = r.benchmark;
  j["algo"] = r.algo;
  j["root"] = r.root;
  j["realized_traces"] = r.realized_traces;
  j["maximal_traces"] = r.maximal_traces;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  if (r.hb) classes["hb"] = *r.hb;
  if (r.vhb) classes["vhb"] = *r.vhb;
  if (r.obs) classes["obs"] = *r.obs;
  if (r.obs_c) classes["obs_c"] = *r.obs_c;
  j["classes"] = classes;
  j["states_digest"] = r.states_digest;
  auto arr = nlohmann::ordered_json::array();
  for (const AssertViolation& v : r.violations) {
    nlohmann::ordered_json jv;
    jv["thread"] = v.thread;
    jv["event"] = v.event_index;
    jv["line"] = v.line;
    arr.push_back(jv);
  }
  j["assert_violations"] = arr;
  j["time_ms"] = r.time_ms;
  j["status"] = r.status;
  return j.dump();
}

std::string report_to_table(const Report& r) {
  std::ostringstream os;
  os << "benchmark        " << r.benchmark << "\n"
     << "algo             " << r.algo << "\n"
     << "root             " << r.root << "\n"
     << "realized traces  " << r.realized_traces << "\n"
     << "maximal traces   " << r.maximal_traces << "\n";
  if (r.hb) os << "hb classes       " << *r.hb << "\n";
  if (r.vhb) os << "vhb classes      " << *r.vhb << "\n";
  if (r.obs) os << "obs classes      " << *r.obs << "\n";
  if (r.obs_c) os << "obs_c classes    " << *r.obs_c << "\n";
  os << "states digest    " << r.states_digest << "\n"
     << "assert failures  " << r.violations.size() << "\n"
     << "time ms          " << r.time_ms << "\n"
     << "status           " << r.status << "\n";
  return os.str();
}

}  // namespace vc
