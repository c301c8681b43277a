#pragma once

#include <functional>

#include "vc/apo.hpp"

namespace vc {

// One Extend call: the new events (added in canonical order) plus the
// annotations of any new read. New events are all non-reads, or one single
// event (the explorer's two use cases).
struct ExtendRequest {
  std::vector<Event> events;
  std::map<EventId, int> side;
  std::map<EventId, std::vector<EventId>> goodw;
};

using ApoSink = std::function<void(const Apo&)>;

// Grows a minimal closed APO one event at a time. Root events append as a
// closed singleton; leaf events branch over every ordering against the
// conflicting X2 events already present (earliest-first), each branch closed;
// infeasible branches vanish. `prune` enables the never-good/unobservable
// write-pair skipping. Pull-based: candidates reach `sink` one at a time.
void extend(const Apo& apo, const ExtendRequest& req, bool prune, const ApoSink& sink);

// Q leaf-refines P: Q agrees with P on every ordered conflicting pair of
// leaf (non-root) events. Universes must match.
bool leaf_refines(const PartialOrder& q, const PartialOrder& p, ThreadId root);

}  // namespace vc
