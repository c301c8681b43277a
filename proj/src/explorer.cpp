#include "vc/explorer.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>

namespace vc {

ChbEntry chb_get(const ChbMap& c, EventId r, ThreadId p) {
  auto it = c.find(r);
  if (it == c.end()) return {};
  auto jt = it->second.find(p);
  if (jt == it->second.end()) return {};
  return jt->second;
}

std::vector<EventId> candidate_writes(const Trace& t, const ChbMap& c, const Event& r) {
  std::vector<EventId> out;
  for (const Event& w : t.events) {
    if (!w.is_write() || !conflict(r, w)) continue;
    auto g = guard(t, id_of(w));
    ChbEntry e = chb_get(c, id_of(r), w.thread);
    bool in;
    if (!g)
      in = e.kind == ChbEntry::Top;
    else
      in = e.kind == ChbEntry::Top || e.kind == ChbEntry::Bot ||
           (e.kind == ChbEntry::Read && e.read.index < g->index);
    if (in) out.push_back(id_of(w));
  }
  return out;
}

Trace wextend(const Program& p, const Trace& t) {
  ExecState s(p);
  for (const Event& e : t.events) s.step(e.thread);
  Trace out = t;
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (ThreadId tid = 0; tid < p.thread_count(); ++tid) {
      auto e = s.peek(tid);
      if (e && !e->is_read()) {
        out.events.push_back(s.step(tid));
        progressed = true;
      }
    }
  }
  return out;
}

namespace {

struct LimitHit {};

struct Explorer {
  const Program& prog;
  const ExplorerConfig& cfg;
  ExplorationReport rep;
  std::chrono::steady_clock::time_point deadline{};
  size_t live_apos = 0;

  explicit Explorer(const Program& p, const ExplorerConfig& c) : prog(p), cfg(c) {
    if (cfg.time_limit_s > 0)
      deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(cfg.time_limit_s));
  }

  void run() {
    Apo empty;
    empty.root = cfg.root;
    try {
      visit(empty, ChbMap{});
    } catch (const LimitHit&) {
      rep.limit_exceeded = true;
    }
  }

  void check_limits() {
    if (cfg.max_traces > 0 && rep.realized_traces >= cfg.max_traces) throw LimitHit{};
    if (cfg.time_limit_s > 0 && std::chrono::steady_clock::now() > deadline)
      throw LimitHit{};
  }

  void visit(const Apo& P, const ChbMap& C) {
    ++rep.recursion_nodes;
    ++live_apos;
    rep.peak_live_apos = std::max(rep.peak_live_apos, live_apos);
    check_limits();

    Trace t = wextend(prog, realize(P));
    ++rep.realized_traces;
    ReplayResult rr = replay(prog, t);
    assert(rr.ok);
    if (rr.maximal) ++rep.maximal_traces;
    for (const Event& e : t.events) rep.states.insert({e.thread, e.index, e.value});
    for (const AssertViolation& v : rr.violations) rep.violations.insert(v);
    if (cfg.collect_traces) rep.traces.push_back(t);

    ExtendRequest req;
    for (const Event& e : t.events)
      if (!P.p.contains(id_of(e))) req.events.push_back(e);
    std::sort(req.events.begin(), req.events.end(), canonical_less);

    ExecState end(prog);
    for (const Event& e : t.events) end.step(e.thread);

    extend(P, req, cfg.prune, [&](const Apo& Q) {
      ChbMap cq = C;
      process_threads(Q, t, cq, end);
    });
    --live_apos;
  }

  void process_threads(const Apo& Q, const Trace& t, ChbMap& cq, const ExecState& end) {
    std::vector<ThreadId> order;
    auto enabled_read = [&](ThreadId p) {
      auto e = end.peek(p);
      return e && e->is_read();
    };
    if (enabled_read(cfg.root)) order.push_back(cfg.root);
    for (ThreadId p = 0; p < prog.thread_count(); ++p)
      if (p != cfg.root && enabled_read(p)) order.push_back(p);
    if (cfg.read_priority)
      std::stable_sort(order.begin(), order.end(), [&](ThreadId a, ThreadId b) {
        return end.write_may_follow(a) > end.write_may_follow(b);
      });
    for (ThreadId p : order) process_read(Q, t, cq, end, p);
  }

  void process_read(const Apo& Q, const Trace& t, ChbMap& cq, const ExecState& end,
                    ThreadId p) {
    Event r = *end.peek(p);
    EventId rid = id_of(r);
    auto cands = candidate_writes(t, cq, r);

    if (prog.var_is_mutex[r.var]) {
      // Remark 5.3: two acquires never share a good write
      std::vector<EventId> free;
      for (EventId w : cands) {
        bool used = false;
        for (auto& [r2, ws] : Q.goodw)
          if (Q.p.event(r2).var == r.var &&
              std::binary_search(ws.begin(), ws.end(), w))
            used = true;
        if (!used) free.push_back(w);
      }
      cands = std::move(free);
    }

    auto value_of = [&](EventId w) { return Q.p.contains(w) ? Q.val(w) : lookup(t, w); };

    struct Branch {
      int side;  // 0 for leaf reads
      Value v;
      std::vector<EventId> good;
    };
    std::vector<Branch> branches;
    auto push_branches = [&](int side, const std::vector<EventId>& ys) {
      std::vector<Value> vals;
      for (EventId w : ys) vals.push_back(value_of(w));
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (Value v : vals) {
        Branch b{side, v, {}};
        for (EventId w : ys)
          if (value_of(w) == v) b.good.push_back(w);
        branches.push_back(std::move(b));
      }
    };
    if (p == cfg.root) {
      for (int side = 1; side <= 2; ++side) {
        std::vector<EventId> ys;
        for (EventId w : cands)
          if ((w.thread == cfg.root) == (side == 1)) ys.push_back(w);
        push_branches(side, ys);
      }
    } else {
      push_branches(0, cands);
    }

    for (const Branch& b : branches) {
      Event rv = r;
      rv.value = b.v;
      ExtendRequest req;
      req.events = {rv};
      if (b.side != 0) req.side[rid] = b.side;
      req.goodw[rid] = b.good;
      extend(Q, req, cfg.prune, [&](const Apo& k) { visit(k, cq); });
    }

    // All branches for r are explored: record, per thread present in t, the
    // frontier below which good writes have been considered.
    std::map<ThreadId, EventId> last_of;
    for (const Event& e : t.events) last_of[e.thread] = id_of(e);
    for (auto& [q, last] : last_of) {
      auto g = guard(t, last);
      cq[rid][q] = g ? ChbEntry{ChbEntry::Read, *g} : ChbEntry{ChbEntry::Bot, {}};
    }
  }

  static Value lookup(const Trace& t, EventId w) {
    for (const Event& e : t.events)
      if (id_of(e) == w) return e.value;
    assert(false);
    return 0;
  }
};

}  // namespace

ExplorationReport vcdpor_run(const Program& p, const ExplorerConfig& cfg) {
  Explorer ex(p, cfg);
  ex.run();
  return ex.rep;
}

}  // namespace vc
