#include "vc/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace vc {

namespace {

bool dfs_maximal(ExecState& s, Trace& cur, EnumerateResult& res, size_t max_traces) {
  auto enabled = s.enabled_events();
  if (enabled.empty()) {
    if (max_traces > 0 && res.traces.size() >= max_traces) {
      res.limit_exceeded = true;
      return false;
    }
    res.traces.push_back(cur);
    return true;
  }
  for (auto& [tid, ev] : enabled) {
    ExecState next = s;
    cur.events.push_back(next.step(tid));
    bool keep_going = dfs_maximal(next, cur, res, max_traces);
    cur.events.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

EnumerateResult enumerate_maximal(const Program& p, size_t max_traces) {
  EnumerateResult res;
  ExecState s(p);
  Trace cur;
  dfs_maximal(s, cur, res, max_traces);
  return res;
}

ClassCounts class_report(const std::vector<Trace>& traces, ThreadId root) {
  std::vector<TraceAnalysis> as;
  as.reserve(traces.size());
  for (const Trace& t : traces) as.push_back(analyze(t, root));
  ClassCounts c;
  c.hb = partition(as, hb_equiv).size();
  c.vhb = partition(as, vhb_equiv).size();
  c.obs = partition(as, obs_equiv).size();
  c.obs_c = partition(as, obs_c_equiv).size();
  return c;
}

StateReport reachable_states(const Program& p, const std::vector<Trace>& traces) {
  StateReport rep;
  for (const Trace& t : traces) {
    for (const Event& e : t.events) rep.states.insert({e.thread, e.index, e.value});
    ReplayResult rr = replay(p, t);
    for (const AssertViolation& v : rr.violations) rep.violations.insert(v);
  }
  return rep;
}

namespace {

bool dfs_linearize(const Apo& apo, const std::vector<std::vector<bool>>& ord,
                   std::vector<bool>& done, size_t placed,
                   std::map<VarId, size_t>& last_write, std::vector<size_t>& order) {
  const auto& evs = apo.p.universe();
  if (placed == evs.size()) return true;
  for (size_t i = 0; i < evs.size(); ++i) {
    if (done[i]) continue;
    bool avail = true;
    for (size_t j = 0; j < evs.size() && avail; ++j)
      if (!done[j] && j != i && ord[j][i]) avail = false;
    if (!avail) continue;
    const Event& e = evs[i];
    if (e.is_read()) {
      auto it = last_write.find(e.var);
      if (it == last_write.end() || !apo.is_good(id_of(e), id_of(evs[it->second])))
        continue;  // this placement would give r a non-good observation
    }
    done[i] = true;
    order.push_back(i);
    std::optional<size_t> saved;
    if (e.is_write()) {
      auto it = last_write.find(e.var);
      if (it != last_write.end()) saved = it->second;
      last_write[e.var] = i;
    }
    if (dfs_linearize(apo, ord, done, placed + 1, last_write, order)) return true;
    if (e.is_write()) {
      if (saved)
        last_write[e.var] = *saved;
      else
        last_write.erase(e.var);
    }
    order.pop_back();
    done[i] = false;
  }
  return false;
}

}  // namespace

std::optional<Trace> brute_force_realizable(const Apo& apo, size_t max_events) {
  const auto& evs = apo.p.universe();
  if (evs.size() > max_events)
    throw std::runtime_error("brute_force_realizable: universe too large");
  std::vector<std::vector<bool>> ord(evs.size(), std::vector<bool>(evs.size(), false));
  for (size_t i = 0; i < evs.size(); ++i)
    for (size_t j = 0; j < evs.size(); ++j)
      if (i != j) ord[i][j] = apo.p.ordered(id_of(evs[i]), id_of(evs[j]));
  std::vector<bool> done(evs.size(), false);
  std::map<VarId, size_t> last_write;
  std::vector<size_t> order;
  if (!dfs_linearize(apo, ord, done, 0, last_write, order)) return std::nullopt;
  Trace t;
  for (size_t i : order) t.events.push_back(evs[i]);
  return t;
}

namespace {

Stmt make_write(VarId var, Value v, int line) {
  Stmt s;
  s.kind = Stmt::Kind::Write;
  s.var = var;
  s.line = line;
  auto lit = std::make_shared<Expr>();
  lit->op = Expr::Op::Literal;
  lit->literal = v;
  s.expr = lit;
  return s;
}

Stmt make_read(const std::string& reg, VarId var, int line) {
  Stmt s;
  s.kind = Stmt::Kind::Read;
  s.reg = reg;
  s.var = var;
  s.line = line;
  return s;
}

Stmt make_spawn(ThreadId target, int line) {
  Stmt s;
  s.kind = Stmt::Kind::Spawn;
  s.target = target;
  s.line = line;
  return s;
}

template <class T>
std::vector<T> random_nonempty_subset(std::mt19937& rng, const std::vector<T>& in) {
  std::vector<T> out;
  while (out.empty()) {
    out.clear();
    for (const T& x : in)
      if (rng() % 2) out.push_back(x);
  }
  return out;
}

}  // namespace

RandomApo random_consistent_apo(std::mt19937& rng) {
  RandomApo ra;
  Program& pr = ra.program;
  size_t nvars = 1 + rng() % 2;
  bool two_leaves = rng() % 2 == 0;
  static const char* names[] = {"x", "y"};
  for (size_t v = 0; v < nvars; ++v) {
    pr.var_names.push_back(names[v]);
    pr.var_init.push_back(0);
    pr.var_is_mutex.push_back(false);
  }
  size_t nthreads = two_leaves ? 3 : 2;
  pr.threads.resize(nthreads);
  pr.threads[0].name = "main";
  pr.threads[1].name = "a";
  if (two_leaves) pr.threads[2].name = "b";

  int line = 1;
  for (size_t v = 0; v < nvars; ++v)
    pr.threads[0].statements.push_back(make_write(static_cast<VarId>(v), 0, line++));
  pr.threads[0].statements.push_back(make_spawn(1, line++));
  if (two_leaves) pr.threads[0].statements.push_back(make_spawn(2, line++));

  size_t used = nvars + nthreads - 1;
  size_t budget = 8 - used;
  auto fill_thread = [&](ThreadId t, size_t count) {
    for (size_t i = 0; i < count; ++i) {
      VarId var = static_cast<VarId>(rng() % nvars);
      if (rng() % 2) {
        pr.threads[t].statements.push_back(
            make_write(var, static_cast<Value>(rng() % 3), line));
      } else {
        pr.threads[t].statements.push_back(
            make_read("r" + std::to_string(line), var, line));
      }
      ++line;
    }
  };
  size_t na = 1 + rng() % std::min<size_t>(3, budget);
  fill_thread(1, na);
  budget -= na;
  if (two_leaves && budget > 0) fill_thread(2, rng() % (std::min<size_t>(2, budget) + 1));

  // run it (canonical greedy schedule) to collect a valid event set
  std::vector<Event> events;
  ExecState s(pr);
  while (true) {
    auto en = s.enabled_events();
    if (en.empty()) break;
    events.push_back(s.step(en.begin()->first));
  }

  // re-annotate read values from same-variable writes (branch-free programs
  // stay consistent under any reassignment)
  std::map<VarId, std::vector<size_t>> writes_on;
  for (size_t i = 0; i < events.size(); ++i)
    if (events[i].is_write()) writes_on[events[i].var].push_back(i);
  for (Event& e : events)
    if (e.is_read()) {
      const auto& ws = writes_on[e.var];
      e.value = events[ws[rng() % ws.size()]].value;
    }

  Apo& apo = ra.apo;
  apo.root = 1;
  apo.p = PartialOrder::from_thread_order(events);

  // sprinkle extra orderings (may make the APO infeasible — that is desired)
  for (int k = static_cast<int>(rng() % 3); k > 0; --k) {
    EventId a = id_of(events[rng() % events.size()]);
    EventId b = id_of(events[rng() % events.size()]);
    if (a == b || !apo.p.unordered(a, b)) continue;
    if (auto q = apo.p.with_ordering(a, b)) apo.p = std::move(*q);
  }

  for (const Event& e : events) {
    if (!e.is_read()) continue;
    EventId rid = id_of(e);
    std::vector<EventId> same_value;
    for (size_t wi : writes_on[e.var])
      if (events[wi].value == e.value) same_value.push_back(id_of(events[wi]));
    if (e.thread == apo.root) {
      std::vector<EventId> s1, s2;
      for (EventId w : same_value)
        (w.thread == apo.root ? s1 : s2).push_back(w);
      int side;
      if (s1.empty())
        side = 2;
      else if (s2.empty())
        side = 1;
      else
        side = 1 + static_cast<int>(rng() % 2);
      apo.side[rid] = side;
      auto good = random_nonempty_subset(rng, side == 1 ? s1 : s2);
      std::sort(good.begin(), good.end());
      apo.goodw[rid] = std::move(good);
    } else {
      auto good = random_nonempty_subset(rng, same_value);
      std::sort(good.begin(), good.end());
      apo.goodw[rid] = std::move(good);
    }
  }
  return ra;
}

}  // namespace vc
