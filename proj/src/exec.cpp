#include "vc/exec.hpp"

#include <sstream>

namespace vc {

ExecState::ExecState(const Program& p)
    : prog_(&p),
      globals_(p.var_names.size(), 0),
      threads_(p.thread_count()),
      lock_held_(p.var_names.size(), false) {
  for (ThreadId t = 0; t < p.thread_count(); ++t)
    threads_[t].control.push_back(Frame{&p.threads[t].statements, 0, 0});
  threads_[0].status = Status::Running;
  advance(0);
}

const Stmt* ExecState::current_stmt(ThreadId t) const {
  const ThreadState& ts = threads_[t];
  if (ts.status != Status::Running || ts.control.empty()) return nullptr;
  const Frame& f = ts.control.back();
  return &(*f.block)[f.pos];
}

void ExecState::advance(ThreadId t) {
  ThreadState& ts = threads_[t];
  while (!ts.control.empty()) {
    Frame& f = ts.control.back();
    if (f.pos >= f.block->size()) {
      if (f.repeats_left > 0) {
        --f.repeats_left;
        f.pos = 0;
      } else {
        ts.control.pop_back();
      }
      continue;
    }
    const Stmt& s = (*f.block)[f.pos];
    switch (s.kind) {
      case Stmt::Kind::Assign:
        ts.regs[s.reg] = eval(ts, *s.expr);
        ++f.pos;
        break;
      case Stmt::Kind::Assert:
        if (!eval(ts, s.cond))
          violations_.push_back(AssertViolation{t, ts.visible_count, s.line});
        ++f.pos;
        break;
      case Stmt::Kind::If: {
        bool taken = eval(ts, s.cond);
        ++f.pos;  // continue after the if once the branch block pops
        const Block* body = taken ? &s.then_block : &s.else_block;
        if (!body->empty()) ts.control.push_back(Frame{body, 0, 0});
        break;
      }
      case Stmt::Kind::Repeat: {
        ++f.pos;
        if (s.repeat_count > 0 && !s.then_block.empty())
          ts.control.push_back(Frame{&s.then_block, 0, s.repeat_count - 1});
        break;
      }
      default:
        return;  // visible statement: stop here
    }
  }
  ts.status = Status::Finished;
}

std::optional<Event> ExecState::peek(ThreadId t) const {
  const Stmt* s = current_stmt(t);
  if (!s) return std::nullopt;
  const ThreadState& ts = threads_[t];
  uint32_t idx = ts.visible_count + 1;
  switch (s->kind) {
    case Stmt::Kind::Write:
      return Event{t, idx, EventKind::Write, s->var, eval(ts, *s->expr)};
    case Stmt::Kind::Read:
      return Event{t, idx, EventKind::Read, s->var, globals_[s->var]};
    case Stmt::Kind::Spawn:
      return Event{t, idx, EventKind::Spawn, s->target, 0};
    case Stmt::Kind::Join:
      if (threads_[s->target].status != Status::Finished) return std::nullopt;
      return Event{t, idx, EventKind::Join, s->target, 0};
    case Stmt::Kind::Lock:
      if (lock_held_[s->var]) return std::nullopt;
      return Event{t, idx, EventKind::Read, s->var, globals_[s->var]};
    case Stmt::Kind::Unlock: {
      auto it = ts.held_acquire_idx.find(s->var);
      if (it == ts.held_acquire_idx.end())
        throw RuntimeError("unlock of mutex '" + prog_->var_names[s->var] +
                           "' not held by thread " + prog_->thread_name(t));
      return Event{t, idx, EventKind::Write, s->var, release_value(t, it->second)};
    }
    default:
      return std::nullopt;  // unreachable: invisible kinds are consumed by advance
  }
}

std::map<ThreadId, Event> ExecState::enabled_events() const {
  std::map<ThreadId, Event> out;
  for (ThreadId t = 0; t < prog_->thread_count(); ++t)
    if (auto e = peek(t)) out.emplace(t, *e);
  return out;
}

namespace {
bool block_has_write(const Block& b) {
  for (const Stmt& s : b) {
    if (s.kind == Stmt::Kind::Write || s.kind == Stmt::Kind::Unlock) return true;
    if (block_has_write(s.then_block) || block_has_write(s.else_block)) return true;
  }
  return false;
}
}  // namespace

bool ExecState::write_may_follow(ThreadId t) const {
  const ThreadState& ts = threads_[t];
  for (auto it = ts.control.rbegin(); it != ts.control.rend(); ++it) {
    const Block& b = *it->block;
    size_t start = it == ts.control.rbegin() ? it->pos + 1 : it->pos;
    for (size_t i = start; i < b.size(); ++i) {
      const Stmt& s = b[i];
      if (s.kind == Stmt::Kind::Write || s.kind == Stmt::Kind::Unlock) return true;
      if (block_has_write(s.then_block) || block_has_write(s.else_block)) return true;
    }
    if (it->repeats_left > 0 && block_has_write(b)) return true;
  }
  return false;
}

bool ExecState::thread_finished(ThreadId t) const {
  return threads_[t].status == Status::Finished;
}

bool ExecState::all_finished() const {
  for (const auto& ts : threads_)
    if (ts.status != Status::Finished) return false;
  return true;
}

Event ExecState::step(ThreadId t) {
  auto ev = peek(t);
  if (!ev) throw RuntimeError("thread " + prog_->thread_name(t) + " not enabled");
  const Stmt* s = current_stmt(t);
  ThreadState& ts = threads_[t];
  switch (s->kind) {
    case Stmt::Kind::Write:
      globals_[s->var] = ev->value;
      break;
    case Stmt::Kind::Read:
      ts.regs[s->reg] = ev->value;
      break;
    case Stmt::Kind::Spawn: {
      ThreadState& child = threads_[s->target];
      if (child.status != Status::NotStarted)
        throw RuntimeError("thread " + prog_->thread_name(s->target) + " spawned twice");
      child.status = Status::Running;
      break;
    }
    case Stmt::Kind::Join:
      break;
    case Stmt::Kind::Lock:
      lock_held_[s->var] = true;
      ts.held_acquire_idx[s->var] = ev->index;
      break;
    case Stmt::Kind::Unlock:
      globals_[s->var] = ev->value;
      lock_held_[s->var] = false;
      ts.held_acquire_idx.erase(s->var);
      break;
    default:
      throw RuntimeError("internal: invisible statement at step");
  }
  ++ts.visible_count;
  ++ts.control.back().pos;
  advance(t);
  if (s->kind == Stmt::Kind::Spawn) advance(s->target);
  return *ev;
}

namespace {

Value eval_expr(const std::map<std::string, Value>& regs, const Expr& e) {
  switch (e.op) {
    case Expr::Op::Literal:
      return e.literal;
    case Expr::Op::Reg: {
      auto it = regs.find(e.reg);
      return it == regs.end() ? 0 : it->second;
    }
    case Expr::Op::Add:
      return eval_expr(regs, *e.lhs) + eval_expr(regs, *e.rhs);
    case Expr::Op::Sub:
      return eval_expr(regs, *e.lhs) - eval_expr(regs, *e.rhs);
    case Expr::Op::Mul:
      return eval_expr(regs, *e.lhs) * eval_expr(regs, *e.rhs);
    case Expr::Op::Mod: {
      Value d = eval_expr(regs, *e.rhs);
      if (d == 0) throw RuntimeError("modulo by zero");
      return eval_expr(regs, *e.lhs) % d;
    }
    case Expr::Op::Neg:
      return -eval_expr(regs, *e.lhs);
  }
  return 0;
}

bool eval_cond(const std::map<std::string, Value>& regs, const Cond& c) {
  Value a = eval_expr(regs, *c.lhs), b = eval_expr(regs, *c.rhs);
  switch (c.cmp) {
    case Cond::Cmp::Eq: return a == b;
    case Cond::Cmp::Ne: return a != b;
    case Cond::Cmp::Lt: return a < b;
    case Cond::Cmp::Le: return a <= b;
    case Cond::Cmp::Gt: return a > b;
    case Cond::Cmp::Ge: return a >= b;
  }
  return false;
}

}  // namespace

Value ExecState::eval(const ThreadState& ts, const Expr& e) const {
  return eval_expr(ts.regs, e);
}

bool ExecState::eval(const ThreadState& ts, const Cond& c) const {
  return eval_cond(ts.regs, c);
}

bool local_replay(const Program& p, ThreadId t, const std::vector<Event>& events,
                  std::string* err) {
  auto bail = [&](const std::string& m) {
    if (err) *err = "thread " + p.thread_name(t) + ": " + m;
    return false;
  };
  struct Frame {
    const Block* block;
    size_t pos = 0;
    int repeats_left = 0;
  };
  std::vector<Frame> control{Frame{&p.threads[t].statements, 0, 0}};
  std::map<std::string, Value> regs;
  std::map<VarId, uint32_t> held;
  size_t i = 0;
  while (!control.empty()) {
    Frame& f = control.back();
    if (f.pos >= f.block->size()) {
      if (f.repeats_left > 0) {
        --f.repeats_left;
        f.pos = 0;
      } else {
        control.pop_back();
      }
      continue;
    }
    const Stmt& s = (*f.block)[f.pos];
    switch (s.kind) {
      case Stmt::Kind::Assign:
        regs[s.reg] = eval_expr(regs, *s.expr);
        ++f.pos;
        continue;
      case Stmt::Kind::Assert:
        eval_cond(regs, s.cond);
        ++f.pos;
        continue;
      case Stmt::Kind::If: {
        bool taken = eval_cond(regs, s.cond);
        ++f.pos;
        const Block* body = taken ? &s.then_block : &s.else_block;
        if (!body->empty()) control.push_back(Frame{body, 0, 0});
        continue;
      }
      case Stmt::Kind::Repeat:
        ++f.pos;
        if (s.repeat_count > 0 && !s.then_block.empty())
          control.push_back(Frame{&s.then_block, 0, s.repeat_count - 1});
        continue;
      default:
        break;  // visible
    }
    if (i >= events.size()) return true;  // valid prefix
    const Event& e = events[i];
    if (e.thread != t || e.index != i + 1)
      return bail("bad event identity at position " + std::to_string(i));
    switch (s.kind) {
      case Stmt::Kind::Write:
        if (!e.is_write() || e.var != s.var || e.value != eval_expr(regs, *s.expr))
          return bail("write mismatch at " + event_to_string(e));
        break;
      case Stmt::Kind::Read:
        if (!e.is_read() || e.var != s.var)
          return bail("read mismatch at " + event_to_string(e));
        regs[s.reg] = e.value;
        break;
      case Stmt::Kind::Spawn:
        if (e.kind != EventKind::Spawn || e.var != s.target)
          return bail("spawn mismatch at " + event_to_string(e));
        break;
      case Stmt::Kind::Join:
        if (e.kind != EventKind::Join || e.var != s.target)
          return bail("join mismatch at " + event_to_string(e));
        break;
      case Stmt::Kind::Lock:
        if (!e.is_read() || e.var != s.var)
          return bail("lock mismatch at " + event_to_string(e));
        held[s.var] = e.index;
        break;
      case Stmt::Kind::Unlock: {
        auto it = held.find(s.var);
        if (it == held.end()) return bail("unlock of mutex not held");
        if (!e.is_write() || e.var != s.var || e.value != release_value(t, it->second))
          return bail("unlock mismatch at " + event_to_string(e));
        held.erase(it);
        break;
      }
      default:
        return bail("internal: invisible statement reached event matching");
    }
    ++i;
    ++f.pos;
  }
  if (i < events.size()) return bail("more events than the thread can emit");
  return true;
}

std::string ExecState::state_key() const {
  std::ostringstream os;
  for (Value v : globals_) os << v << ',';
  os << '|';
  for (const auto& ts : threads_) {
    os << (ts.status == Status::Finished ? 'F' : ts.status == Status::Running ? 'R' : 'N')
       << ts.visible_count << ';';
    for (const auto& [name, v] : ts.regs) os << name << '=' << v << ',';
  }
  return os.str();
}

ReplayResult replay(const Program& p, const Trace& t) {
  ReplayResult res;
  ExecState s(p);
  for (size_t i = 0; i < t.size(); ++i) {
    const Event& want = t[i];
    std::optional<Event> have;
    try {
      have = s.peek(want.thread);
      if (!have) {
        res.fail_index = i;
        res.error = "thread not enabled";
        return res;
      }
      if (*have != want) {
        res.fail_index = i;
        res.error = "event mismatch: expected " + event_to_string(*have) + ", got " +
                    event_to_string(want);
        return res;
      }
      s.step(want.thread);
    } catch (const RuntimeError& e) {
      res.fail_index = i;
      res.error = e.what();
      return res;
    }
  }
  res.ok = true;
  res.violations = s.violations();
  res.state_key = s.state_key();
  res.maximal = s.enabled_events().empty();
  return res;
}

}  // namespace vc
