#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vc/event.hpp"

namespace vc {

// Expressions over registers and literals: + - * % with parentheses.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op { Literal, Reg, Add, Sub, Mul, Mod, Neg };
  Op op = Op::Literal;
  Value literal = 0;
  std::string reg;  // Op::Reg
  ExprPtr lhs, rhs;
};

// COND: EXPR cmp EXPR.
struct Cond {
  enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };
  Cmp cmp = Cmp::Eq;
  ExprPtr lhs, rhs;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
  enum class Kind { Write, Read, Assign, If, Repeat, Spawn, Join, Lock, Unlock, Assert };
  Kind kind = Kind::Write;
  int line = 0;

  VarId var = 0;          // Write/Read/Lock/Unlock
  std::string reg;        // Read/Assign destination
  ExprPtr expr;           // Write value / Assign value
  Cond cond;              // If/Assert
  Block then_block;       // If/Repeat body
  Block else_block;       // If
  int repeat_count = 0;   // Repeat
  ThreadId target = 0;    // Spawn/Join
};

struct ThreadBody {
  std::string name;
  Block statements;
};

struct Program {
  std::vector<ThreadBody> threads;       // threads[0] is main
  std::vector<std::string> var_names;
  std::vector<Value> var_init;
  std::vector<bool> var_is_mutex;        // used by lock/unlock
  ThreadId entry = 0;

  ThreadId thread_count() const { return static_cast<ThreadId>(threads.size()); }
  const std::string& thread_name(ThreadId t) const { return threads[t].name; }
  std::optional<ThreadId> thread_by_name(const std::string& n) const {
    for (ThreadId i = 0; i < thread_count(); ++i)
      if (threads[i].name == n) return i;
    return std::nullopt;
  }
  // Default root: first thread spawned from main, else main.
  ThreadId default_root() const;
  // Number of implicit initial-write events prepended to main.
  uint32_t initial_write_count() const { return static_cast<uint32_t>(var_names.size()); }
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_), column(col_) {}
};

// Parses the .vp source. Implicit initial writes (one per declared global,
// in declaration order) are desugared into the front of main's body.
Program parse_program(const std::string& text);

}  // namespace vc
