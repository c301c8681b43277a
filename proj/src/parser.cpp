#include "vc/program.hpp"

#include <algorithm>
#include <cctype>

namespace vc {

namespace {

struct Token {
  enum class Kind { Ident, Int, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  long long value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      tok_.kind = Token::Kind::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      tok_.kind = Token::Kind::Int;
      tok_.text = src_.substr(start, pos_ - start);
      tok_.value = std::stoll(tok_.text);
      return;
    }
    // multi-char comparison operators
    static const char* two[] = {"==", "!=", "<=", ">="};
    for (const char* s : two) {
      if (src_.compare(pos_, 2, s) == 0) {
        tok_.kind = Token::Kind::Sym;
        tok_.text = s;
        bump();
        bump();
        return;
      }
    }
    tok_.kind = Token::Kind::Sym;
    tok_.text = std::string(1, c);
    bump();
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Program parse() {
    // globals first
    while (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "var") parse_var();
    // thread declarations; record bodies as raw blocks, resolve names afterwards
    while (lex_.peek().kind != Token::Kind::End) parse_thread();
    if (prog_.threads.empty() || prog_.threads[0].name != "main")
      fail("program must declare 'thread main' first", lex_.peek());
    resolve_targets();
    check_spawns();
    desugar_initial_writes();
    return prog_;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& t) {
    throw ParseError(msg, t.line, t.col);
  }

  Token expect_ident(const char* what) {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Ident) fail(std::string("expected ") + what, t);
    return t;
  }

  void expect_sym(const char* s) {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Sym || t.text != s)
      fail(std::string("expected '") + s + "'", t);
  }

  void parse_var() {
    lex_.next();  // var
    Token name = expect_ident("variable name");
    if (var_ids_.count(name.text)) fail("duplicate variable '" + name.text + "'", name);
    Value init = 0;
    if (lex_.peek().kind == Token::Kind::Sym && lex_.peek().text == "=") {
      lex_.next();
      init = parse_int_literal();
    }
    var_ids_[name.text] = static_cast<VarId>(prog_.var_names.size());
    prog_.var_names.push_back(name.text);
    prog_.var_init.push_back(init);
    prog_.var_is_mutex.push_back(false);
  }

  Value parse_int_literal() {
    bool neg = false;
    if (lex_.peek().kind == Token::Kind::Sym && lex_.peek().text == "-") {
      lex_.next();
      neg = true;
    }
    Token t = lex_.next();
    if (t.kind != Token::Kind::Int) fail("expected integer literal", t);
    return neg ? -t.value : t.value;
  }

  void parse_thread() {
    Token kw = lex_.next();
    if (kw.kind != Token::Kind::Ident || kw.text != "thread")
      fail("expected 'thread'", kw);
    Token name = expect_ident("thread name");
    for (const auto& th : prog_.threads)
      if (th.name == name.text) fail("duplicate thread name '" + name.text + "'", name);
    expect_sym("{");
    ThreadBody body;
    body.name = name.text;
    body.statements = parse_block();
    prog_.threads.push_back(std::move(body));
  }

  Block parse_block() {
    Block block;
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Kind::Sym && t.text == "}") {
        lex_.next();
        return block;
      }
      if (t.kind == Token::Kind::End) fail("unexpected end of input, expected '}'", t);
      block.push_back(parse_stmt());
    }
  }

  Stmt parse_stmt() {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Ident) fail("expected statement", t);
    Stmt s;
    s.line = t.line;
    const std::string& kw = t.text;
    if (kw == "while") fail("unbounded loop", t);
    if (kw == "write") {
      s.kind = Stmt::Kind::Write;
      s.var = var_ref(expect_ident("variable name"));
      s.expr = parse_expr();
      return s;
    }
    if (kw == "if") {
      s.kind = Stmt::Kind::If;
      s.cond = parse_cond();
      expect_sym("{");
      s.then_block = parse_block();
      if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "else") {
        lex_.next();
        expect_sym("{");
        s.else_block = parse_block();
      }
      return s;
    }
    if (kw == "repeat") {
      s.kind = Stmt::Kind::Repeat;
      Token n = lex_.next();
      if (n.kind != Token::Kind::Int) fail("repeat requires a literal bound", n);
      s.repeat_count = static_cast<int>(n.value);
      expect_sym("{");
      s.then_block = parse_block();
      return s;
    }
    if (kw == "spawn" || kw == "join") {
      s.kind = kw == "spawn" ? Stmt::Kind::Spawn : Stmt::Kind::Join;
      Token name = expect_ident("thread name");
      s.reg = name.text;  // stash target name until all threads are declared
      return s;
    }
    if (kw == "lock" || kw == "unlock") {
      s.kind = kw == "lock" ? Stmt::Kind::Lock : Stmt::Kind::Unlock;
      Token name = expect_ident("variable name");
      s.var = var_ref(name);
      prog_.var_is_mutex[s.var] = true;
      return s;
    }
    if (kw == "assert") {
      s.kind = Stmt::Kind::Assert;
      s.cond = parse_cond();
      return s;
    }
    // REG = read VAR  |  REG = EXPR
    if (var_ids_.count(kw))
      fail("global '" + kw + "' can only be accessed via read/write", t);
    expect_sym("=");
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "read") {
      lex_.next();
      s.kind = Stmt::Kind::Read;
      s.reg = kw;
      s.var = var_ref(expect_ident("variable name"));
      return s;
    }
    s.kind = Stmt::Kind::Assign;
    s.reg = kw;
    s.expr = parse_expr();
    return s;
  }

  VarId var_ref(const Token& name) {
    auto it = var_ids_.find(name.text);
    if (it == var_ids_.end()) fail("unknown variable '" + name.text + "'", name);
    return it->second;
  }

  Cond parse_cond() {
    Cond c;
    c.lhs = parse_expr();
    Token op = lex_.next();
    if (op.kind != Token::Kind::Sym) fail("expected comparison operator", op);
    if (op.text == "==") c.cmp = Cond::Cmp::Eq;
    else if (op.text == "!=") c.cmp = Cond::Cmp::Ne;
    else if (op.text == "<") c.cmp = Cond::Cmp::Lt;
    else if (op.text == "<=") c.cmp = Cond::Cmp::Le;
    else if (op.text == ">") c.cmp = Cond::Cmp::Gt;
    else if (op.text == ">=") c.cmp = Cond::Cmp::Ge;
    else fail("expected comparison operator", op);
    c.rhs = parse_expr();
    return c;
  }

  ExprPtr parse_expr() {  // addition level
    ExprPtr e = parse_term();
    while (lex_.peek().kind == Token::Kind::Sym &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string op = lex_.next().text;
      auto node = std::make_shared<Expr>();
      node->op = op == "+" ? Expr::Op::Add : Expr::Op::Sub;
      node->lhs = e;
      node->rhs = parse_term();
      e = node;
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (lex_.peek().kind == Token::Kind::Sym &&
           (lex_.peek().text == "*" || lex_.peek().text == "%")) {
      std::string op = lex_.next().text;
      auto node = std::make_shared<Expr>();
      node->op = op == "*" ? Expr::Op::Mul : Expr::Op::Mod;
      node->lhs = e;
      node->rhs = parse_factor();
      e = node;
    }
    return e;
  }

  ExprPtr parse_factor() {
    Token t = lex_.next();
    auto node = std::make_shared<Expr>();
    if (t.kind == Token::Kind::Int) {
      node->op = Expr::Op::Literal;
      node->literal = t.value;
      return node;
    }
    if (t.kind == Token::Kind::Ident) {
      if (var_ids_.count(t.text))
        fail("global '" + t.text + "' cannot appear in expressions; use read", t);
      node->op = Expr::Op::Reg;
      node->reg = t.text;
      return node;
    }
    if (t.kind == Token::Kind::Sym && t.text == "(") {
      ExprPtr inner = parse_expr();
      expect_sym(")");
      return inner;
    }
    if (t.kind == Token::Kind::Sym && t.text == "-") {
      node->op = Expr::Op::Neg;
      node->lhs = parse_factor();
      return node;
    }
    fail("expected expression", t);
  }

  void resolve_targets_in(Block& block) {
    for (Stmt& s : block) {
      if (s.kind == Stmt::Kind::Spawn || s.kind == Stmt::Kind::Join) {
        auto id = prog_.thread_by_name(s.reg);
        if (!id)
          throw ParseError("spawn/join of unknown thread '" + s.reg + "'", s.line, 1);
        if (*id == 0)
          throw ParseError("cannot spawn/join the main thread", s.line, 1);
        s.target = *id;
        s.reg.clear();
      }
      resolve_targets_in(s.then_block);
      resolve_targets_in(s.else_block);
    }
  }

  void resolve_targets() {
    for (auto& th : prog_.threads) resolve_targets_in(th.statements);
  }

  void count_spawns(const Block& block, std::map<ThreadId, int>& counts, int multiplier) {
    for (const Stmt& s : block) {
      if (s.kind == Stmt::Kind::Spawn) counts[s.target] += multiplier;
      // both branches of an if may run in different executions; either is fine
      count_spawns(s.then_block, counts,
                   s.kind == Stmt::Kind::Repeat ? multiplier * std::max(s.repeat_count, 1)
                                                : multiplier);
      count_spawns(s.else_block, counts, multiplier);
    }
  }

  void check_spawns() {
    std::map<ThreadId, int> counts;
    for (const auto& th : prog_.threads) count_spawns(th.statements, counts, 1);
    for (auto [tid, n] : counts)
      if (n > 1)
        throw ParseError("thread '" + prog_.threads[tid].name + "' spawned more than once", 1, 1);
  }

  void desugar_initial_writes() {
    Block init;
    for (VarId v = 0; v < prog_.var_names.size(); ++v) {
      Stmt w;
      w.kind = Stmt::Kind::Write;
      w.var = v;
      auto lit = std::make_shared<Expr>();
      lit->op = Expr::Op::Literal;
      lit->literal = prog_.var_init[v];
      w.expr = lit;
      w.line = 0;
      init.push_back(std::move(w));
    }
    Block& main = prog_.threads[0].statements;
    main.insert(main.begin(), init.begin(), init.end());
  }

  Lexer lex_;
  Program prog_;
  std::map<std::string, VarId> var_ids_;
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).parse(); }

ThreadId Program::default_root() const {
  // first spawn statement in main's body, textual order
  struct Finder {
    std::optional<ThreadId> found;
    void visit(const Block& b) {
      for (const Stmt& s : b) {
        if (found) return;
        if (s.kind == Stmt::Kind::Spawn) {
          found = s.target;
          return;
        }
        visit(s.then_block);
        visit(s.else_block);
      }
    }
  } f;
  f.visit(threads[0].statements);
  return f.found.value_or(0);
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Read: return "r";
    case EventKind::Write: return "w";
    case EventKind::Spawn: return "spawn";
    case EventKind::Join: return "join";
  }
  return "?";
}

std::string event_to_string(const Event& e) {
  std::string s = "t" + std::to_string(e.thread) + "#" + std::to_string(e.index) + ":" +
                  to_string(e.kind);
  if (e.is_mem())
    s += "(v" + std::to_string(e.var) + "," + std::to_string(e.value) + ")";
  else
    s += "(t" + std::to_string(e.var) + ")";
  return s;
}

}  // namespace vc
