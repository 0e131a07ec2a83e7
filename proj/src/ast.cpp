#include "wherecheck/ast.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace wherecheck {

const char* to_string(BinOp op) {
  switch (op) {
  case BinOp::add: return "+";
  case BinOp::sub: return "-";
  case BinOp::mul: return "*";
  case BinOp::eq: return "==";
  case BinOp::ne: return "!=";
  case BinOp::lt: return "<";
  case BinOp::le: return "<=";
  case BinOp::bit_and: return "&";
  case BinOp::bit_or: return "|";
  }
  return "?";
}

const char* to_string(SiteKind kind) {
  switch (kind) {
  case SiteKind::plain: return "plain";
  case SiteKind::declass: return "declass";
  case SiteKind::input: return "input";
  case SiteKind::output: return "output";
  }
  return "?";
}

ExprPtr Expr::constant(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::constant;
  e->value = v;
  return e;
}

ExprPtr Expr::variable(std::string name, int index) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::variable;
  e->name = std::move(name);
  e->index = index;
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::binary;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

namespace {

std::shared_ptr<Command> make(Command::Kind k) {
  auto c = std::make_shared<Command>();
  c->kind = k;
  return c;
}

} // namespace

CommandPtr Command::skip() { return make(Kind::skip); }

CommandPtr Command::assign(std::string target, ExprPtr e) {
  auto c = make(Kind::assign);
  c->target = std::move(target);
  c->expr = std::move(e);
  return c;
}

CommandPtr Command::declass(std::string target, ExprPtr e) {
  auto c = make(Kind::declass);
  c->target = std::move(target);
  c->expr = std::move(e);
  return c;
}

CommandPtr Command::if_then_else(ExprPtr cond, CommandPtr then_branch, CommandPtr else_branch) {
  auto c = make(Kind::if_then_else);
  c->expr = std::move(cond);
  c->first = std::move(then_branch);
  c->second = std::move(else_branch);
  return c;
}

CommandPtr Command::while_do(ExprPtr cond, CommandPtr body) {
  auto c = make(Kind::while_do);
  c->expr = std::move(cond);
  c->first = std::move(body);
  return c;
}

CommandPtr Command::seq(CommandPtr first, CommandPtr second) {
  auto c = make(Kind::seq);
  c->first = std::move(first);
  c->second = std::move(second);
  return c;
}

CommandPtr Command::input(std::string target, std::string channel) {
  auto c = make(Kind::input);
  c->target = std::move(target);
  c->channel = std::move(channel);
  return c;
}

CommandPtr Command::output(ExprPtr e, std::string channel) {
  auto c = make(Kind::output);
  c->expr = std::move(e);
  c->channel = std::move(channel);
  return c;
}

namespace {

void collect_names(const Expr& e, std::set<std::string>& vars) {
  switch (e.kind) {
  case Expr::Kind::constant: break;
  case Expr::Kind::variable: vars.insert(e.name); break;
  case Expr::Kind::binary:
    collect_names(*e.lhs, vars);
    collect_names(*e.rhs, vars);
    break;
  }
}

void collect_names(const Command& c, std::set<std::string>& vars, std::set<std::string>& chans) {
  if (!c.target.empty()) vars.insert(c.target);
  if (!c.channel.empty()) chans.insert(c.channel);
  if (c.expr) collect_names(*c.expr, vars);
  if (c.first) collect_names(*c.first, vars, chans);
  if (c.second) collect_names(*c.second, vars, chans);
}

int slot_of(const std::vector<std::string>& names, const std::string& n) {
  auto it = std::lower_bound(names.begin(), names.end(), n);
  if (it == names.end() || *it != n) return -1;
  return static_cast<int>(it - names.begin());
}

} // namespace

Program::Program(const CommandPtr& root) {
  if (!root) throw std::invalid_argument("Program: null root");
  std::set<std::string> vars, chans;
  collect_names(*root, vars, chans);
  variables_.assign(vars.begin(), vars.end());
  channels_.assign(chans.begin(), chans.end());

  std::function<ExprPtr(const ExprPtr&)> resolve_expr = [&](const ExprPtr& e) -> ExprPtr {
    switch (e->kind) {
    case Expr::Kind::constant: return Expr::constant(e->value);
    case Expr::Kind::variable: return Expr::variable(e->name, slot_of(variables_, e->name));
    case Expr::Kind::binary: return Expr::binary(e->op, resolve_expr(e->lhs), resolve_expr(e->rhs));
    }
    return e;
  };

  // Preorder: a command takes its number before its children.
  std::function<CommandPtr(const CommandPtr&)> clone = [&](const CommandPtr& c) -> CommandPtr {
    auto n = std::make_shared<Command>(*c);
    if (c->kind != Command::Kind::seq) {
      n->site = static_cast<int>(sites_.size());
      SiteKind kind = SiteKind::plain;
      if (c->kind == Command::Kind::declass) kind = SiteKind::declass;
      if (c->kind == Command::Kind::input) kind = SiteKind::input;
      if (c->kind == Command::Kind::output) kind = SiteKind::output;
      sites_.push_back(SiteLabel{n->site, kind, c->channel, n.get()});
    }
    if (!c->target.empty()) n->target_index = slot_of(variables_, c->target);
    if (!c->channel.empty()) n->channel_index = slot_of(channels_, c->channel);
    if (c->expr) n->expr = resolve_expr(c->expr);
    if (c->first) n->first = clone(c->first);
    if (c->second) n->second = clone(c->second);
    return n;
  };
  root_ = clone(root);
}

int Program::variable_index(const std::string& name) const { return slot_of(variables_, name); }
int Program::channel_index(const std::string& name) const { return slot_of(channels_, name); }

bool same_expr(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
  case Expr::Kind::constant: return a.value == b.value;
  case Expr::Kind::variable: return a.name == b.name;
  case Expr::Kind::binary:
    return a.op == b.op && same_expr(*a.lhs, *b.lhs) && same_expr(*a.rhs, *b.rhs);
  }
  return false;
}

bool same_command(const Command& a, const Command& b) {
  if (a.kind != b.kind || a.target != b.target || a.channel != b.channel) return false;
  if (static_cast<bool>(a.expr) != static_cast<bool>(b.expr)) return false;
  if (a.expr && !same_expr(*a.expr, *b.expr)) return false;
  if (static_cast<bool>(a.first) != static_cast<bool>(b.first)) return false;
  if (a.first && !same_command(*a.first, *b.first)) return false;
  if (static_cast<bool>(a.second) != static_cast<bool>(b.second)) return false;
  if (a.second && !same_command(*a.second, *b.second)) return false;
  return true;
}

namespace {

int precedence(BinOp op) {
  switch (op) {
  case BinOp::bit_or: return 1;
  case BinOp::bit_and: return 2;
  case BinOp::eq:
  case BinOp::ne: return 3;
  case BinOp::lt:
  case BinOp::le: return 4;
  case BinOp::add:
  case BinOp::sub: return 5;
  case BinOp::mul: return 6;
  }
  return 0;
}

void print_expr(const Expr& e, int context, std::string& out) {
  switch (e.kind) {
  case Expr::Kind::constant: out += std::to_string(e.value); return;
  case Expr::Kind::variable: out += e.name; return;
  case Expr::Kind::binary: {
    // All operators are left-associative, so a right operand at the same
    // level needs parentheses.
    int p = precedence(e.op);
    bool paren = p < context;
    if (paren) out += '(';
    print_expr(*e.lhs, p, out);
    out += ' ';
    out += to_string(e.op);
    out += ' ';
    print_expr(*e.rhs, p + 1, out);
    if (paren) out += ')';
    return;
  }
  }
}

void print_command(const Command& c, std::string& out) {
  switch (c.kind) {
  case Command::Kind::skip: out += "skip"; return;
  case Command::Kind::assign:
    out += c.target + " := ";
    print_expr(*c.expr, 0, out);
    return;
  case Command::Kind::declass:
    out += c.target + " := declass(";
    print_expr(*c.expr, 0, out);
    out += ')';
    return;
  case Command::Kind::if_then_else:
    out += "if ";
    print_expr(*c.expr, 0, out);
    out += " then ";
    print_command(*c.first, out);
    out += " else ";
    print_command(*c.second, out);
    out += " fi";
    return;
  case Command::Kind::while_do:
    out += "while ";
    print_expr(*c.expr, 0, out);
    out += " do ";
    print_command(*c.first, out);
    out += " od";
    return;
  case Command::Kind::seq:
    // The parser nests ';' to the right, which is the only shape printed
    // back faithfully.
    print_command(*c.first, out);
    out += "; ";
    print_command(*c.second, out);
    return;
  case Command::Kind::input:
    out += "input(" + c.target + ", " + c.channel + ")";
    return;
  case Command::Kind::output:
    out += "output(";
    print_expr(*c.expr, 0, out);
    out += ", " + c.channel + ")";
    return;
  }
}

void collect_ordered(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
  case Expr::Kind::constant: return;
  case Expr::Kind::variable:
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    return;
  case Expr::Kind::binary:
    collect_ordered(*e.lhs, out);
    collect_ordered(*e.rhs, out);
    return;
  }
}

} // namespace

std::string pretty_print(const Expr& e) {
  std::string out;
  print_expr(e, 0, out);
  return out;
}

std::string pretty_print(const Command& c) {
  std::string out;
  print_command(c, out);
  return out;
}

std::vector<std::string> expr_variables(const Expr& e) {
  std::vector<std::string> out;
  collect_ordered(e, out);
  return out;
}

} // namespace wherecheck
