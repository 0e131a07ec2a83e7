#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "wherecheck/semantics.hpp"

namespace wherecheck {

Value apply_binop(BinOp op, Value a, Value b, unsigned bits) {
  const Value m = value_mask(bits);
  switch (op) {
  case BinOp::add: return (a + b) & m;
  case BinOp::sub: return (a - b) & m;
  case BinOp::mul: return (a * b) & m;
  case BinOp::eq: return a == b;
  case BinOp::ne: return a != b;
  case BinOp::lt: return a < b;
  case BinOp::le: return a <= b;
  case BinOp::bit_and: return a & b;
  case BinOp::bit_or: return a | b;
  }
  return 0;
}

Value eval_expr(const Expr& e, const std::vector<Value>& mu, unsigned bits) {
  switch (e.kind) {
  case Expr::Kind::constant: return e.value & value_mask(bits);
  case Expr::Kind::variable: return mu.at(static_cast<std::size_t>(e.index));
  case Expr::Kind::binary:
    return apply_binop(e.op, eval_expr(*e.lhs, mu, bits), eval_expr(*e.rhs, mu, bits), bits);
  }
  return 0;
}

bool Configuration::terminated() const {
  return cont.empty() || (cont.size() == 1 && cont.back()->kind == Command::Kind::skip);
}

const char* to_string(StepLabel::Kind k) {
  switch (k) {
  case StepLabel::Kind::plain: return "plain";
  case StepLabel::Kind::declass: return "declass";
  case StepLabel::Kind::halted: return "halted";
  case StepLabel::Kind::input_exhausted: return "input-exhausted";
  case StepLabel::Kind::capacity_exceeded: return "capacity-exceeded";
  }
  return "?";
}

const char* to_string(RunOutcome o) {
  switch (o) {
  case RunOutcome::halted: return "halted";
  case RunOutcome::input_exhausted: return "input-exhausted";
  case RunOutcome::capacity_exceeded: return "capacity-exceeded";
  case RunOutcome::out_of_fuel: return "nonterminating-within-budget";
  case RunOutcome::diverged: return "diverges";
  }
  return "?";
}

namespace {

bool contains_loop(const Command& c) {
  if (c.kind == Command::Kind::while_do) return true;
  return (c.first && contains_loop(*c.first)) || (c.second && contains_loop(*c.second));
}

} // namespace

Interpreter::Interpreter(const Program& program, const Policy& policy, unsigned bits)
    : program_(&program), real_downgrade_(downgrade_sites(program, policy)), bits_(bits),
      has_loops_(contains_loop(program.root())) {}

Configuration Interpreter::initial(std::vector<Value> mu, std::vector<std::vector<Value>> ins,
                                   std::size_t capacity) const {
  const std::size_t nchan = program_->channels().size();
  Configuration c;
  c.mu = std::move(mu);
  c.mu.resize(program_->variables().size(), 0);
  for (auto& v : c.mu) v &= value_mask(bits_);
  c.ins = std::move(ins);
  c.ins.resize(nchan);
  c.outs.assign(nchan, {});
  c.p.assign(nchan, 0);
  c.q.assign(nchan, 0);
  c.capacity.assign(nchan, capacity);
  c.cont.push_back(&program_->root());
  return c;
}

StepLabel Interpreter::advance(Configuration& c) const {
  StepLabel label;
  if (c.terminated()) {
    label.kind = StepLabel::Kind::halted;
    label.rule = "halt";
    return label;
  }
  const Command* cmd = c.cont.back();
  c.cont.pop_back();
  // Unfold sequences; the sequence rule carries the step of its head.
  while (cmd->kind == Command::Kind::seq) {
    c.cont.push_back(cmd->second.get());
    cmd = cmd->first.get();
  }
  label.site = cmd->site;
  switch (cmd->kind) {
  case Command::Kind::skip: label.rule = "skip"; break;
  case Command::Kind::assign:
    c.mu[cmd->target_index] = eval_expr(*cmd->expr, c.mu, bits_);
    label.rule = "assign";
    break;
  case Command::Kind::declass: {
    Value v = eval_expr(*cmd->expr, c.mu, bits_);
    c.mu[cmd->target_index] = v;
    if (real_downgrade_[cmd->site]) {
      label.kind = StepLabel::Kind::declass;
      label.value = v;
      label.rule = "declass";
    } else {
      label.rule = "declass-ordinary";
    }
    break;
  }
  case Command::Kind::if_then_else: {
    bool b = eval_expr(*cmd->expr, c.mu, bits_) != 0;
    c.cont.push_back(b ? cmd->first.get() : cmd->second.get());
    label.rule = b ? "if-true" : "if-false";
    break;
  }
  case Command::Kind::while_do: {
    bool b = eval_expr(*cmd->expr, c.mu, bits_) != 0;
    if (b) {
      c.cont.push_back(cmd);
      c.cont.push_back(cmd->first.get());
    }
    label.rule = b ? "while-true" : "while-false";
    break;
  }
  case Command::Kind::input: {
    const auto ch = static_cast<std::size_t>(cmd->channel_index);
    if (c.p[ch] >= c.ins[ch].size()) {
      c.cont.push_back(cmd);
      label.kind = StepLabel::Kind::input_exhausted;
      label.rule = "input";
      return label;
    }
    c.mu[cmd->target_index] = c.ins[ch][c.p[ch]] & value_mask(bits_);
    ++c.p[ch];
    label.rule = "input";
    break;
  }
  case Command::Kind::output: {
    const auto ch = static_cast<std::size_t>(cmd->channel_index);
    if (c.q[ch] >= c.capacity[ch]) {
      c.cont.push_back(cmd);
      label.kind = StepLabel::Kind::capacity_exceeded;
      label.rule = "output";
      return label;
    }
    Value v = eval_expr(*cmd->expr, c.mu, bits_);
    if (c.outs[ch].size() <= c.q[ch]) c.outs[ch].resize(c.q[ch] + 1, 0);
    c.outs[ch][c.q[ch]] = v;
    ++c.q[ch];
    label.rule = "output";
    break;
  }
  case Command::Kind::seq: break;
  }
  return label;
}

std::pair<Configuration, StepLabel> Interpreter::step(const Configuration& c) const {
  Configuration next = c;
  StepLabel l = advance(next);
  return {std::move(next), l};
}

Trace Interpreter::run(Configuration c, std::size_t fuel) const {
  Trace t;
  t.initial = c;
  for (std::size_t i = 0; i < fuel; ++i) {
    StepLabel l = advance(c);
    t.steps.push_back({c, l});
    if (l.terminal()) {
      if (l.kind == StepLabel::Kind::halted) t.outcome = RunOutcome::halted;
      if (l.kind == StepLabel::Kind::input_exhausted) t.outcome = RunOutcome::input_exhausted;
      if (l.kind == StepLabel::Kind::capacity_exceeded) t.outcome = RunOutcome::capacity_exceeded;
      return t;
    }
  }
  t.outcome = RunOutcome::out_of_fuel;
  return t;
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

} // namespace

Interpreter::DriveResult
Interpreter::drive(Configuration& c, std::size_t fuel, bool detect_cycles,
                   const std::function<bool(const StepLabel&, const Configuration&)>& observer) const {
  DriveResult r;
  std::unordered_set<std::vector<std::uint64_t>, KeyHash> seen;
  const bool cycles = detect_cycles && has_loops_;
  std::vector<std::uint64_t> key;
  while (r.steps < fuel) {
    if (cycles && !c.cont.empty() && c.cont.back()->kind == Command::Kind::while_do) {
      // Output contents never influence the future, so the loop-head state
      // is the store, the channel indices, and the pending commands.
      key.clear();
      for (Value v : c.mu) key.push_back(v);
      for (auto p : c.p) key.push_back(p);
      for (auto q : c.q) key.push_back(q);
      for (const Command* k : c.cont) key.push_back(reinterpret_cast<std::uintptr_t>(k));
      if (!seen.insert(key).second) {
        r.outcome = RunOutcome::diverged;
        return r;
      }
    }
    StepLabel l = advance(c);
    ++r.steps;
    if (!observer(l, c)) {
      r.stopped = true;
      return r;
    }
    if (l.terminal()) {
      if (l.kind == StepLabel::Kind::halted) r.outcome = RunOutcome::halted;
      if (l.kind == StepLabel::Kind::input_exhausted) r.outcome = RunOutcome::input_exhausted;
      if (l.kind == StepLabel::Kind::capacity_exceeded) r.outcome = RunOutcome::capacity_exceeded;
      return r;
    }
  }
  r.outcome = RunOutcome::out_of_fuel;
  return r;
}

std::string dump_trace(const Program& program, const Trace& trace) {
  std::ostringstream out;
  const Configuration* prev = &trace.initial;
  for (const auto& e : trace.steps) {
    out << (e.label.site >= 0 ? std::to_string(e.label.site) : std::string("-")) << " | " << e.label.rule
        << " | " << to_string(e.label.kind);
    if (e.label.kind == StepLabel::Kind::declass) out << "(" << e.label.value << ")";
    out << " | ";
    std::vector<std::string> changes;
    for (std::size_t i = 0; i < e.config.mu.size(); ++i)
      if (e.config.mu[i] != prev->mu[i])
        changes.push_back(program.variables()[i] + "=" + std::to_string(e.config.mu[i]));
    for (std::size_t i = 0; i < e.config.p.size(); ++i)
      if (e.config.p[i] != prev->p[i])
        changes.push_back("p(" + program.channels()[i] + ")=" + std::to_string(e.config.p[i]));
    for (std::size_t i = 0; i < e.config.q.size(); ++i)
      if (e.config.q[i] != prev->q[i]) {
        std::size_t k = e.config.q[i] - 1;
        changes.push_back(program.channels()[i] + "[" + std::to_string(k) +
                          "]=" + std::to_string(e.config.outs[i][k]));
      }
    for (std::size_t i = 0; i < changes.size(); ++i) out << (i ? " " : "") << changes[i];
    out << '\n';
    prev = &e.config;
  }
  return out.str();
}

bool low_equiv_store(const Program& program, const std::vector<Value>& mu1, const std::vector<Value>& mu2,
                     Level level, const Policy& policy) {
  for (std::size_t i = 0; i < program.variables().size(); ++i) {
    Level l = policy.level_of_variable(program.variables()[i]);
    if (policy.lattice.leq(l, level) && mu1.at(i) != mu2.at(i)) return false;
  }
  return true;
}

bool low_equiv_channels(const ChannelState& a, const ChannelState& b, Level channel_level, Level level,
                        const Policy& policy) {
  if (!policy.lattice.leq(channel_level, level)) return true;
  if (a.index != b.index) return false;
  for (std::size_t k = 0; k < a.index; ++k)
    if (a.values.at(k) != b.values.at(k)) return false;
  return true;
}

} // namespace wherecheck
