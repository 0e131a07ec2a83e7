#include <bit>
#include <sstream>
#include <stdexcept>

#include "wherecheck/modelgen.hpp"

namespace wherecheck {

namespace {

unsigned counter_width(std::size_t cap) { return static_cast<unsigned>(std::bit_width(cap + 1)); }

bool has_output_or_declass(const Command& c, const std::vector<bool>& real) {
  if (c.kind == Command::Kind::output) return true;
  if (c.kind == Command::Kind::declass && real[c.site]) return true;
  return (c.first && has_output_or_declass(*c.first, real)) || (c.second && has_output_or_declass(*c.second, real));
}

class Builder {
public:
  Builder(const Program& program, const Policy& policy, Level level, const ModelOptions& options)
      : program_(program), policy_(policy), real_(downgrade_sites(program, policy)) {
    m_.level = level;
    m_.bits = options.bits;
    m_.capacity = options.capacity;
  }

  ModelSkeleton build() {
    check_program(program_, policy_);
    declare();
    Spds& s = m_.spds;
    // Entry symbols first so that rules come out in preorder.
    const int end = s.symbol("g_end");
    int after_program = end;
    std::vector<int> fv_symbols;
    for (int slot : m_.final_vars) fv_symbols.push_back(s.symbol("fv_" + program_.variables()[slot]));
    if (!fv_symbols.empty()) after_program = fv_symbols.front();
    s.start = entry(program_.root());
    translate(program_.root(), after_program);

    const OutputChannel& fv = m_.outputs.back();
    for (std::size_t i = 0; i < fv_symbols.size(); ++i) {
      const int next = i + 1 < fv_symbols.size() ? fv_symbols[i + 1] : end;
      Relation r;
      r.assign(m_.tmp, global(m_.var_global[m_.final_vars[i]]));
      emit(fv_symbols[i], {fv.entry, next}, std::move(r), {RuleKind::final_push, 0, -1, -1});
      if (i == 0) emit_output_pop(fv);
    }
    m_.final_symbol = end;
    emit(end, {}, Relation{}, {RuleKind::last, 0, -1, -1});

    for (const auto& out : m_.outputs) s.init.push_back(m_eq(global(out.counter), MExpr::constant(0, width(out.counter))));
    for (const auto& in : m_.inputs) s.init.push_back(m_eq(global(in.counter), MExpr::constant(0, width(in.counter))));
    s.validate();
    return std::move(m_);
  }

private:
  void declare() {
    Spds& s = m_.spds;
    Layout& L = s.layout;
    const auto& vars = program_.variables();
    for (const auto& name : vars) {
      m_.var_global.push_back(L.add(name, m_.bits));
      m_.low_var.push_back(policy_.lattice.leq(policy_.level_of_variable(name), m_.level));
    }
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (m_.low_var[i]) m_.final_vars.push_back(static_cast<int>(i));

    if (has_output_or_declass(program_.root(), real_) || !m_.final_vars.empty()) m_.tmp = L.add("$tmp", m_.bits);

    m_.rho.assign(program_.sites().size(), -1);
    std::vector<int> dcells;
    for (const auto& site : program_.sites()) {
      if (!real_[site.id]) continue;
      DeclassSite d;
      d.site = site.id;
      d.rho = static_cast<int>(m_.declass_sites.size());
      d.target = site.command->target_index;
      const std::string g = "g" + std::to_string(site.id);
      d.entry = s.symbol("declass_entry_" + g);
      d.exit = s.symbol("declass_exit_" + g);
      m_.rho[site.id] = d.rho;
      dcells.push_back(L.add("D[" + std::to_string(d.rho) + "]", m_.bits));
      m_.declass_sites.push_back(d);
    }
    m_.dstore = L.add_group("D", dcells);

    const auto& chans = program_.channels();
    for (std::size_t ch = 0; ch < chans.size(); ++ch) {
      if (chans[ch] == kFinalChannel) throw PolicyError("channel name 'finalvars' is reserved");
      const auto& decl = policy_.channel(chans[ch]);
      if (!policy_.lattice.leq(decl.level, m_.level)) continue;
      if (decl.direction == Direction::input) {
        InputChannel in;
        in.channel = static_cast<int>(ch);
        in.name = chans[ch];
        in.length = decl.length.value_or(m_.capacity);
        std::vector<int> cells;
        for (std::size_t k = 0; k < in.length; ++k)
          cells.push_back(L.add("I_" + in.name + "[" + std::to_string(k) + "]", m_.bits));
        in.group = L.add_group("I_" + in.name, cells);
        in.counter = L.add("p(" + in.name + ")", counter_width(in.length));
        m_.inputs.push_back(in);
      } else {
        m_.outputs.push_back(make_output(static_cast<int>(ch), chans[ch], m_.capacity));
      }
    }
    m_.outputs.push_back(make_output(-1, kFinalChannel, m_.final_vars.size()));
  }

  OutputChannel make_output(int ch, const std::string& name, std::size_t cap) {
    Spds& s = m_.spds;
    Layout& L = s.layout;
    OutputChannel out;
    out.channel = ch;
    out.name = name;
    out.capacity = cap;
    out.entry = s.symbol("output_entry_" + name);
    out.exit = s.symbol("output_exit_" + name);
    std::vector<int> cells;
    for (std::size_t k = 0; k < cap; ++k) cells.push_back(L.add("O_" + name + "[" + std::to_string(k) + "]", m_.bits));
    out.group = L.add_group("O_" + name, cells);
    out.counter = L.add("q(" + name + ")", counter_width(cap));
    return out;
  }

  unsigned width(int var) const { return m_.spds.layout.global(var).width; }
  MExprPtr global(int var) const { return MExpr::global(m_.spds.layout, var); }

  int entry(const Command& c) {
    if (c.kind == Command::Kind::seq) return entry(*c.first);
    return m_.spds.symbol("g" + std::to_string(c.site));
  }

  // Completes the frame: everything not written is retained.
  void emit(int lhs, std::vector<int> rhs, Relation rel, RuleMeta meta) {
    rel.keep_all_except(m_.spds.layout, rel.written(m_.spds.layout));
    m_.spds.rules.push_back({lhs, std::move(rhs), std::move(rel), meta});
  }

  // Havoc of `var`: retained frame excludes it and nothing constrains it.
  void emit_havoc(int lhs, std::vector<int> rhs, int var, RuleMeta meta) {
    Relation rel;
    rel.keep_all_except(m_.spds.layout, {var});
    m_.spds.rules.push_back({lhs, std::move(rhs), std::move(rel), meta});
  }

  void emit_output_pop(const OutputChannel& out) {
    if (popped_.insert(out.exit).second)
      emit(out.exit, {}, Relation{}, {RuleKind::output_pop, 0, -1, out.channel});
  }

  const OutputChannel* output_for(int ch) const {
    for (const auto& o : m_.outputs)
      if (o.channel == ch) return &o;
    return nullptr;
  }

  const InputChannel* input_for(int ch) const {
    for (const auto& i : m_.inputs)
      if (i.channel == ch) return &i;
    return nullptr;
  }

  void translate(const Command& c, int next) {
    if (c.kind == Command::Kind::seq) {
      translate(*c.first, entry(*c.second));
      translate(*c.second, next);
      return;
    }
    const int g = entry(c);
    const RuleMeta plain{RuleKind::plain, 0, c.site, -1};
    switch (c.kind) {
    case Command::Kind::skip: emit(g, {next}, Relation{}, plain); break;
    case Command::Kind::assign: {
      Relation r;
      r.assign(m_.var_global[c.target_index], model_expr(*c.expr, m_));
      emit(g, {next}, std::move(r), plain);
      break;
    }
    case Command::Kind::declass: {
      if (!real_[c.site]) {
        Relation r;
        r.assign(m_.var_global[c.target_index], model_expr(*c.expr, m_));
        emit(g, {next}, std::move(r), plain);
        break;
      }
      const DeclassSite& d = m_.declass_sites[static_cast<std::size_t>(m_.rho[c.site])];
      Relation r;
      r.assign(m_.tmp, model_expr(*c.expr, m_));
      emit(g, {d.entry, next}, std::move(r), {RuleKind::declass_push, 0, c.site, -1});
      emit(d.exit, {}, Relation{}, {RuleKind::declass_pop, 0, c.site, -1});
      break;
    }
    case Command::Kind::if_then_else: {
      auto cond = model_expr(*c.expr, m_);
      const int t = entry(*c.first), e = entry(*c.second);
      emit(g, {t}, Relation{}.guard(m_ne(cond, zero(cond))), {RuleKind::branch, 0, c.site, -1});
      emit(g, {e}, Relation{}.guard(m_eq(cond, zero(cond))), {RuleKind::branch, 0, c.site, -1});
      translate(*c.first, next);
      translate(*c.second, next);
      break;
    }
    case Command::Kind::while_do: {
      auto cond = model_expr(*c.expr, m_);
      emit(g, {entry(*c.first)}, Relation{}.guard(m_ne(cond, zero(cond))), {RuleKind::branch, 0, c.site, -1});
      emit(g, {next}, Relation{}.guard(m_eq(cond, zero(cond))), {RuleKind::branch, 0, c.site, -1});
      translate(*c.first, g);
      break;
    }
    case Command::Kind::input: {
      const int x = m_.var_global[c.target_index];
      const InputChannel* in = input_for(c.channel_index);
      if (!in) {
        emit_havoc(g, {next}, x, {RuleKind::input_high, 0, c.site, c.channel_index});
        break;
      }
      Relation r;
      auto p = global(in->counter);
      r.guard(m_lt(p, MExpr::constant(static_cast<Value>(in->length), width(in->counter))));
      r.assign(x, MExpr::read(m_.spds.layout, in->group, p));
      r.assign(in->counter, MExpr::binary(BinOp::add, p, MExpr::constant(1, width(in->counter))));
      emit(g, {next}, std::move(r), {RuleKind::input_low, 0, c.site, c.channel_index});
      break;
    }
    case Command::Kind::output: {
      const OutputChannel* out = output_for(c.channel_index);
      if (!out) {
        emit(g, {next}, Relation{}, {RuleKind::output_high, 0, c.site, c.channel_index});
        break;
      }
      Relation r;
      r.assign(m_.tmp, model_expr(*c.expr, m_));
      emit(g, {out->entry, next}, std::move(r), {RuleKind::output_push, 0, c.site, c.channel_index});
      emit_output_pop(*out);
      break;
    }
    case Command::Kind::seq: break;
    }
  }

  static MExprPtr zero(const MExprPtr& e) { return MExpr::constant(0, e->width); }

  const Program& program_;
  const Policy& policy_;
  std::vector<bool> real_;
  ModelSkeleton m_;
  std::set<int> popped_;
};

} // namespace

std::size_t ModelSkeleton::last_rule() const {
  for (std::size_t i = 0; i < spds.rules.size(); ++i)
    if (spds.rules[i].meta.kind == RuleKind::last) return i;
  throw std::logic_error("model has no LastTrans rule");
}

MExprPtr model_expr(const Expr& e, const ModelSkeleton& skeleton) {
  switch (e.kind) {
  case Expr::Kind::constant: return MExpr::constant(e.value, skeleton.bits);
  case Expr::Kind::variable: return MExpr::global(skeleton.spds.layout, skeleton.var_global.at(static_cast<std::size_t>(e.index)));
  case Expr::Kind::binary:
    return MExpr::binary(e.op, model_expr(*e.lhs, skeleton), model_expr(*e.rhs, skeleton));
  }
  return nullptr;
}

ModelSkeleton build_model(const Program& program, const Policy& policy, Level level, const ModelOptions& options) {
  if (options.bits == 0 || options.bits > 16) throw std::invalid_argument("bits must be in [1, 16]");
  return Builder(program, policy, level, options).build();
}

BitBudget count_globals(const ModelSkeleton& m) {
  BitBudget b;
  const Layout& L = m.spds.layout;
  for (int id : m.var_global) b.variables += L.global(id).width;
  if (m.tmp >= 0) b.tmp = L.global(m.tmp).width;
  for (int id : L.group(m.dstore).cells) b.declass += L.global(id).width;
  b.channels = L.total_bits() - b.variables - b.tmp - b.declass;
  return b;
}

Spds single_run_model(const ModelSkeleton& m) {
  Spds s = m.spds;
  const Layout& L = s.layout;
  auto body = [&](int lhs, int rhs, Relation rel, RuleMeta meta) {
    rel.keep_all_except(L, rel.written(L));
    s.rules.push_back({lhs, {rhs}, std::move(rel), meta});
  };
  for (const auto& d : m.declass_sites) {
    Relation r;
    r.assign(m.var_global[static_cast<std::size_t>(d.target)], MExpr::global(L, m.tmp));
    body(d.entry, d.exit, std::move(r), {RuleKind::declass_body, 0, d.site, -1});
  }
  for (const auto& o : m.outputs) {
    auto q = MExpr::global(L, o.counter);
    const unsigned w = L.global(o.counter).width;
    Relation r;
    r.guard(m_lt(q, MExpr::constant(static_cast<Value>(o.capacity), w)));
    r.store(o.group, q, MExpr::global(L, m.tmp));
    r.assign(o.counter, MExpr::binary(BinOp::add, q, MExpr::constant(1, w)));
    body(o.entry, o.exit, std::move(r), {RuleKind::output_body, 0, -1, o.channel});
  }
  return s;
}

std::string site_table(const Program& program, const Policy& policy, const ModelSkeleton& m) {
  std::ostringstream out;
  out << "# level " << policy.lattice.name(m.level) << ", bits " << m.bits << ", capacity " << m.capacity << '\n';
  for (const auto& site : program.sites()) {
    out << "# site " << site.id << ' ' << to_string(site.kind) << " g" << site.id;
    if (m.rho[site.id] >= 0) out << " rho=" << m.rho[site.id];
    if (!site.channel.empty()) out << " channel=" << site.channel;
    out << '\n';
  }
  return out.str();
}

} // namespace wherecheck
