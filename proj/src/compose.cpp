#include <stdexcept>

#include "wherecheck/compose.hpp"

namespace wherecheck {

const char* to_string(ComposeMode mode) { return mode == ComposeMode::storematch ? "storematch" : "tr"; }

namespace {

MExprPtr remap(const MExprPtr& e, const Layout& layout, const std::vector<int>& vmap, const std::vector<int>& gmap) {
  if (!e) return e;
  switch (e->kind) {
  case MExpr::Kind::constant: return e;
  case MExpr::Kind::global: return MExpr::global(layout, vmap.at(static_cast<std::size_t>(e->var)));
  case MExpr::Kind::read:
    return MExpr::read(layout, gmap.at(static_cast<std::size_t>(e->group)), remap(e->index, layout, vmap, gmap));
  case MExpr::Kind::binary:
    return MExpr::binary(e->op, remap(e->lhs, layout, vmap, gmap), remap(e->rhs, layout, vmap, gmap));
  }
  return e;
}

class Composer {
public:
  Composer(const ModelSkeleton& skeleton, ComposeMode mode) : sk_(skeleton) {
    c_.mode = mode;
    c_.skeleton = skeleton;
  }

  ComposedModel run() {
    if (sk_.final_symbol < 0 || sk_.outputs.empty()) throw std::invalid_argument("malformed skeleton");
    layout();
    Spds& s = c_.spds;
    const Spds& k = sk_.spds;
    c_.init_symbol = s.symbol("g_init");
    for (const auto& name : k.symbols) s.symbol(name);
    for (const auto& name : k.symbols) s.symbol("xi_" + name);
    c_.idle = s.symbol("idle");
    c_.error = s.symbol("error");
    if (c_.mode == ComposeMode::tr) {
      c_.check = s.symbol("check");
      c_.done = s.symbol("done");
    }
    s.start = c_.init_symbol;
    for (const auto& g : k.init) s.init.push_back(remap(g, s.layout, c_.map1, c_.gmap1));
    if (c_.mode == ComposeMode::tr)
      for (const auto& o : sk_.outputs)
        if (o.channel >= 0) s.init.push_back(m_eq(var2(o.counter), MExpr::constant(0, width(o.counter))));

    // Start: run 2's visible variables equal run 1's.
    {
      Relation r;
      std::set<int> written;
      for (std::size_t slot = 0; slot < sk_.var_global.size(); ++slot) {
        if (!sk_.low_var[slot]) continue;
        const int x = sk_.var_global[slot];
        r.assign(c_.map2[x], var1(x));
        written.insert(c_.map2[x]);
      }
      r.keep_all_except(s.layout, written);
      s.rules.push_back({c_.init_symbol, {sym1(k.start)}, std::move(r), {RuleKind::init, 0, -1, -1}});
    }

    const std::size_t last = sk_.last_rule();
    for (std::size_t i = 0; i < k.rules.size(); ++i)
      if (i != last) s.rules.push_back(copy(k.rules[i], 1));
    for (std::size_t i = 0; i < k.rules.size(); ++i) {
      Rule r = copy(k.rules[i], 2);
      if (i == last) {
        r.rhs = {c_.mode == ComposeMode::tr ? c_.check : sym2(k.rules[i].lhs)};
        r.meta.kind = c_.mode == ComposeMode::tr ? RuleKind::check : RuleKind::final_loop;
      }
      s.rules.push_back(std::move(r));
    }
    reset();
    for (const auto& d : sk_.declass_sites) declass(d);
    for (const auto& o : sk_.outputs) {
      if (c_.mode == ComposeMode::tr && o.channel >= 0) duplicated_output(o);
      else matched_output(o);
    }
    s.rules.push_back({c_.idle, {c_.idle}, Relation{}.keep_all_except(s.layout, {}), {RuleKind::idle_loop, 0, -1, -1}});
    if (c_.mode == ComposeMode::tr) checker();
    s.validate();
    return std::move(c_);
  }

private:
  bool duplicated(int g) const {
    if (c_.mode != ComposeMode::tr) return false;
    for (const auto& o : sk_.outputs) {
      if (o.channel < 0) continue;
      if (g == o.counter) return true;
      for (int cell : sk_.spds.layout.group(o.group).cells)
        if (g == cell) return true;
    }
    return false;
  }

  void layout() {
    const Layout& K = sk_.spds.layout;
    Layout& L = c_.spds.layout;
    std::vector<bool> program_var(K.globals().size(), false);
    for (int g : sk_.var_global) program_var[static_cast<std::size_t>(g)] = true;
    for (int g = 0; g < static_cast<int>(K.globals().size()); ++g) {
      const Global& glob = K.global(g);
      const int id = L.add(glob.name, glob.width);
      c_.map1.push_back(id);
      c_.map2.push_back(id);
      if (program_var[static_cast<std::size_t>(g)] || duplicated(g)) {
        c_.map2.back() = L.add("xi(" + glob.name + ")", glob.width);
        companions_.insert(c_.map2.back());
      }
    }
    for (int gr = 0; gr < static_cast<int>(K.groups().size()); ++gr) {
      const ArrayGroup& group = K.group(gr);
      std::vector<int> cells1, cells2;
      for (int cell : group.cells) {
        cells1.push_back(c_.map1[static_cast<std::size_t>(cell)]);
        cells2.push_back(c_.map2[static_cast<std::size_t>(cell)]);
      }
      const int id = L.add_group(group.name, cells1);
      c_.gmap1.push_back(id);
      c_.gmap2.push_back(cells1 == cells2 || cells1.empty() ? id : L.add_group("xi(" + group.name + ")", cells2));
    }
    for (int g = 0; g < static_cast<int>(K.globals().size()); ++g)
      if (c_.map2[static_cast<std::size_t>(g)] != c_.map1[static_cast<std::size_t>(g)])
        originals_.insert(c_.map1[static_cast<std::size_t>(g)]);
  }

  unsigned width(int skeleton_global) const { return sk_.spds.layout.global(skeleton_global).width; }
  MExprPtr var1(int g) const { return MExpr::global(c_.spds.layout, c_.map1[static_cast<std::size_t>(g)]); }
  MExprPtr var2(int g) const { return MExpr::global(c_.spds.layout, c_.map2[static_cast<std::size_t>(g)]); }
  int sym1(int s) const { return *c_.spds.find_symbol(sk_.spds.symbol_name(s)); }
  int sym2(int s) const { return *c_.spds.find_symbol("xi_" + sk_.spds.symbol_name(s)); }

  Relation remap_rel(const Relation& rel, int run) const {
    const auto& vmap = run == 1 ? c_.map1 : c_.map2;
    const auto& gmap = run == 1 ? c_.gmap1 : c_.gmap2;
    const Layout& L = c_.spds.layout;
    Relation out;
    for (const auto& c : rel.constraints) {
      Constraint n = c;
      if (c.var >= 0) n.var = vmap[static_cast<std::size_t>(c.var)];
      if (c.group >= 0) n.group = gmap[static_cast<std::size_t>(c.group)];
      n.index = remap(c.index, L, vmap, gmap);
      n.value = remap(c.value, L, vmap, gmap);
      out.constraints.push_back(std::move(n));
    }
    for (int v : rel.retain) out.retain.insert(vmap[static_cast<std::size_t>(v)]);
    // The other run's private state is held.
    out.keep(run == 1 ? companions_ : originals_);
    return out;
  }

  Rule copy(const Rule& r, int run) const {
    Rule out;
    out.lhs = run == 1 ? sym1(r.lhs) : sym2(r.lhs);
    for (int s : r.rhs) out.rhs.push_back(run == 1 ? sym1(s) : sym2(s));
    out.rel = remap_rel(r.rel, run);
    out.meta = r.meta;
    out.meta.run = run;
    return out;
  }

  // Completes a stuffer relation over composed globals.
  void add(int lhs, std::vector<int> rhs, Relation rel, RuleMeta meta) {
    const Layout& L = c_.spds.layout;
    rel.keep_all_except(L, rel.written(L));
    c_.spds.rules.push_back({lhs, std::move(rhs), std::move(rel), meta});
  }

  void reset() {
    Relation r;
    for (const auto& in : sk_.inputs) r.assign(c_.map1[in.counter], MExpr::constant(0, width(in.counter)));
    for (const auto& o : sk_.outputs)
      if (!(c_.mode == ComposeMode::tr && o.channel >= 0))
        r.assign(c_.map1[o.counter], MExpr::constant(0, width(o.counter)));
    add(sym1(sk_.final_symbol), {sym2(sk_.spds.start)}, std::move(r), {RuleKind::reset, 0, -1, -1});
  }

  void declass(const DeclassSite& d) {
    const Layout& L = c_.spds.layout;
    auto tmp = var1(sk_.tmp);
    auto slot = MExpr::constant(static_cast<Value>(d.rho), 16);
    auto stored = MExpr::read(L, c_.gmap1[sk_.dstore], slot);
    const int x = sk_.var_global[static_cast<std::size_t>(d.target)];
    {
      Relation r;
      r.store(c_.gmap1[sk_.dstore], slot, tmp);
      r.assign(c_.map1[x], tmp);
      add(sym1(d.entry), {sym1(d.exit)}, std::move(r), {RuleKind::declass_store, 1, d.site, -1});
    }
    {
      Relation r;
      r.guard(m_eq(stored, tmp));
      r.assign(c_.map2[x], tmp);
      add(sym2(d.entry), {sym2(d.exit)}, std::move(r), {RuleKind::declass_match, 2, d.site, -1});
    }
    add(sym2(d.entry), {c_.idle}, Relation{}.guard(m_ne(stored, tmp)), {RuleKind::declass_mismatch, 2, d.site, -1});
  }

  MExprPtr below_capacity(const OutputChannel& o, const std::vector<int>& vmap) const {
    return m_lt(MExpr::global(c_.spds.layout, vmap[o.counter]),
                MExpr::constant(static_cast<Value>(o.capacity), width(o.counter)));
  }

  MExprPtr inc(const OutputChannel& o, const std::vector<int>& vmap) const {
    return MExpr::binary(BinOp::add, MExpr::global(c_.spds.layout, vmap[o.counter]), MExpr::constant(1, width(o.counter)));
  }

  void store_output(const OutputChannel& o, int run, RuleKind kind) {
    const auto& vmap = run == 1 ? c_.map1 : c_.map2;
    const auto& gmap = run == 1 ? c_.gmap1 : c_.gmap2;
    Relation r;
    r.guard(below_capacity(o, vmap));
    r.store(gmap[o.group], MExpr::global(c_.spds.layout, vmap[o.counter]), var1(sk_.tmp));
    r.assign(vmap[o.counter], inc(o, vmap));
    add(run == 1 ? sym1(o.entry) : sym2(o.entry), {run == 1 ? sym1(o.exit) : sym2(o.exit)}, std::move(r),
        {kind, run, -1, o.channel});
  }

  void matched_output(const OutputChannel& o) {
    const Layout& L = c_.spds.layout;
    store_output(o, 1, RuleKind::output_store);
    auto stored = MExpr::read(L, c_.gmap1[o.group], var1(o.counter));
    {
      Relation r;
      r.guard(below_capacity(o, c_.map1));
      r.guard(m_eq(stored, var1(sk_.tmp)));
      r.assign(c_.map1[o.counter], inc(o, c_.map1));
      add(sym2(o.entry), {sym2(o.exit)}, std::move(r), {RuleKind::output_match, 2, -1, o.channel});
    }
    Relation r;
    r.guard(below_capacity(o, c_.map1));
    r.guard(m_ne(stored, var1(sk_.tmp)));
    add(sym2(o.entry), {c_.error}, std::move(r), {RuleKind::output_mismatch, 2, -1, o.channel});
  }

  void duplicated_output(const OutputChannel& o) {
    store_output(o, 1, RuleKind::output_store);
    store_output(o, 2, RuleKind::output_store);
    // Run 2 may stop after any output and have its channels compared.
    add(sym2(o.exit), {c_.check}, Relation{}, {RuleKind::check, 2, -1, o.channel});
  }

  void checker() {
    const Layout& L = c_.spds.layout;
    MExprPtr bad = MExpr::constant(0, 1);
    for (const auto& o : sk_.outputs) {
      if (o.channel < 0) continue;
      auto q1 = var1(o.counter), q2 = var2(o.counter);
      bad = m_or(bad, m_lt(q1, q2));
      const auto& cells = sk_.spds.layout.group(o.group).cells;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        auto written = m_lt(MExpr::constant(static_cast<Value>(k), width(o.counter)), q2);
        bad = m_or(bad, m_and(written, m_ne(var1(cells[k]), var2(cells[k]))));
      }
    }
    (void)L;
    add(c_.check, {c_.error}, Relation{}.guard(bad), {RuleKind::check_error, 0, -1, -1});
    add(c_.check, {c_.done}, Relation{}.guard(m_eq(bad, MExpr::constant(0, 1))), {RuleKind::check_done, 0, -1, -1});
    add(c_.done, {c_.done}, Relation{}, {RuleKind::done_loop, 0, -1, -1});
  }

  const ModelSkeleton& sk_;
  ComposedModel c_;
  std::set<int> companions_, originals_;
};

} // namespace

ComposedModel self_compose(const ModelSkeleton& skeleton) { return Composer(skeleton, ComposeMode::storematch).run(); }
ComposedModel tr_compose(const ModelSkeleton& skeleton) { return Composer(skeleton, ComposeMode::tr).run(); }

ComposedModel compose(const ModelSkeleton& skeleton, ComposeMode mode) { return Composer(skeleton, mode).run(); }

std::size_t storematch_rule_count(const ModelSkeleton& skeleton) {
  const std::size_t n = skeleton.spds.rules.size();
  return 1 + (n - 1) + n + 1 + 3 * skeleton.declass_sites.size() + 3 * skeleton.outputs.size() + 1;
}

} // namespace wherecheck
