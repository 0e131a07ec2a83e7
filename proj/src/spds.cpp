#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "wherecheck/semantics.hpp"
#include "wherecheck/spds.hpp"

namespace wherecheck {

// ---- layout -----------------------------------------------------------------

int Layout::add(const std::string& name, unsigned width) {
  if (by_name_.count(name)) throw std::logic_error("duplicate global '" + name + "'");
  if (width == 0) throw std::logic_error("zero-width global '" + name + "'");
  globals_.push_back({name, width});
  offsets_.push_back(total_bits_);
  total_bits_ += width;
  const int id = static_cast<int>(globals_.size() - 1);
  by_name_[name] = id;
  return id;
}

int Layout::add_group(const std::string& name, std::vector<int> cells) {
  if (group_by_name_.count(name)) throw std::logic_error("duplicate array '" + name + "'");
  groups_.push_back({name, std::move(cells)});
  const int id = static_cast<int>(groups_.size() - 1);
  group_by_name_[name] = id;
  return id;
}

std::optional<int> Layout::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Layout::find_group(const std::string& name) const {
  auto it = group_by_name_.find(name);
  if (it == group_by_name_.end()) return std::nullopt;
  return it->second;
}

int Layout::at(const std::string& name) const {
  auto id = find(name);
  if (!id) throw std::out_of_range("unknown global '" + name + "'");
  return *id;
}

// ---- expressions and relations ----------------------------------------------

MExprPtr MExpr::constant(Value v, unsigned width) {
  auto e = std::make_shared<MExpr>();
  e->kind = Kind::constant;
  e->width = width;
  e->value = v & value_mask(width);
  return e;
}

MExprPtr MExpr::global(const Layout& layout, int var) {
  auto e = std::make_shared<MExpr>();
  e->kind = Kind::global;
  e->var = var;
  e->width = layout.global(var).width;
  return e;
}

MExprPtr MExpr::read(const Layout& layout, int group, MExprPtr index) {
  auto e = std::make_shared<MExpr>();
  e->kind = Kind::read;
  e->group = group;
  e->index = std::move(index);
  const auto& cells = layout.group(group).cells;
  e->width = cells.empty() ? 1 : layout.global(cells.front()).width;
  return e;
}

namespace {

bool is_comparison(BinOp op) {
  return op == BinOp::eq || op == BinOp::ne || op == BinOp::lt || op == BinOp::le;
}

} // namespace

MExprPtr MExpr::binary(BinOp op, MExprPtr lhs, MExprPtr rhs) {
  auto e = std::make_shared<MExpr>();
  e->kind = Kind::binary;
  e->op = op;
  e->width = is_comparison(op) ? 1 : std::max(lhs->width, rhs->width);
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

MExprPtr m_and(MExprPtr a, MExprPtr b) { return MExpr::binary(BinOp::bit_and, std::move(a), std::move(b)); }
MExprPtr m_or(MExprPtr a, MExprPtr b) { return MExpr::binary(BinOp::bit_or, std::move(a), std::move(b)); }
MExprPtr m_eq(MExprPtr a, MExprPtr b) { return MExpr::binary(BinOp::eq, std::move(a), std::move(b)); }
MExprPtr m_ne(MExprPtr a, MExprPtr b) { return MExpr::binary(BinOp::ne, std::move(a), std::move(b)); }
MExprPtr m_lt(MExprPtr a, MExprPtr b) { return MExpr::binary(BinOp::lt, std::move(a), std::move(b)); }

Relation& Relation::guard(MExprPtr cond) {
  Constraint c;
  c.kind = Constraint::Kind::guard;
  c.value = std::move(cond);
  constraints.push_back(std::move(c));
  return *this;
}

Relation& Relation::assign(int var, MExprPtr value) {
  Constraint c;
  c.kind = Constraint::Kind::assign;
  c.var = var;
  c.value = std::move(value);
  constraints.push_back(std::move(c));
  return *this;
}

Relation& Relation::store(int group, MExprPtr index, MExprPtr value) {
  Constraint c;
  c.kind = Constraint::Kind::store;
  c.group = group;
  c.index = std::move(index);
  c.value = std::move(value);
  constraints.push_back(std::move(c));
  return *this;
}

Relation& Relation::keep(const std::set<int>& vars) {
  retain.insert(vars.begin(), vars.end());
  return *this;
}

Relation& Relation::keep_all_except(const Layout& layout, const std::set<int>& vars) {
  for (int id = 0; id < static_cast<int>(layout.globals().size()); ++id)
    if (!vars.count(id)) retain.insert(id);
  return *this;
}

std::set<int> Relation::written(const Layout& layout) const {
  std::set<int> out;
  for (const auto& c : constraints) {
    if (c.kind == Constraint::Kind::assign) out.insert(c.var);
    if (c.kind == Constraint::Kind::store)
      for (int cell : layout.group(c.group).cells) out.insert(cell);
  }
  return out;
}

Relation rt(const std::set<int>& frame) {
  Relation r;
  r.retain = frame;
  return r;
}

Relation conjoin(const Relation& a, const Relation& b) {
  Relation r = a;
  r.constraints.insert(r.constraints.end(), b.constraints.begin(), b.constraints.end());
  r.retain.insert(b.retain.begin(), b.retain.end());
  return r;
}

const char* to_string(RuleKind kind) {
  switch (kind) {
  case RuleKind::plain: return "plain";
  case RuleKind::branch: return "branch";
  case RuleKind::input_high: return "IR_H";
  case RuleKind::input_low: return "IR_L";
  case RuleKind::output_high: return "OR_H";
  case RuleKind::output_push: return "OR_L";
  case RuleKind::output_pop: return "output-exit";
  case RuleKind::declass_push: return "DR";
  case RuleKind::declass_pop: return "declass-exit";
  case RuleKind::final_push: return "finalvars";
  case RuleKind::last: return "LastTrans";
  case RuleKind::init: return "init";
  case RuleKind::declass_store: return "DS";
  case RuleKind::declass_match: return "DM";
  case RuleKind::declass_mismatch: return "DM-idle";
  case RuleKind::output_store: return "OS";
  case RuleKind::output_match: return "OM";
  case RuleKind::output_mismatch: return "OM-error";
  case RuleKind::output_body: return "output-body";
  case RuleKind::declass_body: return "declass-body";
  case RuleKind::reset: return "RST";
  case RuleKind::idle_loop: return "idle";
  case RuleKind::final_loop: return "final";
  case RuleKind::check: return "check";
  case RuleKind::check_error: return "check-error";
  case RuleKind::check_done: return "check-done";
  case RuleKind::done_loop: return "done";
  }
  return "?";
}

// ---- spds -------------------------------------------------------------------

int Spds::symbol(const std::string& name) {
  auto it = symbol_ids_.find(name);
  if (it != symbol_ids_.end()) return it->second;
  symbols.push_back(name);
  const int id = static_cast<int>(symbols.size() - 1);
  symbol_ids_[name] = id;
  return id;
}

std::optional<int> Spds::find_symbol(const std::string& name) const {
  auto it = symbol_ids_.find(name);
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

void Spds::validate() const {
  const int n = static_cast<int>(symbols.size());
  auto ok = [&](int s) { return s >= 0 && s < n; };
  if (!ok(start)) throw std::logic_error("start symbol is not in the alphabet");
  for (const auto& r : rules) {
    if (r.rhs.size() > 2) throw std::logic_error("rule rewrites into more than two symbols");
    if (!ok(r.lhs)) throw std::logic_error("rule lhs is not in the alphabet");
    for (int s : r.rhs)
      if (!ok(s)) throw std::logic_error("rule rhs is not in the alphabet");
  }
}

std::string to_string(const Layout& layout, const MExpr& e) {
  switch (e.kind) {
  case MExpr::Kind::constant: return std::to_string(e.value);
  case MExpr::Kind::global: return layout.global(e.var).name;
  case MExpr::Kind::read: return layout.group(e.group).name + "[" + to_string(layout, *e.index) + "]";
  case MExpr::Kind::binary: {
    auto side = [&](const MExpr& s) {
      std::string t = to_string(layout, s);
      return s.kind == MExpr::Kind::binary ? "(" + t + ")" : t;
    };
    return side(*e.lhs) + " " + to_string(e.op) + " " + side(*e.rhs);
  }
  }
  return "?";
}

std::string dump_spds(const Spds& spds) {
  std::ostringstream out;
  const Layout& L = spds.layout;
  for (const auto& r : spds.rules) {
    out << spds.symbol_name(r.lhs) << " ->";
    if (r.rhs.empty()) out << " eps";
    for (int s : r.rhs) out << ' ' << spds.symbol_name(s);
    std::vector<std::string> parts;
    for (const auto& c : r.rel.constraints) {
      switch (c.kind) {
      case Constraint::Kind::guard: parts.push_back(to_string(L, *c.value)); break;
      case Constraint::Kind::assign: parts.push_back(L.global(c.var).name + "' = " + to_string(L, *c.value)); break;
      case Constraint::Kind::store:
        parts.push_back(L.group(c.group).name + "[" + to_string(L, *c.index) + "]' = " + to_string(L, *c.value));
        break;
      }
    }
    std::string frame;
    for (int id = 0; id < static_cast<int>(L.globals().size()); ++id)
      if (!r.rel.retain.count(id)) frame += (frame.empty() ? "" : ", ") + L.global(id).name;
    parts.push_back(frame.empty() ? "rt(G)" : "rt(G \\ {" + frame + "})");
    out << " [";
    for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? " && " : "") << parts[i];
    out << "]\n";
  }
  return out.str();
}

// ---- explicit backend -------------------------------------------------------

namespace {

Value eval_in(const Layout& layout, const MExpr& e, const Valuation& v) {
  switch (e.kind) {
  case MExpr::Kind::constant: return e.value;
  case MExpr::Kind::global: return v.at(static_cast<std::size_t>(e.var));
  case MExpr::Kind::read: {
    const Value k = eval_in(layout, *e.index, v);
    const auto& cells = layout.group(e.group).cells;
    return k < cells.size() ? v.at(static_cast<std::size_t>(cells[k])) : 0;
  }
  case MExpr::Kind::binary:
    return apply_binop(e.op, eval_in(layout, *e.lhs, v), eval_in(layout, *e.rhs, v), e.width);
  }
  return 0;
}

// Next values forced by the relation, or nullopt when the guards fail or
// two constraints disagree.
std::optional<std::vector<std::optional<Value>>> forced(const Layout& layout, const Relation& rel,
                                                        const Valuation& cur) {
  std::vector<std::optional<Value>> next(layout.globals().size());
  auto set = [&](int var, Value value) {
    value &= value_mask(layout.global(var).width);
    auto& slot = next[static_cast<std::size_t>(var)];
    if (slot && *slot != value) return false;
    slot = value;
    return true;
  };
  for (const auto& c : rel.constraints) {
    switch (c.kind) {
    case Constraint::Kind::guard:
      if (eval_in(layout, *c.value, cur) == 0) return std::nullopt;
      break;
    case Constraint::Kind::assign:
      if (!set(c.var, eval_in(layout, *c.value, cur))) return std::nullopt;
      break;
    case Constraint::Kind::store: {
      const Value k = eval_in(layout, *c.index, cur);
      const Value val = eval_in(layout, *c.value, cur);
      const auto& cells = layout.group(c.group).cells;
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (!set(cells[i], i == k ? val : cur[static_cast<std::size_t>(cells[i])])) return std::nullopt;
      break;
    }
    }
  }
  for (int var : rel.retain)
    if (!set(var, cur.at(static_cast<std::size_t>(var)))) return std::nullopt;
  return next;
}

} // namespace

Value eval(const Layout& layout, const MExpr& e, const Valuation& v) { return eval_in(layout, e, v); }

bool holds_init(const Spds& spds, const Valuation& v) {
  for (const auto& g : spds.init)
    if (eval_in(spds.layout, *g, v) == 0) return false;
  return true;
}

std::vector<Valuation> successors(const Layout& layout, const Relation& rel, const Valuation& cur) {
  std::vector<Valuation> out;
  auto next = forced(layout, rel, cur);
  if (!next) return out;
  std::vector<std::size_t> free;
  Valuation v(layout.globals().size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if ((*next)[i]) v[i] = *(*next)[i];
    else free.push_back(i);
  }
  while (true) {
    out.push_back(v);
    std::size_t k = free.size();
    while (k > 0) {
      const std::size_t var = free[k - 1];
      if (++v[var] <= value_mask(layout.global(static_cast<int>(var)).width)) break;
      v[var] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

bool related(const Layout& layout, const Relation& rel, const Valuation& cur, const Valuation& next) {
  auto f = forced(layout, rel, cur);
  if (!f) return false;
  for (std::size_t i = 0; i < next.size(); ++i)
    if ((*f)[i] && *(*f)[i] != next[i]) return false;
  return true;
}

std::uint64_t pack(const Layout& layout, const Valuation& v) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    out |= std::uint64_t{v[i]} << layout.offset(static_cast<int>(i));
  return out;
}

Valuation unpack(const Layout& layout, std::uint64_t bits) {
  Valuation v(layout.globals().size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int id = static_cast<int>(i);
    v[i] = static_cast<Value>((bits >> layout.offset(id)) & value_mask(layout.global(id).width));
  }
  return v;
}

std::set<StackState> successors(const Spds& spds, const std::set<StackState>& states) {
  std::set<StackState> out;
  for (const auto& s : states) {
    if (s.stack.empty()) continue;
    for (const auto& r : spds.rules) {
      if (r.lhs != s.stack.front()) continue;
      std::vector<int> stack = r.rhs;
      stack.insert(stack.end(), s.stack.begin() + 1, s.stack.end());
      for (auto& v : successors(spds.layout, r.rel, s.valuation)) out.insert({std::move(v), stack});
    }
  }
  return out;
}

ExplicitRelation::ExplicitRelation(const Layout& layout, const Relation& rel) : bits_(layout.total_bits()) {
  if (bits_ > 12) throw std::invalid_argument("explicit relation limited to 12 bits");
  const std::uint64_t n = std::uint64_t{1} << bits_;
  matrix_.assign(n * n, false);
  for (std::uint64_t c = 0; c < n; ++c)
    for (const auto& next : successors(layout, rel, unpack(layout, c))) matrix_[c * n + pack(layout, next)] = true;
}

bool ExplicitRelation::contains(std::uint64_t cur, std::uint64_t next) const {
  return matrix_.at((cur << bits_) + next);
}

std::size_t ExplicitRelation::size() const { return static_cast<std::size_t>(std::count(matrix_.begin(), matrix_.end(), true)); }

// ---- symbolic backend -------------------------------------------------------

SymbolicContext::SymbolicContext(const Layout& layout, std::size_t node_limit)
    : layout_(layout), bdd_(3 * layout.total_bits(), node_limit) {
  const unsigned n = layout.total_bits();
  std::vector<unsigned> c, x, a;
  for (unsigned b = 0; b < n; ++b) {
    c.push_back(3 * b);
    x.push_back(3 * b + 1);
    a.push_back(3 * b + 2);
  }
  set_cur_ = bdd_.make_varset(c);
  set_next_ = bdd_.make_varset(x);
  set_aux_ = bdd_.make_varset(a);
  auto renaming = [&](unsigned from, unsigned to, bool monotone) {
    std::vector<unsigned> map(3 * n);
    for (unsigned v = 0; v < 3 * n; ++v) map[v] = v;
    for (unsigned b = 0; b < n; ++b) map[3 * b + from] = 3 * b + to;
    return bdd_.make_renaming(map, monotone);
  };
  next_to_cur_ = renaming(next, cur, true);
  aux_to_next_ = renaming(aux, next, true);
  cur_to_next_ = renaming(cur, next, true);
  aux_to_cur_ = renaming(aux, cur, false);
  cur_to_aux_ = renaming(cur, aux, false);
  cur_eq_aux_ = BddManager::kTrue;
  for (unsigned b = n; b-- > 0;)
    cur_eq_aux_ = bdd_.band(bdd_.biff(bdd_.var(3 * b), bdd_.var(3 * b + 2)), cur_eq_aux_);
}

std::vector<BddRef> SymbolicContext::var_bits(int var, Copy copy) {
  std::vector<BddRef> out;
  const unsigned off = layout_.offset(var);
  for (unsigned i = 0; i < layout_.global(var).width; ++i) out.push_back(bdd_.var(bdd_var(off + i, copy)));
  return out;
}

namespace {

std::vector<BddRef> extend(std::vector<BddRef> v, std::size_t width) {
  v.resize(width, BddManager::kFalse);
  return v;
}

} // namespace

std::vector<BddRef> SymbolicContext::bits(const MExpr& e, Copy copy) {
  BddManager& m = bdd_;
  switch (e.kind) {
  case MExpr::Kind::constant: {
    std::vector<BddRef> out;
    for (unsigned i = 0; i < e.width; ++i) out.push_back((e.value >> i) & 1u ? BddManager::kTrue : BddManager::kFalse);
    return out;
  }
  case MExpr::Kind::global: return var_bits(e.var, copy);
  case MExpr::Kind::read: {
    std::vector<BddRef> idx = bits(*e.index, copy);
    std::vector<BddRef> out(e.width, BddManager::kFalse);
    const auto& cells = layout_.group(e.group).cells;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k >> idx.size()) break; // index cannot reach this cell
      auto kb = bits(*MExpr::constant(static_cast<Value>(k), static_cast<unsigned>(idx.size())), copy);
      BddRef hit = BddManager::kTrue;
      for (std::size_t i = idx.size(); i-- > 0;) hit = m.band(m.biff(idx[i], kb[i]), hit);
      auto cell = var_bits(cells[k], copy);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = m.bor(out[i], m.band(hit, cell[i]));
    }
    return out;
  }
  case MExpr::Kind::binary: break;
  }
  const std::size_t w = std::max(e.lhs->width, e.rhs->width);
  auto a = extend(bits(*e.lhs, copy), w);
  auto b = extend(bits(*e.rhs, copy), w);
  auto equal = [&]() {
    BddRef r = BddManager::kTrue;
    for (std::size_t i = w; i-- > 0;) r = m.band(m.biff(a[i], b[i]), r);
    return r;
  };
  auto less = [&](const std::vector<BddRef>& x, const std::vector<BddRef>& y) {
    // From the least significant bit up: lt_i = (!x_i & y_i) | ((x_i == y_i) & lt_{i-1}).
    BddRef lt = BddManager::kFalse;
    for (std::size_t i = 0; i < w; ++i)
      lt = m.bor(m.band(m.bnot(x[i]), y[i]), m.band(m.biff(x[i], y[i]), lt));
    return lt;
  };
  auto add = [&](const std::vector<BddRef>& x, const std::vector<BddRef>& y, BddRef carry) {
    std::vector<BddRef> out(w);
    for (std::size_t i = 0; i < w; ++i) {
      out[i] = m.bxor(m.bxor(x[i], y[i]), carry);
      carry = m.bor(m.band(x[i], y[i]), m.band(carry, m.bxor(x[i], y[i])));
    }
    return out;
  };
  switch (e.op) {
  case BinOp::add: return add(a, b, BddManager::kFalse);
  case BinOp::sub: {
    std::vector<BddRef> nb(w);
    for (std::size_t i = 0; i < w; ++i) nb[i] = m.bnot(b[i]);
    return add(a, nb, BddManager::kTrue);
  }
  case BinOp::mul: {
    std::vector<BddRef> acc(w, BddManager::kFalse);
    for (std::size_t i = 0; i < w; ++i) {
      std::vector<BddRef> partial(w, BddManager::kFalse);
      for (std::size_t j = 0; i + j < w; ++j) partial[i + j] = m.band(a[j], b[i]);
      acc = add(acc, partial, BddManager::kFalse);
    }
    return acc;
  }
  case BinOp::eq: return {equal()};
  case BinOp::ne: return {m.bnot(equal())};
  case BinOp::lt: return {less(a, b)};
  case BinOp::le: return {m.bnot(less(b, a))};
  case BinOp::bit_and: {
    std::vector<BddRef> out(w);
    for (std::size_t i = 0; i < w; ++i) out[i] = m.band(a[i], b[i]);
    return out;
  }
  case BinOp::bit_or: {
    std::vector<BddRef> out(w);
    for (std::size_t i = 0; i < w; ++i) out[i] = m.bor(a[i], b[i]);
    return out;
  }
  }
  return {};
}

BddRef SymbolicContext::nonzero(const MExpr& e, Copy copy) {
  BddRef r = BddManager::kFalse;
  for (BddRef b : bits(e, copy)) r = bdd_.bor(r, b);
  return r;
}

BddRef SymbolicContext::predicate(const std::vector<MExprPtr>& conj, Copy copy) {
  BddRef r = BddManager::kTrue;
  for (const auto& e : conj) r = bdd_.band(r, nonzero(*e, copy));
  return r;
}

BddRef SymbolicContext::relation(const Relation& rel) {
  BddManager& m = bdd_;
  BddRef r = BddManager::kTrue;
  auto bind = [&](int var, const std::vector<BddRef>& value) {
    auto nb = var_bits(var, next);
    auto v = extend(value, nb.size());
    for (std::size_t i = 0; i < nb.size(); ++i) r = m.band(r, m.biff(nb[i], v[i]));
  };
  for (const auto& c : rel.constraints) {
    switch (c.kind) {
    case Constraint::Kind::guard: r = m.band(r, nonzero(*c.value)); break;
    case Constraint::Kind::assign: bind(c.var, bits(*c.value)); break;
    case Constraint::Kind::store: {
      auto idx = bits(*c.index);
      auto val = bits(*c.value);
      const auto& cells = layout_.group(c.group).cells;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        BddRef hit = BddManager::kTrue;
        if (k >> idx.size()) hit = BddManager::kFalse;
        else
          for (std::size_t i = 0; i < idx.size(); ++i)
            hit = m.band(hit, (k >> i) & 1u ? idx[i] : m.bnot(idx[i]));
        auto old = var_bits(cells[k], cur);
        auto v = extend(val, old.size());
        std::vector<BddRef> chosen(old.size());
        for (std::size_t i = 0; i < old.size(); ++i) chosen[i] = m.ite(hit, v[i], old[i]);
        bind(cells[k], chosen);
      }
      break;
    }
    }
    if (r == BddManager::kFalse) return r;
  }
  for (int var : rel.retain) bind(var, var_bits(var, cur));
  return r;
}

BddRef SymbolicContext::equals(int var, Value value, Copy copy) {
  BddRef r = BddManager::kTrue;
  const unsigned off = layout_.offset(var);
  for (unsigned i = layout_.global(var).width; i-- > 0;) {
    BddRef b = bdd_.var(bdd_var(off + i, copy));
    r = bdd_.band((value >> i) & 1u ? b : bdd_.bnot(b), r);
  }
  return r;
}

BddRef SymbolicContext::valuation(const Valuation& v, Copy copy) {
  BddRef r = BddManager::kTrue;
  for (int var = static_cast<int>(v.size()); var-- > 0;)
    r = bdd_.band(equals(var, v[static_cast<std::size_t>(var)], copy), r);
  return r;
}

Valuation SymbolicContext::decode(const std::vector<signed char>& assignment, Copy copy) const {
  Valuation v(layout_.globals().size(), 0);
  for (std::size_t id = 0; id < v.size(); ++id) {
    const unsigned off = layout_.offset(static_cast<int>(id));
    for (unsigned i = 0; i < layout_.global(static_cast<int>(id)).width; ++i)
      if (assignment.at(bdd_var(off + i, copy)) == 1) v[id] |= Value{1} << i;
  }
  return v;
}

std::vector<bool> SymbolicContext::encode(const Valuation& cur_v, const Valuation& other, Copy other_copy) const {
  std::vector<bool> a(3 * layout_.total_bits(), false);
  for (std::size_t id = 0; id < cur_v.size(); ++id) {
    const unsigned off = layout_.offset(static_cast<int>(id));
    for (unsigned i = 0; i < layout_.global(static_cast<int>(id)).width; ++i) {
      a[bdd_var(off + i, cur)] = (cur_v[id] >> i) & 1u;
      if (!other.empty()) a[bdd_var(off + i, other_copy)] = (other[id] >> i) & 1u;
    }
  }
  return a;
}

} // namespace wherecheck
