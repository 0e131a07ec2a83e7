#include <algorithm>
#include <stdexcept>

#include "wherecheck/reach.hpp"

namespace wherecheck {

// ---- post* ------------------------------------------------------------------

PostStar::PostStar(const Spds& spds, SymbolicContext& ctx) : spds_(spds), ctx_(ctx) {
  out_.resize(2 + spds.symbols.size());
  rules_by_lhs_.resize(spds.symbols.size());
  for (std::size_t i = 0; i < spds.rules.size(); ++i) rules_by_lhs_[static_cast<std::size_t>(spds.rules[i].lhs)].push_back(i);
  rule_bdd_.resize(spds.rules.size());
  add({kControl, spds.start, kFinal}, ctx_.predicate(spds.init));
}

BddRef PostStar::rule_relation(std::size_t rule) {
  if (!rule_bdd_[rule]) rule_bdd_[rule] = ctx_.relation(spds_.rules[rule].rel);
  return *rule_bdd_[rule];
}

// first(X, Y) ; second(Y, Z) -> (X, Z)
BddRef PostStar::compose(BddRef first, BddRef second) {
  BddManager& m = ctx_.bdd();
  BddRef a = m.rename(first, ctx_.aux_to_next());
  BddRef b = m.rename(second, ctx_.cur_to_next());
  return m.and_exists(a, b, ctx_.set_next());
}

void PostStar::add(const Key& key, BddRef rel) {
  BddManager& m = ctx_.bdd();
  if (std::get<2>(key) == kFinal) rel = m.exists(rel, ctx_.set_aux());
  auto it = trans_.find(key);
  BddRef old = it == trans_.end() ? BddManager::kFalse : it->second;
  BddRef fresh = m.diff(rel, old);
  if (fresh == BddManager::kFalse) return;
  if (it == trans_.end()) {
    trans_.emplace(key, fresh);
    out_[static_cast<std::size_t>(std::get<0>(key))].push_back(key);
  } else {
    it->second = m.bor(old, fresh);
  }
  if (std::get<0>(key) == kControl && std::get<1>(key) != kEpsilon) reached_.insert(std::get<1>(key));
  work_.emplace_back(key, fresh);
}

void PostStar::saturate(std::optional<int> stop_symbol) {
  BddManager& m = ctx_.bdd();
  while (!work_.empty()) {
    if (stop_symbol && reached_.count(*stop_symbol)) return;
    auto [key, delta] = work_.front();
    work_.pop_front();
    ++steps_;
    const auto [from, sym, to] = key;
    if (sym == kEpsilon) {
      const std::vector<Key> next = out_[static_cast<std::size_t>(to)];
      for (const Key& k : next) add({kControl, std::get<1>(k), std::get<2>(k)}, compose(delta, trans_.at(k)));
      continue;
    }
    if (from != kControl) {
      auto eps = trans_.find({kControl, kEpsilon, from});
      if (eps != trans_.end()) add({kControl, sym, to}, compose(eps->second, delta));
      continue;
    }
    for (std::size_t ri : rules_by_lhs_[static_cast<std::size_t>(sym)]) {
      const Rule& r = spds_.rules[ri];
      BddRef img = m.rename(m.and_exists(delta, rule_relation(ri), ctx_.set_cur()), ctx_.next_to_cur());
      if (img == BddManager::kFalse) continue;
      switch (r.rhs.size()) {
      case 0: add({kControl, kEpsilon, to}, img); break;
      case 1: add({kControl, r.rhs[0], to}, img); break;
      default: {
        const int md = mid(r.rhs[0]);
        add({kControl, r.rhs[0], md}, m.band(m.exists(img, ctx_.set_aux()), ctx_.cur_equals_aux()));
        add({md, r.rhs[1], to}, img);
      }
      }
    }
  }
}

bool PostStar::reached(int symbol) const { return reached_.count(symbol) > 0; }

BddRef PostStar::heads(int symbol) {
  BddManager& m = ctx_.bdd();
  BddRef r = BddManager::kFalse;
  for (const Key& k : out_[kControl])
    if (std::get<1>(k) == symbol) r = m.bor(r, m.exists(trans_.at(k), ctx_.set_aux()));
  return r;
}

bool PostStar::accepts(const std::vector<int>& stack, const Valuation& v) {
  BddManager& m = ctx_.bdd();
  std::map<int, BddRef> at;
  at[kControl] = ctx_.valuation(v, SymbolicContext::cur);
  auto step = [&](BddRef set, BddRef label) {
    return m.rename(m.and_exists(set, label, ctx_.set_cur()), ctx_.aux_to_cur());
  };
  for (const Key& k : out_[kControl])
    if (std::get<1>(k) == kEpsilon) {
      BddRef s = step(at[kControl], trans_.at(k));
      at[std::get<2>(k)] = m.bor(at.count(std::get<2>(k)) ? at[std::get<2>(k)] : BddManager::kFalse, s);
    }
  if (stack.empty()) return at.count(kFinal) && at[kFinal] != BddManager::kFalse;
  for (int sym : stack) {
    std::map<int, BddRef> next;
    for (const auto& [state, set] : at) {
      if (set == BddManager::kFalse) continue;
      for (const Key& k : out_[static_cast<std::size_t>(state)]) {
        if (std::get<1>(k) != sym) continue;
        BddRef s = step(set, trans_.at(k));
        auto& slot = next.try_emplace(std::get<2>(k), BddManager::kFalse).first->second;
        slot = m.bor(slot, s);
      }
    }
    at.swap(next);
  }
  return at.count(kFinal) && at[kFinal] != BddManager::kFalse;
}

// ---- explicit search --------------------------------------------------------

ExplicitResult explicit_reach(const Spds& spds, std::size_t max_configurations) {
  const Layout& L = spds.layout;
  if (L.total_bits() > 40) throw BudgetExceeded("layout too wide for explicit search");
  const std::uint64_t space = std::uint64_t{1} << L.total_bits();
  using Config = std::pair<std::vector<int>, std::uint64_t>;
  std::set<Config> seen;
  std::deque<Config> queue;
  ExplicitResult out;
  auto visit = [&](Config c) {
    if (!seen.insert(c).second) return;
    if (seen.size() > max_configurations) throw BudgetExceeded("explicit search exceeds budget");
    if (!c.first.empty()) out.heads[c.first.front()].insert(c.second);
    queue.push_back(std::move(c));
  };
  if (space > max_configurations * 16) throw BudgetExceeded("initial valuations exceed explicit budget");
  for (std::uint64_t bits = 0; bits < space; ++bits)
    if (holds_init(spds, unpack(L, bits))) visit({{spds.start}, bits});
  while (!queue.empty()) {
    Config c = std::move(queue.front());
    queue.pop_front();
    if (c.first.empty()) continue;
    const Valuation cur = unpack(L, c.second);
    for (const auto& r : spds.rules) {
      if (r.lhs != c.first.front()) continue;
      std::vector<int> stack = r.rhs;
      stack.insert(stack.end(), c.first.begin() + 1, c.first.end());
      for (const auto& next : successors(L, r.rel, cur)) visit({stack, pack(L, next)});
    }
  }
  out.configurations = seen.size();
  return out;
}

// ---- witnesses --------------------------------------------------------------

std::optional<Witness> extract_witness(const ComposedModel& model, SymbolicContext& ctx, int target,
                                       std::size_t max_layers) {
  const Spds& spds = model.spds;
  BddManager& m = ctx.bdd();
  using Layer = std::map<std::vector<int>, BddRef>;
  std::vector<BddRef> rel(spds.rules.size(), BddManager::kFalse);
  std::vector<bool> built(spds.rules.size(), false);
  auto relation = [&](std::size_t i) {
    if (!built[i]) {
      rel[i] = ctx.relation(spds.rules[i].rel);
      built[i] = true;
    }
    return rel[i];
  };

  std::vector<Layer> layers;
  Layer seen;
  layers.push_back({{{spds.start}, ctx.predicate(spds.init)}});
  seen = layers.back();
  std::optional<std::vector<int>> hit;
  auto find_hit = [&](const Layer& layer) -> std::optional<std::vector<int>> {
    for (const auto& [word, set] : layer)
      if (!word.empty() && word.front() == target && set != BddManager::kFalse) return word;
    return std::nullopt;
  };
  hit = find_hit(layers.back());
  while (!hit) {
    if (layers.size() > max_layers) return std::nullopt;
    Layer next;
    for (const auto& [word, set] : layers.back()) {
      if (word.empty()) continue;
      for (std::size_t i = 0; i < spds.rules.size(); ++i) {
        const Rule& r = spds.rules[i];
        if (r.lhs != word.front()) continue;
        BddRef img = m.rename(m.and_exists(set, relation(i), ctx.set_cur()), ctx.next_to_cur());
        if (img == BddManager::kFalse) continue;
        std::vector<int> w = r.rhs;
        w.insert(w.end(), word.begin() + 1, word.end());
        auto& slot = next.try_emplace(w, BddManager::kFalse).first->second;
        slot = m.bor(slot, img);
      }
    }
    // Keep only configurations reached for the first time.
    Layer frontier;
    for (auto& [word, set] : next) {
      auto& old = seen.try_emplace(word, BddManager::kFalse).first->second;
      BddRef fresh = m.diff(set, old);
      if (fresh == BddManager::kFalse) continue;
      old = m.bor(old, fresh);
      frontier.emplace(word, fresh);
    }
    if (frontier.empty()) return std::nullopt;
    layers.push_back(std::move(frontier));
    hit = find_hit(layers.back());
  }

  Witness w;
  w.level = model.skeleton.level;
  std::vector<int> word = *hit;
  Valuation v = ctx.decode(m.sat_one(layers.back().at(word)), SymbolicContext::cur);
  std::vector<WitnessStep> rev;
  for (std::size_t i = layers.size() - 1; i > 0; --i) {
    bool found = false;
    for (std::size_t ri = 0; ri < spds.rules.size() && !found; ++ri) {
      const Rule& r = spds.rules[ri];
      if (word.size() < r.rhs.size() || !std::equal(r.rhs.begin(), r.rhs.end(), word.begin())) continue;
      std::vector<int> prev{r.lhs};
      prev.insert(prev.end(), word.begin() + static_cast<std::ptrdiff_t>(r.rhs.size()), word.end());
      auto it = layers[i - 1].find(prev);
      if (it == layers[i - 1].end()) continue;
      BddRef pre = m.and_exists(relation(ri), ctx.valuation(v, SymbolicContext::next), ctx.set_next());
      pre = m.band(pre, it->second);
      if (pre == BddManager::kFalse) continue;
      rev.push_back({ri, word, v});
      v = ctx.decode(m.sat_one(pre), SymbolicContext::cur);
      word = prev;
      found = true;
    }
    if (!found) throw std::logic_error("witness backtracking lost its path");
  }
  w.initial = v;
  w.steps.assign(rev.rbegin(), rev.rend());
  return w;
}

void decode_and_replay(Witness& w, const ComposedModel& model, const Program& program, const Policy& policy,
                       Property property) {
  const ModelSkeleton& sk = model.skeleton;
  const Spds& spds = model.spds;
  const std::size_t nvars = program.variables().size();
  const std::size_t nchan = program.channels().size();
  RunPair& pair = w.pair;
  pair.mu1.assign(nvars, 0);
  pair.mu2.assign(nvars, 0);
  for (std::size_t slot = 0; slot < nvars; ++slot) {
    const int s = static_cast<int>(slot);
    pair.mu1[slot] = w.initial[static_cast<std::size_t>(model.run1_var(s))];
    pair.mu2[slot] = sk.low_var[slot] ? pair.mu1[slot] : w.initial[static_cast<std::size_t>(model.run2_var(s))];
  }
  pair.ins1.assign(nchan, {});
  pair.ins2.assign(nchan, {});
  for (const auto& in : sk.inputs) {
    std::vector<Value> cells;
    for (int cell : sk.spds.layout.group(in.group).cells)
      cells.push_back(w.initial[static_cast<std::size_t>(model.map1[static_cast<std::size_t>(cell)])]);
    pair.ins1[static_cast<std::size_t>(in.channel)] = cells;
    pair.ins2[static_cast<std::size_t>(in.channel)] = cells;
  }
  for (const auto& step : w.steps) {
    const Rule& r = spds.rules[step.rule];
    if (r.meta.kind != RuleKind::input_high) continue;
    const int target = program.sites()[static_cast<std::size_t>(r.meta.site)].command->target_index;
    const int var = r.meta.run == 2 ? model.run2_var(target) : model.run1_var(target);
    auto& list = r.meta.run == 2 ? pair.ins2 : pair.ins1;
    list[static_cast<std::size_t>(r.meta.channel)].push_back(step.valuation[static_cast<std::size_t>(var)]);
  }

  // Observable named by the model's last step.
  if (!w.steps.empty()) {
    const WitnessStep& last = w.steps.back();
    const Rule& r = spds.rules[last.rule];
    const Valuation& before = w.steps.size() > 1 ? w.steps[w.steps.size() - 2].valuation : w.initial;
    if (r.meta.kind == RuleKind::output_mismatch) {
      for (const auto& o : sk.outputs) {
        if (o.channel != r.meta.channel) continue;
        const Value k = before[static_cast<std::size_t>(model.map1[static_cast<std::size_t>(o.counter)])];
        if (o.channel < 0) w.observable = "variable " + program.variables()[static_cast<std::size_t>(sk.final_vars.at(k))];
        else w.observable = "channel " + o.name + "[" + std::to_string(k) + "]";
      }
    } else {
      w.observable = "channel contents";
    }
  }

  OracleOptions opts;
  opts.bits = sk.bits;
  opts.capacity = sk.capacity;
  PairCheck pc = check_pair(program, policy, w.level, property, pair, opts);
  w.replayed = pc.kind == PairCheck::Kind::violation;
  w.replay_observable = pc.observable;
}

} // namespace wherecheck
