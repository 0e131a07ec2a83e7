#include <cmath>
#include <functional>

#include "wherecheck/bdd.hpp"

namespace wherecheck {

namespace {

constexpr std::uint32_t kTerminalVar = 0xffffffffu;

enum Op : std::uint32_t { op_and = 1, op_or, op_xor, op_not, op_ite, op_exists, op_and_exists, op_rename };

inline std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ull;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  return mix((std::uint64_t{a} << 40) ^ (std::uint64_t{b} << 20) ^ c ^ (std::uint64_t{c} << 52));
}

// Operation codes carry a registered set/renaming id in their upper bits.
inline std::uint32_t tagged(Op op, unsigned id) { return static_cast<std::uint32_t>(op) | (id << 8); }

} // namespace

BddManager::BddManager(unsigned num_vars, std::size_t node_limit)
    : num_vars_(num_vars), node_limit_(node_limit) {
  nodes_.push_back({kTerminalVar, 0, 0});
  nodes_.push_back({kTerminalVar, 1, 1});
  unique_.assign(std::size_t{1} << 16, 0);
  cache_.resize(std::size_t{1} << 20);
}

void BddManager::grow_unique() {
  std::vector<std::uint32_t> fresh(unique_.size() * 2, 0);
  const std::size_t mask = fresh.size() - 1;
  for (std::uint32_t id : unique_) {
    if (id == 0) continue;
    const Node& n = nodes_[id];
    std::size_t i = hash3(n.var, n.lo, n.hi) & mask;
    while (fresh[i] != 0) i = (i + 1) & mask;
    fresh[i] = id;
  }
  unique_.swap(fresh);
}

BddRef BddManager::mk(std::uint32_t var, BddRef lo, BddRef hi) {
  if (lo == hi) return lo;
  std::size_t mask = unique_.size() - 1;
  std::size_t i = hash3(var, lo, hi) & mask;
  while (unique_[i] != 0) {
    const Node& n = nodes_[unique_[i]];
    if (n.var == var && n.lo == lo && n.hi == hi) return unique_[i];
    i = (i + 1) & mask;
  }
  if (nodes_.size() >= node_limit_) throw BudgetExceeded("decision diagram node limit reached");
  const auto id = static_cast<BddRef>(nodes_.size());
  nodes_.push_back({var, lo, hi});
  unique_[i] = id;
  if (++unique_used_ * 2 > unique_.size()) grow_unique();
  return id;
}

bool BddManager::cache_get(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, BddRef& r) const {
  const CacheEntry& e = cache_[mix(hash3(a, b, c) ^ op) & (cache_.size() - 1)];
  if (e.valid && e.op == op && e.a == a && e.b == b && e.c == c) {
    r = e.r;
    return true;
  }
  return false;
}

void BddManager::cache_put(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, BddRef r) {
  CacheEntry& e = cache_[mix(hash3(a, b, c) ^ op) & (cache_.size() - 1)];
  e = {op, a, b, c, r, true};
}

BddRef BddManager::var(unsigned v) { return mk(v, kFalse, kTrue); }
BddRef BddManager::nvar(unsigned v) { return mk(v, kTrue, kFalse); }

BddRef BddManager::bnot(BddRef f) {
  if (f <= kTrue) return f ^ 1u;
  BddRef r;
  if (cache_get(op_not, f, 0, 0, r)) return r;
  const Node n = nodes_[f];
  BddRef lo = bnot(n.lo);
  BddRef hi = bnot(n.hi);
  r = mk(n.var, lo, hi);
  cache_put(op_not, f, 0, 0, r);
  return r;
}

BddRef BddManager::apply(std::uint32_t op, BddRef f, BddRef g) {
  switch (op) {
  case op_and:
    if (f == kFalse || g == kFalse) return kFalse;
    if (f == kTrue) return g;
    if (g == kTrue || f == g) return f;
    break;
  case op_or:
    if (f == kTrue || g == kTrue) return kTrue;
    if (f == kFalse) return g;
    if (g == kFalse || f == g) return f;
    break;
  case op_xor:
    if (f == g) return kFalse;
    if (f == kFalse) return g;
    if (g == kFalse) return f;
    if (f == kTrue) return bnot(g);
    if (g == kTrue) return bnot(f);
    break;
  }
  if (f > g) std::swap(f, g); // all three operators commute
  BddRef r;
  if (cache_get(op, f, g, 0, r)) return r;
  const Node a = nodes_[f], b = nodes_[g];
  const std::uint32_t v = std::min(a.var, b.var);
  BddRef lo = apply(op, a.var == v ? a.lo : f, b.var == v ? b.lo : g);
  BddRef hi = apply(op, a.var == v ? a.hi : f, b.var == v ? b.hi : g);
  r = mk(v, lo, hi);
  cache_put(op, f, g, 0, r);
  return r;
}

BddRef BddManager::band(BddRef f, BddRef g) { return apply(op_and, f, g); }
BddRef BddManager::bor(BddRef f, BddRef g) { return apply(op_or, f, g); }
BddRef BddManager::bxor(BddRef f, BddRef g) { return apply(op_xor, f, g); }

BddRef BddManager::ite(BddRef f, BddRef g, BddRef h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;
  if (g == kFalse && h == kTrue) return bnot(f);
  if (g == kTrue) return bor(f, h);
  if (g == kFalse) return band(bnot(f), h);
  if (h == kFalse) return band(f, g);
  if (h == kTrue) return bor(bnot(f), g);
  BddRef r;
  if (cache_get(op_ite, f, g, h, r)) return r;
  const Node a = nodes_[f], b = nodes_[g], c = nodes_[h];
  const std::uint32_t v = std::min({a.var, b.var, c.var});
  BddRef lo = ite(a.var == v ? a.lo : f, b.var == v ? b.lo : g, c.var == v ? c.lo : h);
  BddRef hi = ite(a.var == v ? a.hi : f, b.var == v ? b.hi : g, c.var == v ? c.hi : h);
  r = mk(v, lo, hi);
  cache_put(op_ite, f, g, h, r);
  return r;
}

unsigned BddManager::make_varset(const std::vector<unsigned>& vars) {
  std::vector<bool> mask(num_vars_, false);
  unsigned last = 0;
  for (unsigned v : vars) {
    mask.at(v) = true;
    last = std::max(last, v);
  }
  varsets_.push_back(std::move(mask));
  varset_last_.push_back(vars.empty() ? 0 : last);
  return static_cast<unsigned>(varsets_.size() - 1);
}

unsigned BddManager::make_renaming(const std::vector<unsigned>& map, bool monotone) {
  renamings_.push_back({map, monotone});
  return static_cast<unsigned>(renamings_.size() - 1);
}

BddRef BddManager::exists(BddRef f, unsigned varset) { return exists_rec(f, varset); }

BddRef BddManager::exists_rec(BddRef f, unsigned set) {
  if (f <= kTrue) return f;
  const Node n = nodes_[f];
  if (n.var > varset_last_[set]) return f;
  BddRef r;
  const std::uint32_t op = tagged(op_exists, set);
  if (cache_get(op, f, 0, 0, r)) return r;
  BddRef lo = exists_rec(n.lo, set);
  if (varsets_[set][n.var] && lo == kTrue) {
    r = kTrue;
  } else {
    BddRef hi = exists_rec(n.hi, set);
    r = varsets_[set][n.var] ? bor(lo, hi) : mk(n.var, lo, hi);
  }
  cache_put(op, f, 0, 0, r);
  return r;
}

BddRef BddManager::and_exists(BddRef f, BddRef g, unsigned varset) { return and_exists_rec(f, g, varset); }

BddRef BddManager::and_exists_rec(BddRef f, BddRef g, unsigned set) {
  if (f == kFalse || g == kFalse) return kFalse;
  if (f == kTrue && g == kTrue) return kTrue;
  if (f == kTrue) return exists_rec(g, set);
  if (g == kTrue || f == g) return exists_rec(f, set);
  if (f > g) std::swap(f, g);
  const Node a = nodes_[f], b = nodes_[g];
  const std::uint32_t v = std::min(a.var, b.var);
  if (v > varset_last_[set]) return band(f, g);
  BddRef r;
  const std::uint32_t op = tagged(op_and_exists, set);
  if (cache_get(op, f, g, 0, r)) return r;
  BddRef lo = and_exists_rec(a.var == v ? a.lo : f, b.var == v ? b.lo : g, set);
  if (varsets_[set][v]) {
    if (lo == kTrue) {
      r = kTrue;
    } else {
      BddRef hi = and_exists_rec(a.var == v ? a.hi : f, b.var == v ? b.hi : g, set);
      r = bor(lo, hi);
    }
  } else {
    BddRef hi = and_exists_rec(a.var == v ? a.hi : f, b.var == v ? b.hi : g, set);
    r = mk(v, lo, hi);
  }
  cache_put(op, f, g, 0, r);
  return r;
}

BddRef BddManager::rename(BddRef f, unsigned renaming) { return rename_rec(f, renaming); }

BddRef BddManager::rename_rec(BddRef f, unsigned ren) {
  if (f <= kTrue) return f;
  BddRef r;
  const std::uint32_t op = tagged(op_rename, ren);
  if (cache_get(op, f, 0, 0, r)) return r;
  const Node n = nodes_[f];
  BddRef lo = rename_rec(n.lo, ren);
  BddRef hi = rename_rec(n.hi, ren);
  const unsigned to = renamings_[ren].map[n.var];
  r = renamings_[ren].monotone ? mk(to, lo, hi) : ite(var(to), hi, lo);
  cache_put(op, f, 0, 0, r);
  return r;
}

bool BddManager::eval(BddRef f, const std::vector<bool>& assignment) const {
  while (f > kTrue) {
    const Node& n = nodes_[f];
    f = assignment.at(n.var) ? n.hi : n.lo;
  }
  return f == kTrue;
}

std::vector<signed char> BddManager::sat_one(BddRef f) const {
  std::vector<signed char> out(num_vars_, -1);
  while (f > kTrue) {
    const Node& n = nodes_[f];
    if (n.lo != kFalse) {
      out[n.var] = 0;
      f = n.lo;
    } else {
      out[n.var] = 1;
      f = n.hi;
    }
  }
  return out;
}

double BddManager::sat_count(BddRef f, unsigned over) const {
  std::vector<double> memo(nodes_.size(), -1.0);
  // Count over the variables strictly below the node's level, then scale.
  std::function<double(BddRef)> rec = [&](BddRef g) -> double {
    if (g == kFalse) return 0.0;
    if (g == kTrue) return 1.0;
    if (memo[g] >= 0) return memo[g];
    const Node& n = nodes_[g];
    auto level = [&](BddRef h) { return h <= kTrue ? over : nodes_[h].var; };
    double lo = rec(n.lo) * std::ldexp(1.0, static_cast<int>(level(n.lo) - n.var - 1));
    double hi = rec(n.hi) * std::ldexp(1.0, static_cast<int>(level(n.hi) - n.var - 1));
    return memo[g] = lo + hi;
  };
  const unsigned top = f <= kTrue ? over : nodes_[f].var;
  return rec(f) * std::ldexp(1.0, static_cast<int>(top));
}

} // namespace wherecheck
