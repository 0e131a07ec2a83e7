#pragma once

// Reduced ordered binary decision diagrams. Nodes are never freed; the
// manager throws BudgetExceeded once the node table reaches its limit.
// Variable index order is the diagram order (smaller index nearer the root).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wherecheck/budget.hpp"

namespace wherecheck {

using BddRef = std::uint32_t;

class BddManager {
public:
  static constexpr BddRef kFalse = 0;
  static constexpr BddRef kTrue = 1;

  explicit BddManager(unsigned num_vars, std::size_t node_limit = std::size_t{1} << 25);

  unsigned num_vars() const { return num_vars_; }
  std::size_t node_count() const { return nodes_.size(); }

  BddRef var(unsigned v);
  BddRef nvar(unsigned v);

  BddRef bnot(BddRef f);
  BddRef band(BddRef f, BddRef g);
  BddRef bor(BddRef f, BddRef g);
  BddRef bxor(BddRef f, BddRef g);
  BddRef biff(BddRef f, BddRef g) { return bnot(bxor(f, g)); }
  BddRef ite(BddRef f, BddRef g, BddRef h);
  BddRef diff(BddRef f, BddRef g) { return band(f, bnot(g)); }

  // Variable sets and renamings are registered once and referred to by id.
  unsigned make_varset(const std::vector<unsigned>& vars);
  // map[v] is the new index of v (identity where map[v] == v). A monotone
  // map must preserve the relative order of every variable it may meet.
  unsigned make_renaming(const std::vector<unsigned>& map, bool monotone);

  BddRef exists(BddRef f, unsigned varset);
  BddRef and_exists(BddRef f, BddRef g, unsigned varset);
  BddRef rename(BddRef f, unsigned renaming);

  bool eval(BddRef f, const std::vector<bool>& assignment) const;
  // One satisfying assignment, preferring 0 at every decision; -1 marks a
  // variable left free along the chosen path. f must not be kFalse.
  std::vector<signed char> sat_one(BddRef f) const;
  // Number of satisfying assignments over the first `over` variables, which
  // must include the support of f.
  double sat_count(BddRef f, unsigned over) const;

  unsigned top_var(BddRef f) const { return nodes_[f].var; }
  BddRef low(BddRef f) const { return nodes_[f].lo; }
  BddRef high(BddRef f) const { return nodes_[f].hi; }

private:
  struct Node {
    std::uint32_t var, lo, hi;
  };
  struct CacheEntry {
    std::uint32_t op = 0, a = 0, b = 0, c = 0, r = 0;
    bool valid = false;
  };
  struct Renaming {
    std::vector<unsigned> map;
    bool monotone;
  };

  BddRef mk(std::uint32_t var, BddRef lo, BddRef hi);
  void grow_unique();
  bool cache_get(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, BddRef& r) const;
  void cache_put(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c, BddRef r);
  BddRef apply(std::uint32_t op, BddRef f, BddRef g);
  BddRef exists_rec(BddRef f, unsigned set);
  BddRef and_exists_rec(BddRef f, BddRef g, unsigned set);
  BddRef rename_rec(BddRef f, unsigned ren);

  unsigned num_vars_;
  std::size_t node_limit_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> unique_;
  std::size_t unique_used_ = 0;
  std::vector<CacheEntry> cache_;
  std::vector<std::vector<bool>> varsets_;
  std::vector<unsigned> varset_last_;
  std::vector<Renaming> renamings_;
};

} // namespace wherecheck
