#pragma once

// Symbolic pushdown systems over a finite block of global variables. A rule
// rewrites the top stack symbol into at most two symbols while relating the
// current valuation of the globals to the next one.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wherecheck/ast.hpp"
#include "wherecheck/bdd.hpp"

namespace wherecheck {

struct Global {
  std::string name;
  unsigned width = 1;
};

// Cells of a bounded array (channel contents, the declassification store).
struct ArrayGroup {
  std::string name;
  std::vector<int> cells;
};

class Layout {
public:
  int add(const std::string& name, unsigned width);
  int add_group(const std::string& name, std::vector<int> cells);

  std::optional<int> find(const std::string& name) const;
  std::optional<int> find_group(const std::string& name) const;
  // Throws std::out_of_range on unknown names.
  int at(const std::string& name) const;

  const std::vector<Global>& globals() const { return globals_; }
  const std::vector<ArrayGroup>& groups() const { return groups_; }
  const Global& global(int id) const { return globals_.at(static_cast<std::size_t>(id)); }
  const ArrayGroup& group(int id) const { return groups_.at(static_cast<std::size_t>(id)); }

  unsigned offset(int id) const { return offsets_.at(static_cast<std::size_t>(id)); }
  unsigned total_bits() const { return total_bits_; }

private:
  std::vector<Global> globals_;
  std::vector<unsigned> offsets_;
  std::vector<ArrayGroup> groups_;
  std::map<std::string, int> by_name_;
  std::map<std::string, int> group_by_name_;
  unsigned total_bits_ = 0;
};

// Expressions over the current valuation. Arithmetic wraps at the result
// width (the wider operand); comparisons yield one bit.
struct MExpr;
using MExprPtr = std::shared_ptr<const MExpr>;

struct MExpr {
  enum class Kind { constant, global, read, binary };
  Kind kind = Kind::constant;
  unsigned width = 1;
  Value value = 0;
  int var = -1;
  int group = -1;
  MExprPtr index;
  BinOp op = BinOp::add;
  MExprPtr lhs, rhs;

  static MExprPtr constant(Value v, unsigned width);
  static MExprPtr global(const Layout& layout, int var);
  static MExprPtr read(const Layout& layout, int group, MExprPtr index);
  static MExprPtr binary(BinOp op, MExprPtr lhs, MExprPtr rhs);
};

MExprPtr m_and(MExprPtr a, MExprPtr b);
MExprPtr m_or(MExprPtr a, MExprPtr b);
MExprPtr m_eq(MExprPtr a, MExprPtr b);
MExprPtr m_ne(MExprPtr a, MExprPtr b);
MExprPtr m_lt(MExprPtr a, MExprPtr b);

struct Constraint {
  enum class Kind { guard, assign, store };
  Kind kind = Kind::guard;
  int var = -1;   // assign
  int group = -1; // store
  MExprPtr index; // store
  MExprPtr value; // guard condition, assigned or stored value
};

// Conjunction of constraints plus a retained frame. Globals that are
// neither assigned, stored nor retained are unconstrained in the next
// valuation.
struct Relation {
  std::vector<Constraint> constraints;
  std::set<int> retain;

  Relation& guard(MExprPtr cond);
  Relation& assign(int var, MExprPtr value);
  Relation& store(int group, MExprPtr index, MExprPtr value);
  Relation& keep(const std::set<int>& vars);
  Relation& keep_all_except(const Layout& layout, const std::set<int>& vars);

  // Globals whose next value is fixed by an assign or store constraint.
  std::set<int> written(const Layout& layout) const;
};

// rt(frame): the relation holding every global in `frame` constant.
Relation rt(const std::set<int>& frame);
Relation conjoin(const Relation& a, const Relation& b);

// Rule provenance used for dumps, witness decoding and tests.
enum class RuleKind {
  plain, branch, input_high, input_low, output_high, output_push, output_pop, declass_push, declass_pop,
  final_push, last, init, declass_store, declass_match, declass_mismatch, output_store, output_match,
  output_mismatch, output_body, declass_body, reset, idle_loop, final_loop, check, check_error, check_done,
  done_loop
};

const char* to_string(RuleKind kind);

struct RuleMeta {
  RuleKind kind = RuleKind::plain;
  int run = 0;      // 0: single-run skeleton, 1/2: run of a composed model
  int site = -1;    // program site
  int channel = -1; // program channel slot; -1 for finalvars or none
};

struct Rule {
  int lhs = -1;
  std::vector<int> rhs; // at most two symbols, top first
  Relation rel;
  RuleMeta meta;
};

class Spds {
public:
  Layout layout;
  std::vector<std::string> symbols;
  std::vector<Rule> rules;
  int start = -1;
  std::vector<MExprPtr> init; // conjunction over the initial valuation

  int symbol(const std::string& name); // interns
  std::optional<int> find_symbol(const std::string& name) const;
  const std::string& symbol_name(int s) const { return symbols.at(static_cast<std::size_t>(s)); }

  // Throws std::logic_error on rules with more than two rhs symbols or
  // unknown symbol ids.
  void validate() const;

private:
  std::map<std::string, int> symbol_ids_;
};

// Dump: "<lhs> -> <rhs...> [c1 && c2 ...]", one rule per line in
// declaration order; `rt(G \ {..})` lists the globals that are not retained.
std::string dump_spds(const Spds& spds);
std::string to_string(const Layout& layout, const MExpr& e);

// ---- explicit backend -------------------------------------------------------

using Valuation = std::vector<Value>; // indexed by global id

Value eval(const Layout& layout, const MExpr& e, const Valuation& v);
bool holds_init(const Spds& spds, const Valuation& v);
// Every next valuation related to `cur`, in increasing lexicographic order.
std::vector<Valuation> successors(const Layout& layout, const Relation& rel, const Valuation& cur);
bool related(const Layout& layout, const Relation& rel, const Valuation& cur, const Valuation& next);

// Valuations packed into one word, global 0 in the lowest bits.
std::uint64_t pack(const Layout& layout, const Valuation& v);
Valuation unpack(const Layout& layout, std::uint64_t bits);

struct StackState {
  Valuation valuation;
  std::vector<int> stack; // top first
  auto operator<=>(const StackState&) const = default;
};

std::set<StackState> successors(const Spds& spds, const std::set<StackState>& states);

// Dense relation over a layout of at most 12 bits: one bit per (cur, next).
class ExplicitRelation {
public:
  ExplicitRelation(const Layout& layout, const Relation& rel);
  bool contains(std::uint64_t cur, std::uint64_t next) const;
  std::size_t size() const;

private:
  unsigned bits_;
  std::vector<bool> matrix_;
};

// ---- symbolic backend -------------------------------------------------------

// Diagram variables: bit b of the layout appears three times, interleaved as
// current (3b), next (3b+1) and an auxiliary copy (3b+2).
class SymbolicContext {
public:
  explicit SymbolicContext(const Layout& layout, std::size_t node_limit = std::size_t{1} << 25);

  enum Copy : unsigned { cur = 0, next = 1, aux = 2 };

  BddManager& bdd() { return bdd_; }
  const Layout& layout() const { return layout_; }
  unsigned bdd_var(unsigned bit, Copy copy) const { return 3 * bit + copy; }

  // Bits of an expression over the current (or aux) copy, least significant first.
  std::vector<BddRef> bits(const MExpr& e, Copy copy = cur);
  BddRef nonzero(const MExpr& e, Copy copy = cur);
  BddRef relation(const Relation& rel);
  BddRef predicate(const std::vector<MExprPtr>& conj, Copy copy = cur);
  // Single global equals a concrete value in the given copy.
  BddRef equals(int var, Value value, Copy copy);
  BddRef valuation(const Valuation& v, Copy copy);

  // Variable sets and renamings over all layout bits.
  unsigned set_cur() const { return set_cur_; }
  unsigned set_next() const { return set_next_; }
  unsigned set_aux() const { return set_aux_; }
  unsigned next_to_cur() const { return next_to_cur_; }
  unsigned aux_to_next() const { return aux_to_next_; }
  unsigned cur_to_next() const { return cur_to_next_; }
  unsigned aux_to_cur() const { return aux_to_cur_; }
  unsigned cur_to_aux() const { return cur_to_aux_; }
  BddRef cur_equals_aux() const { return cur_eq_aux_; }

  // Decodes one copy of an assignment returned by sat_one; free bits read 0.
  Valuation decode(const std::vector<signed char>& assignment, Copy copy) const;
  std::vector<bool> encode(const Valuation& cur_v, const Valuation& other, Copy other_copy) const;

private:
  std::vector<BddRef> var_bits(int var, Copy copy);

  const Layout& layout_;
  BddManager bdd_;
  unsigned set_cur_, set_next_, set_aux_;
  unsigned next_to_cur_, aux_to_next_, cur_to_next_, aux_to_cur_, cur_to_aux_;
  BddRef cur_eq_aux_;
};

} // namespace wherecheck
