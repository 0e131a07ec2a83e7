#pragma once

// Forward reachability for symbolic pushdown systems: relational post*
// saturation of a P-automaton, an explicit-state breadth-first search used as
// a cross-check on small models, and witness extraction for composed models.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "wherecheck/compose.hpp"
#include "wherecheck/oracle.hpp"
#include "wherecheck/spds.hpp"

namespace wherecheck {

// Automaton states: 0 is the single control state, 1 the final state, and
// 2 + s the mid-state of pushed symbol s. A transition (from, symbol, to)
// carries a relation between the valuation at `from` (current copy) and the
// one at `to` (auxiliary copy); transitions into the final state ignore the
// latter. Symbol -1 is epsilon.
class PostStar {
public:
  static constexpr int kControl = 0;
  static constexpr int kFinal = 1;
  static constexpr int kEpsilon = -1;

  PostStar(const Spds& spds, SymbolicContext& ctx);

  // Saturates; when `stop_symbol` is given, stops as soon as a
  // configuration with that symbol on top is found.
  void saturate(std::optional<int> stop_symbol = std::nullopt);

  bool reached(int symbol) const;
  // Valuations of configurations with `symbol` on top (current copy).
  BddRef heads(int symbol);
  bool accepts(const std::vector<int>& stack, const Valuation& v);

  std::size_t steps() const { return steps_; }
  std::size_t transitions() const { return trans_.size(); }

private:
  using Key = std::tuple<int, int, int>;

  static int mid(int symbol) { return 2 + symbol; }
  void add(const Key& key, BddRef rel);
  BddRef rule_relation(std::size_t rule);
  BddRef compose(BddRef first, BddRef second);

  const Spds& spds_;
  SymbolicContext& ctx_;
  std::map<Key, BddRef> trans_;
  std::vector<std::vector<Key>> out_;
  std::vector<std::vector<std::size_t>> rules_by_lhs_;
  std::vector<std::optional<BddRef>> rule_bdd_;
  std::deque<std::pair<Key, BddRef>> work_;
  std::set<int> reached_;
  std::size_t steps_ = 0;
};

struct ExplicitResult {
  std::map<int, std::set<std::uint64_t>> heads; // top symbol -> packed valuations
  std::size_t configurations = 0;
};

// Breadth-first search over packed configurations from every initial
// valuation; throws BudgetExceeded beyond `max_configurations` or when the
// layout does not fit in 64 bits.
ExplicitResult explicit_reach(const Spds& spds, std::size_t max_configurations = std::size_t{1} << 20);

struct WitnessStep {
  std::size_t rule = 0;
  std::vector<int> stack; // after the step, top first
  Valuation valuation;    // after the step
};

struct Witness {
  Level level;
  Valuation initial;
  std::vector<WitnessStep> steps;
  RunPair pair;
  std::string observable; // from the model's final step
  bool replayed = false;
  std::string replay_observable;
};

// Shortest rule sequence from an initial configuration to one with `target`
// on top, by layered search; ties go to the earlier-declared rule. Returns
// nullopt when the target is unreachable within `max_layers`.
std::optional<Witness> extract_witness(const ComposedModel& model, SymbolicContext& ctx, int target,
                                       std::size_t max_layers = 100000);

// Fills the witness's run pair and observable from its path, then replays
// the pair concretely and records whether the violation reproduces.
void decode_and_replay(Witness& witness, const ComposedModel& model, const Program& program, const Policy& policy,
                       Property property);

} // namespace wherecheck
