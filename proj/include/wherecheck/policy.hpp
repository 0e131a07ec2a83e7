#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wherecheck/ast.hpp"

namespace wherecheck {

class PolicyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A security domain, as an index into its lattice.
struct Level {
  std::size_t index = 0;
  auto operator<=>(const Level&) const = default;
};

// Finite partial order of security domains. Pairs are added as "a below b"
// and closed reflexively and transitively.
class Lattice {
public:
  Level add(const std::string& name);
  void add_order(Level below, Level above);
  // Closes the order and rejects cycles.
  void close();

  std::size_t size() const { return names_.size(); }
  const std::string& name(Level l) const { return names_.at(l.index); }
  std::optional<Level> find(const std::string& name) const;
  std::vector<Level> levels() const;

  bool leq(Level a, Level b) const { return leq_[a.index][b.index]; }
  bool strictly_below(Level a, Level b) const { return a != b && leq(a, b); }
  std::optional<Level> lub(Level a, Level b) const;
  std::optional<Level> bottom() const;

private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
};

enum class Direction { input, output };

struct ChannelDecl {
  Level level;
  Direction direction = Direction::input;
  std::optional<std::size_t> length; // declared input extent
};

struct Policy {
  Lattice lattice;
  std::map<std::string, Level> variables;
  std::map<std::string, ChannelDecl> channels;
  // (high, low) pairs gathered from real downgrading declass commands.
  std::set<std::pair<Level, Level>> downgrades;

  Level level_of_variable(const std::string& name) const;
  const ChannelDecl& channel(const std::string& name) const;
};

// Least upper bound of the levels of the variables in e; the least element
// for variable-free expressions.
Level domain_of_expr(const Expr& e, const Policy& policy);

// Checks that every variable and channel of the program has a level, that
// channels are used in their declared direction, that every expression has
// a least upper bound, and that no declass relates incomparable levels.
void check_program(const Program& p, const Policy& policy);

// True when the site is a declass command with sigma(x) strictly below sigma(e).
bool is_real_downgrade(const Command& c, const Policy& policy);

// Returns the policy with its downgrade relation gathered from the program's
// declass commands.
Policy gather_downgrades(const Program& p, const Policy& policy);

// Per-site classification, indexed by site id: true for real downgrades.
std::vector<bool> downgrade_sites(const Program& p, const Policy& policy);

} // namespace wherecheck
