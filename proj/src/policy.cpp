#include <functional>

#include "wherecheck/policy.hpp"

namespace wherecheck {

Level Lattice::add(const std::string& name) {
  if (find(name)) throw PolicyError("duplicate level '" + name + "'");
  names_.push_back(name);
  for (auto& row : leq_) row.push_back(false);
  leq_.emplace_back(names_.size(), false);
  Level l{names_.size() - 1};
  leq_[l.index][l.index] = true;
  return l;
}

void Lattice::add_order(Level below, Level above) { leq_.at(below.index).at(above.index) = true; }

void Lattice::close() {
  const std::size_t n = names_.size();
  for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq_[k][j]) leq_[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq_[i][j] && leq_[j][i])
        throw PolicyError("cycle in lattice between '" + names_[i] + "' and '" + names_[j] + "'");
}

std::optional<Level> Lattice::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return Level{i};
  return std::nullopt;
}

std::vector<Level> Lattice::levels() const {
  std::vector<Level> out;
  for (std::size_t i = 0; i < names_.size(); ++i) out.push_back(Level{i});
  return out;
}

std::optional<Level> Lattice::lub(Level a, Level b) const {
  std::optional<Level> best;
  for (Level c : levels()) {
    if (!leq(a, c) || !leq(b, c)) continue;
    if (!best || leq(c, *best)) best = c;
  }
  if (!best) return std::nullopt;
  // The candidate must sit below every other upper bound.
  for (Level c : levels())
    if (leq(a, c) && leq(b, c) && !leq(*best, c)) return std::nullopt;
  return best;
}

std::optional<Level> Lattice::bottom() const {
  for (Level c : levels()) {
    bool least = true;
    for (Level d : levels()) least = least && leq(c, d);
    if (least) return c;
  }
  return std::nullopt;
}

Level Policy::level_of_variable(const std::string& name) const {
  auto it = variables.find(name);
  if (it == variables.end()) throw PolicyError("no security level declared for variable '" + name + "'");
  return it->second;
}

const ChannelDecl& Policy::channel(const std::string& name) const {
  auto it = channels.find(name);
  if (it == channels.end()) throw PolicyError("no security level declared for channel '" + name + "'");
  return it->second;
}

Level domain_of_expr(const Expr& e, const Policy& policy) {
  switch (e.kind) {
  case Expr::Kind::constant: {
    auto b = policy.lattice.bottom();
    if (!b) throw PolicyError("lattice has no least element for constant expressions");
    return *b;
  }
  case Expr::Kind::variable: return policy.level_of_variable(e.name);
  case Expr::Kind::binary: {
    Level a = domain_of_expr(*e.lhs, policy);
    Level b = domain_of_expr(*e.rhs, policy);
    auto j = policy.lattice.lub(a, b);
    if (!j)
      throw PolicyError("no least upper bound for levels '" + policy.lattice.name(a) + "' and '" +
                        policy.lattice.name(b) + "'");
    return *j;
  }
  }
  throw PolicyError("unreachable");
}

namespace {

void walk(const Command& c, const std::function<void(const Command&)>& f) {
  f(c);
  if (c.first) walk(*c.first, f);
  if (c.second) walk(*c.second, f);
}

} // namespace

void check_program(const Program& p, const Policy& policy) {
  for (const auto& v : p.variables()) policy.level_of_variable(v);
  walk(p.root(), [&](const Command& c) {
    if (c.expr) domain_of_expr(*c.expr, policy);
    if (c.kind == Command::Kind::input && policy.channel(c.channel).direction != Direction::input)
      throw PolicyError("channel '" + c.channel + "' is not an input channel");
    if (c.kind == Command::Kind::output && policy.channel(c.channel).direction != Direction::output)
      throw PolicyError("channel '" + c.channel + "' is not an output channel");
    if (c.kind == Command::Kind::declass) {
      Level le = domain_of_expr(*c.expr, policy);
      Level lx = policy.level_of_variable(c.target);
      if (!policy.lattice.leq(le, lx) && !policy.lattice.leq(lx, le))
        throw PolicyError("declass into '" + c.target + "' relates incomparable levels");
    }
  });
}

bool is_real_downgrade(const Command& c, const Policy& policy) {
  if (c.kind != Command::Kind::declass) return false;
  Level le = domain_of_expr(*c.expr, policy);
  Level lx = policy.level_of_variable(c.target);
  return policy.lattice.strictly_below(lx, le);
}

Policy gather_downgrades(const Program& p, const Policy& policy) {
  Policy out = policy;
  out.downgrades.clear();
  walk(p.root(), [&](const Command& c) {
    if (is_real_downgrade(c, policy))
      out.downgrades.emplace(domain_of_expr(*c.expr, policy), policy.level_of_variable(c.target));
  });
  return out;
}

std::vector<bool> downgrade_sites(const Program& p, const Policy& policy) {
  std::vector<bool> out(p.sites().size(), false);
  for (const auto& s : p.sites()) out[s.id] = is_real_downgrade(*s.command, policy);
  return out;
}

} // namespace wherecheck
