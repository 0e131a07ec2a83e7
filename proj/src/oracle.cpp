#include <algorithm>
#include <map>

#include "wherecheck/oracle.hpp"

namespace wherecheck {

const char* to_string(Property p) {
  return p == Property::noninterference ? "noninterference" : "where-security";
}

const char* to_string(OracleVerdict::Status s) {
  switch (s) {
  case OracleVerdict::Status::secure: return "secure";
  case OracleVerdict::Status::insecure: return "insecure";
  case OracleVerdict::Status::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

void count_inputs(const Command& c, std::vector<std::size_t>& counts) {
  if (c.kind == Command::Kind::input) ++counts[c.channel_index];
  if (c.first) count_inputs(*c.first, counts);
  if (c.second) count_inputs(*c.second, counts);
}

struct LevelView {
  std::vector<bool> low_var;
  std::vector<bool> low_output;
  std::vector<bool> low_input;
  std::vector<bool> is_input;
};

LevelView view_at(const Program& program, const Policy& policy, Level level) {
  LevelView v;
  for (const auto& name : program.variables())
    v.low_var.push_back(policy.lattice.leq(policy.level_of_variable(name), level));
  for (const auto& name : program.channels()) {
    const auto& ch = policy.channel(name);
    bool low = policy.lattice.leq(ch.level, level);
    v.is_input.push_back(ch.direction == Direction::input);
    v.low_input.push_back(low && ch.direction == Direction::input);
    v.low_output.push_back(low && ch.direction == Direction::output);
  }
  return v;
}

Configuration make_config(const Interpreter& interp, const LevelView& view, std::vector<Value> mu,
                          std::vector<std::vector<Value>> ins, std::size_t capacity) {
  Configuration c = interp.initial(std::move(mu), std::move(ins), capacity);
  // Only observable channels are bounded arrays; unobservable outputs are
  // never stored.
  for (std::size_t ch = 0; ch < c.capacity.size(); ++ch)
    if (!view.low_output[ch]) c.capacity[ch] = kUnbounded;
  return c;
}

struct FirstRun {
  PairCheck::Kind kind = PairCheck::Kind::compliant; // compliant = vacuous
  bool halted = false;
  Configuration final;
  std::map<int, Value> last_declass;
  std::vector<DeclassEvent> declass;
  RunOutcome outcome = RunOutcome::out_of_fuel;
};

FirstRun first_run(const Interpreter& interp, const LevelView& view, const RunPair& pair,
                   const OracleOptions& options) {
  FirstRun r;
  r.final = make_config(interp, view, pair.mu1, pair.ins1, options.capacity);
  auto res = interp.drive(r.final, options.fuel, true, [&](const StepLabel& l, const Configuration&) {
    if (l.kind == StepLabel::Kind::declass) {
      r.last_declass[l.site] = l.value;
      r.declass.push_back({l.site, l.value});
    }
    return true;
  });
  r.outcome = res.outcome;
  r.halted = res.outcome == RunOutcome::halted;
  if (res.outcome == RunOutcome::out_of_fuel) r.kind = PairCheck::Kind::undetermined;
  return r;
}

PairCheck second_run(const Interpreter& interp, const Program& program, const LevelView& view,
                     Property property, const FirstRun& first, const RunPair& pair,
                     const OracleOptions& options) {
  PairCheck out;
  out.run1_declass = first.declass;
  out.run1_outcome = first.outcome;
  std::map<int, Value> bound = first.last_declass;
  Configuration c = make_config(interp, view, pair.mu2, pair.ins2, options.capacity);
  bool violated = false;
  auto res = interp.drive(c, options.fuel, true, [&](const StepLabel& l, const Configuration& cfg) {
    if (l.kind == StepLabel::Kind::declass) {
      out.run2_declass.push_back({l.site, l.value});
      if (property == Property::where_security) {
        auto [it, fresh] = bound.emplace(l.site, l.value);
        if (!fresh && it->second != l.value) return false; // premise fails
      }
      return true;
    }
    if (l.kind == StepLabel::Kind::plain && l.site >= 0) {
      const Command& cmd = *program.sites()[l.site].command;
      if (cmd.kind == Command::Kind::output && view.low_output[cmd.channel_index]) {
        const auto ch = static_cast<std::size_t>(cmd.channel_index);
        const std::size_t k = cfg.q[ch] - 1;
        const Value v = cfg.outs[ch][k];
        if (k >= first.final.q[ch] || first.final.outs[ch][k] != v) {
          out.observable = "channel " + program.channels()[ch] + "[" + std::to_string(k) + "]";
          violated = true;
          return false;
        }
      }
    }
    return true;
  });
  if (violated) {
    out.kind = PairCheck::Kind::violation;
    return out;
  }
  if (res.stopped) return out;
  if (res.outcome == RunOutcome::out_of_fuel) {
    out.kind = PairCheck::Kind::undetermined;
    return out;
  }
  if (res.outcome != RunOutcome::halted) return out;
  for (std::size_t i = 0; i < c.mu.size(); ++i) {
    if (view.low_var[i] && c.mu[i] != first.final.mu[i]) {
      out.kind = PairCheck::Kind::violation;
      out.observable = "variable " + program.variables()[i];
      return out;
    }
  }
  return out;
}

std::size_t oracle_length(const Program& program, const Policy& policy, const OracleOptions& options,
                          std::size_t ch, const std::vector<std::size_t>& counts) {
  if (options.input_length) return *options.input_length;
  const auto& decl = policy.channel(program.channels()[ch]);
  std::size_t model_len = decl.length.value_or(options.capacity);
  return std::min(counts[ch], model_len);
}

} // namespace

std::vector<std::size_t> static_input_counts(const Program& program) {
  std::vector<std::size_t> counts(program.channels().size(), 0);
  count_inputs(program.root(), counts);
  return counts;
}

PairCheck check_pair(const Program& program, const Policy& policy, Level level, Property property,
                     const RunPair& pair, const OracleOptions& options) {
  Interpreter interp(program, policy, options.bits);
  LevelView view = view_at(program, policy, level);
  FirstRun first = first_run(interp, view, pair, options);
  if (!first.halted) {
    PairCheck out;
    out.kind = first.kind;
    out.run1_declass = first.declass;
    out.run1_outcome = first.outcome;
    return out;
  }
  return second_run(interp, program, view, property, first, pair, options);
}

OracleVerdict check_property(const Program& program, const Policy& policy, Property property,
                             const OracleOptions& options) {
  check_program(program, policy);
  Interpreter interp(program, policy, options.bits);
  const std::size_t nvars = program.variables().size();
  const std::size_t nchan = program.channels().size();
  const auto counts = static_input_counts(program);
  const Value radix = Value{1} << options.bits;

  // Budget check over all levels up front.
  std::size_t total = 0;
  std::vector<std::size_t> lens(nchan, 0);
  for (std::size_t ch = 0; ch < nchan; ++ch) lens[ch] = oracle_length(program, policy, options, ch, counts);
  for (Level level : policy.lattice.levels()) {
    LevelView view = view_at(program, policy, level);
    std::size_t digits = nvars;
    for (std::size_t i = 0; i < nvars; ++i) digits += view.low_var[i] ? 0 : 1;
    for (std::size_t ch = 0; ch < nchan; ++ch) {
      if (view.low_input[ch]) digits += lens[ch];
      else if (view.is_input[ch]) digits += 2 * lens[ch];
    }
    std::size_t n = 1;
    for (std::size_t d = 0; d < digits; ++d) {
      if (n > options.budget / radix) throw BudgetExceeded("oracle enumeration exceeds budget");
      n *= radix;
    }
    total += n;
    if (total > options.budget) throw BudgetExceeded("oracle enumeration exceeds budget");
  }

  OracleVerdict verdict;
  bool undetermined = false;
  for (Level level : policy.lattice.levels()) {
    LevelView view = view_at(program, policy, level);
    // Digit layout, slowest first: run-1 store, shared low inputs, run-1 high
    // inputs | run-2 high variables, run-2 high inputs.
    std::size_t outer = nvars, inner = 0;
    for (std::size_t ch = 0; ch < nchan; ++ch) {
      if (view.low_input[ch]) outer += lens[ch];
      else if (view.is_input[ch]) {
        outer += lens[ch];
        inner += lens[ch];
      }
    }
    for (std::size_t i = 0; i < nvars; ++i) inner += view.low_var[i] ? 0 : 1;

    std::vector<Value> od(outer, 0), id(inner, 0);
    auto bump = [&](std::vector<Value>& d) {
      for (std::size_t k = d.size(); k-- > 0;) {
        if (++d[k] < radix) return true;
        d[k] = 0;
      }
      return false;
    };
    do {
      RunPair pair;
      std::size_t k = 0;
      pair.mu1.assign(od.begin(), od.begin() + nvars);
      k = nvars;
      pair.ins1.assign(nchan, {});
      pair.ins2.assign(nchan, {});
      for (std::size_t ch = 0; ch < nchan; ++ch)
        if (view.low_input[ch]) {
          pair.ins1[ch].assign(od.begin() + k, od.begin() + k + lens[ch]);
          pair.ins2[ch] = pair.ins1[ch];
          k += lens[ch];
        }
      for (std::size_t ch = 0; ch < nchan; ++ch)
        if (view.is_input[ch] && !view.low_input[ch]) {
          pair.ins1[ch].assign(od.begin() + k, od.begin() + k + lens[ch]);
          k += lens[ch];
        }
      FirstRun first = first_run(interp, view, pair, options);
      if (!first.halted) {
        undetermined = undetermined || first.kind == PairCheck::Kind::undetermined;
        verdict.pairs += std::size_t{1} << (options.bits * inner);
        continue;
      }
      std::fill(id.begin(), id.end(), 0);
      do {
        std::size_t j = 0;
        pair.mu2 = pair.mu1;
        for (std::size_t i = 0; i < nvars; ++i)
          if (!view.low_var[i]) pair.mu2[i] = id[j++];
        for (std::size_t ch = 0; ch < nchan; ++ch)
          if (view.is_input[ch] && !view.low_input[ch]) {
            pair.ins2[ch].assign(id.begin() + j, id.begin() + j + lens[ch]);
            j += lens[ch];
          }
        ++verdict.pairs;
        PairCheck pc = second_run(interp, program, view, property, first, pair, options);
        if (pc.kind == PairCheck::Kind::undetermined) undetermined = true;
        if (pc.kind == PairCheck::Kind::violation) {
          verdict.status = OracleVerdict::Status::insecure;
          verdict.witness = OracleWitness{level, pair, pc.observable};
          verdict.run1_declass = pc.run1_declass;
          verdict.run2_declass = pc.run2_declass;
          return verdict;
        }
      } while (bump(id));
    } while (bump(od));
  }
  if (undetermined) {
    verdict.status = OracleVerdict::Status::inconclusive;
    verdict.reason = "nontermination within fuel";
  }
  return verdict;
}

OracleVerdict check_noninterference(const Program& program, const Policy& policy, const OracleOptions& options) {
  return check_property(program, policy, Property::noninterference, options);
}

OracleVerdict check_where_security(const Program& program, const Policy& policy, const OracleOptions& options) {
  return check_property(program, policy, Property::where_security, options);
}

} // namespace wherecheck
