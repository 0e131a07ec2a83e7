#pragma once

// Small-step interpreter and the low-equivalence relations on stores and
// channels.

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "wherecheck/ast.hpp"
#include "wherecheck/policy.hpp"

namespace wherecheck {

constexpr std::size_t kDefaultCapacity = 8;
constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

inline Value value_mask(unsigned bits) { return bits >= 32 ? ~Value{0} : (Value{1} << bits) - 1; }

Value eval_expr(const Expr& e, const std::vector<Value>& mu, unsigned bits);
Value apply_binop(BinOp op, Value a, Value b, unsigned bits);

// Interpreter state. Indices follow Program::variables() and
// Program::channels(); the command is a stack of pending commands with the
// next one at the back, so `cmd = C1; C2` is {C2, C1}.
struct Configuration {
  std::vector<Value> mu;
  std::vector<std::vector<Value>> ins;
  std::vector<std::vector<Value>> outs;
  std::vector<std::size_t> p;
  std::vector<std::size_t> q;
  std::vector<std::size_t> capacity;
  std::vector<const Command*> cont;

  bool terminated() const;
};

struct StepLabel {
  enum class Kind { plain, declass, halted, input_exhausted, capacity_exceeded };
  Kind kind = Kind::plain;
  int site = -1;
  Value value = 0;          // declassified value
  const char* rule = "";

  bool terminal() const { return kind != Kind::plain && kind != Kind::declass; }
};

const char* to_string(StepLabel::Kind k);

enum class RunOutcome { halted, input_exhausted, capacity_exceeded, out_of_fuel, diverged };

const char* to_string(RunOutcome o);

struct TraceEntry {
  Configuration config; // state after the step
  StepLabel label;
};

struct Trace {
  Configuration initial;
  std::vector<TraceEntry> steps;
  RunOutcome outcome = RunOutcome::out_of_fuel;
};

class Interpreter {
public:
  Interpreter(const Program& program, const Policy& policy, unsigned bits);

  const Program& program() const { return *program_; }
  unsigned bits() const { return bits_; }

  // Initial configuration; missing input lists are empty and every output
  // channel gets `capacity` cells.
  Configuration initial(std::vector<Value> mu, std::vector<std::vector<Value>> ins,
                        std::size_t capacity = kDefaultCapacity) const;

  std::pair<Configuration, StepLabel> step(const Configuration& c) const;
  // In-place variant of step.
  StepLabel advance(Configuration& c) const;

  Trace run(Configuration c, std::size_t fuel) const;

  // Runs in place until a terminal label, fuel exhaustion, or (when
  // detect_cycles is set) a repeated configuration at a loop head. The
  // observer sees every label and may stop the run by returning false, in
  // which case the result is nullopt-like: `stopped` is set.
  struct DriveResult {
    RunOutcome outcome = RunOutcome::out_of_fuel;
    bool stopped = false;
    std::size_t steps = 0;
  };
  DriveResult drive(Configuration& c, std::size_t fuel, bool detect_cycles,
                    const std::function<bool(const StepLabel&, const Configuration&)>& observer) const;

private:
  const Program* program_;
  std::vector<bool> real_downgrade_;
  unsigned bits_;
  bool has_loops_ = false;
};

// Trace dump: one line per step, "site | rule-name | label | changed-bindings".
std::string dump_trace(const Program& program, const Trace& trace);

bool low_equiv_store(const Program& program, const std::vector<Value>& mu1, const std::vector<Value>& mu2,
                     Level level, const Policy& policy);

struct ChannelState {
  std::vector<Value> values;
  std::size_t index = 0;
};

// Equal consumed/produced prefix when the channel is observable at `level`;
// vacuously true otherwise.
bool low_equiv_channels(const ChannelState& a, const ChannelState& b, Level channel_level, Level level,
                        const Policy& policy);

} // namespace wherecheck
