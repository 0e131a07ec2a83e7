#pragma once

// Brute-force ground truth: enumerates every pair of level-equivalent
// initial states at a small bit width and checks the two-run obligation of
// noninterference or where-security concretely with the interpreter.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wherecheck/ast.hpp"
#include "wherecheck/budget.hpp"
#include "wherecheck/policy.hpp"
#include "wherecheck/semantics.hpp"

namespace wherecheck {

enum class Property { noninterference, where_security };

const char* to_string(Property p);

struct OracleOptions {
  unsigned bits = 3;
  std::size_t capacity = kDefaultCapacity;
  std::size_t fuel = 100000;
  std::size_t budget = std::size_t{1} << 22; // enumerated pairs, summed over levels
  // Input list length per channel; defaults to the number of input
  // statements reading the channel (loop bodies counted once), capped by the
  // channel's declared length or the capacity.
  std::optional<std::size_t> input_length;
};

// Initial stores and input lists of the two runs, indexed like the
// program's variables and channels.
struct RunPair {
  std::vector<Value> mu1, mu2;
  std::vector<std::vector<Value>> ins1, ins2;
};

struct DeclassEvent {
  int site = -1;
  Value value = 0;
  bool operator==(const DeclassEvent&) const = default;
};

struct PairCheck {
  enum class Kind { compliant, violation, undetermined };
  Kind kind = Kind::compliant;
  std::string observable; // "variable l" or "channel out0[1]" on violation
  std::vector<DeclassEvent> run1_declass, run2_declass;
  RunOutcome run1_outcome = RunOutcome::out_of_fuel;
};

// Checks one pair at one observation level. Run 1 must halt; run 2 is then
// compared step by step: each observable output must equal run 1's output at
// the same index, and on halting the observable variables must agree. For
// where-security, a run-2 declassification whose value differs from the
// last value run 1 declassified at the same site discharges the pair; a site
// run 1 never reached is bound by its first run-2 value.
PairCheck check_pair(const Program& program, const Policy& policy, Level level, Property property,
                     const RunPair& pair, const OracleOptions& options);

struct OracleWitness {
  Level level;
  RunPair pair;
  std::string observable;
};

struct OracleVerdict {
  enum class Status { secure, insecure, inconclusive };
  Status status = Status::secure;
  std::optional<OracleWitness> witness;
  std::vector<DeclassEvent> run1_declass, run2_declass; // for the witness pair
  std::string reason;
  std::size_t pairs = 0;

  bool secure() const { return status == Status::secure; }
};

const char* to_string(OracleVerdict::Status s);

OracleVerdict check_noninterference(const Program& program, const Policy& policy, const OracleOptions& options);
OracleVerdict check_where_security(const Program& program, const Policy& policy, const OracleOptions& options);
OracleVerdict check_property(const Program& program, const Policy& policy, Property property,
                             const OracleOptions& options);

// Static count of input statements per channel slot, loop bodies once.
std::vector<std::size_t> static_input_counts(const Program& program);

} // namespace wherecheck
