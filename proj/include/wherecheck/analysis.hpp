#pragma once

// End-to-end analysis: per observation level, build the model, compose it,
// saturate, and report whether the error state is reachable.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wherecheck/compose.hpp"
#include "wherecheck/reach.hpp"

namespace wherecheck {

enum class Verdict { secure, insecure, inconclusive };

const char* to_string(Verdict v);
int exit_code(Verdict v);

struct AnalyzeOptions {
  unsigned bits = 3;
  std::size_t capacity = kDefaultCapacity;
  ComposeMode mode = ComposeMode::storematch;
  bool witness = false;
  // Run saturation to its fixpoint even after the error state appears.
  bool full_saturation = false;
  std::size_t node_limit = std::size_t{1} << 25;
};

struct LevelResult {
  Level level;
  std::string level_name;
  Verdict verdict = Verdict::secure;
  std::string reason; // inconclusive only
  std::optional<Witness> witness;
  std::size_t skeleton_rules = 0, composed_rules = 0;
  unsigned skeleton_bits = 0, composed_bits = 0;
  std::size_t steps = 0, transitions = 0;
};

struct AnalysisReport {
  std::vector<LevelResult> levels;
  Verdict overall = Verdict::secure;
  unsigned bits = 0;
  std::size_t capacity = 0;
  ComposeMode mode = ComposeMode::storematch;
  double seconds = 0;
};

// Gathers downgrades from the program before modeling.
AnalysisReport analyze(const Program& program, const Policy& policy, const AnalyzeOptions& options);

// Least bit width in [1, max_bits] at which the analysis reports a
// violation; nullopt when none does.
std::optional<unsigned> find_nmin(const Program& program, const Policy& policy, unsigned max_bits,
                                  const AnalyzeOptions& options);

// Machine-readable report lines; deterministic (no timing).
std::string format_report(const AnalysisReport& report);
// Decoded counterexample with both runs' interpreter traces.
std::string format_witness(const Program& program, const Policy& policy, const Witness& witness, unsigned bits,
                           std::size_t capacity);

struct BenchEntry {
  std::string name;
  AnalysisReport storematch, tr;
  bool has_low_output = false;
  unsigned bits(const AnalysisReport& r) const;
  std::size_t steps(const AnalysisReport& r) const;
};

// Every file in `dir` without a '.' in its name is a program; its policy is
// "<name>.policy" if present, else "default.policy".
std::vector<BenchEntry> bench(const std::string& dir, const AnalyzeOptions& options);
std::string format_bench(const std::vector<BenchEntry>& entries);

// File helpers shared by the command line and the tests.
std::string read_file(const std::string& path);
Program load_program(const std::string& path);
Policy load_policy(const std::string& path);

} // namespace wherecheck
