#pragma once

// Two-run self-composition of a model skeleton. Run 1 executes with the
// original globals; a reset rule then restarts the program as run 2 over
// companion variables xi(x).
//
// storematch: run 1 stores its observable outputs and declassified values
// in shared arrays; run 2 matches against them in place. A mismatching
// output leads to `error`; a mismatching declassification leads to `idle`.
//
// tr: each visible user output channel is duplicated, run 2 writes to the
// copy, and a `check` state compares both channel contents. Declassified
// values and final variables are still matched in place.

#include <cstddef>
#include <vector>

#include "wherecheck/modelgen.hpp"
#include "wherecheck/spds.hpp"

namespace wherecheck {

enum class ComposeMode { storematch, tr };

const char* to_string(ComposeMode mode);

struct ComposedModel {
  Spds spds;
  ComposeMode mode = ComposeMode::storematch;
  ModelSkeleton skeleton;
  int init_symbol = -1, error = -1, idle = -1;
  int check = -1, done = -1; // tr only
  std::vector<int> map1;     // skeleton global -> composed global, run 1
  std::vector<int> map2;     // skeleton global -> composed global, run 2
  std::vector<int> gmap1, gmap2;

  int run1_var(int slot) const { return map1.at(static_cast<std::size_t>(skeleton.var_global.at(static_cast<std::size_t>(slot)))); }
  int run2_var(int slot) const { return map2.at(static_cast<std::size_t>(skeleton.var_global.at(static_cast<std::size_t>(slot)))); }
};

ComposedModel self_compose(const ModelSkeleton& skeleton);
ComposedModel tr_compose(const ModelSkeleton& skeleton);
ComposedModel compose(const ModelSkeleton& skeleton, ComposeMode mode);

// Rules of a storematch composition: init, run-1 copies without LastTrans,
// run-2 copies, RST, three rules per declassification site (DS and the two
// DM branches), three per visible output channel (OS and the two OM
// branches), and the idle self-loop.
std::size_t storematch_rule_count(const ModelSkeleton& skeleton);

} // namespace wherecheck
