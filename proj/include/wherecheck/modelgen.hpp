#pragma once

// Translation of a program into a pushdown model observed at one security
// level. Only channels visible at that level are modeled; high inputs
// havoc their target and high outputs are frame-only steps. Output and
// declassification bodies are left for the composer.

#include <cstddef>
#include <string>
#include <vector>

#include "wherecheck/ast.hpp"
#include "wherecheck/policy.hpp"
#include "wherecheck/semantics.hpp"
#include "wherecheck/spds.hpp"

namespace wherecheck {

inline constexpr const char* kFinalChannel = "finalvars";

struct DeclassSite {
  int site = -1;
  int entry = -1, exit = -1; // stack symbols
  int rho = -1;              // index into the D array
  int target = -1;           // program variable slot
};

struct OutputChannel {
  int channel = -1; // program channel slot; -1 for finalvars
  std::string name;
  int entry = -1, exit = -1;
  int group = -1;   // cell array
  int counter = -1; // q
  std::size_t capacity = 0;
};

struct InputChannel {
  int channel = -1;
  std::string name;
  int group = -1;
  int counter = -1; // p
  std::size_t length = 0;
};

struct ModelSkeleton {
  Spds spds;
  Level level;
  unsigned bits = 3;
  std::size_t capacity = kDefaultCapacity;

  std::vector<int> var_global; // program variable slot -> global id
  std::vector<bool> low_var;   // visible at `level`
  int tmp = -1;
  int dstore = -1; // group of the declassification store
  std::vector<DeclassSite> declass_sites;
  std::vector<int> rho;                 // site -> D index or -1
  std::vector<OutputChannel> outputs;   // visible user channels by slot, then finalvars
  std::vector<InputChannel> inputs;     // visible input channels by slot
  std::vector<int> final_vars;          // visible variable slots, name order
  int final_symbol = -1;                // carries LastTrans

  std::size_t last_rule() const; // index of the LastTrans rule
};

struct ModelOptions {
  unsigned bits = 3;
  std::size_t capacity = kDefaultCapacity;
};

// The policy must already carry gathered downgrades.
ModelSkeleton build_model(const Program& program, const Policy& policy, Level level, const ModelOptions& options);

struct BitBudget {
  unsigned variables = 0, tmp = 0, declass = 0, channels = 0;
  unsigned total() const { return variables + tmp + declass + channels; }
};

BitBudget count_globals(const ModelSkeleton& skeleton);

// Skeleton plus the single-run bodies (outputs append to their channel,
// declassification assigns its value), for executing one run directly.
Spds single_run_model(const ModelSkeleton& skeleton);

// "# site <id> <kind> <symbol> ..." lines describing the skeleton's sites.
std::string site_table(const Program& program, const Policy& policy, const ModelSkeleton& skeleton);

// Translates a program expression over the model's program globals.
MExprPtr model_expr(const Expr& e, const ModelSkeleton& skeleton);

} // namespace wherecheck
