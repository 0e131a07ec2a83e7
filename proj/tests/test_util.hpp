#pragma once

#include <string>

#include "wherecheck/analysis.hpp"
#include "wherecheck/frontend.hpp"

namespace wherecheck::testing {

inline const char* kTwoLevel = "lattice: L < H\n"
                               "var h : H\nvar h1 : H\nvar h2 : H\n"
                               "var l : L\nvar l1 : L\nvar l2 : L\n";

inline const char* kIoPolicy = "lattice: L < H\n"
                               "var h : H\nvar l : L\nvar n : L\nvar x : L\n"
                               "channel in : L input length 2\n"
                               "channel ih : H input\n"
                               "channel o : L output\n"
                               "channel oh : H output\n";

inline Policy two_level() { return parse_policy(kTwoLevel); }
inline Policy io_policy() { return parse_policy(kIoPolicy); }

inline Level level(const Policy& p, const std::string& name) { return *p.lattice.find(name); }

inline std::string corpus(const std::string& rel) { return std::string(WHERECHECK_CORPUS) + "/" + rel; }

inline Verdict verdict(const std::string& program, const Policy& policy, unsigned bits, std::size_t cap = 4,
                       ComposeMode mode = ComposeMode::storematch) {
  AnalyzeOptions o;
  o.bits = bits;
  o.capacity = cap;
  o.mode = mode;
  return analyze(parse_program(program), policy, o).overall;
}

} // namespace wherecheck::testing
