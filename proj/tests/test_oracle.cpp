#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wherecheck/oracle.hpp"

using namespace wherecheck;
using namespace wherecheck::testing;

namespace {

OracleVerdict ws(const std::string& src, const Policy& pol, unsigned bits = 2, std::size_t cap = 4) {
  Program p = parse_program(src);
  OracleOptions o;
  o.bits = bits;
  o.capacity = cap;
  return check_where_security(p, gather_downgrades(p, pol), o);
}

OracleVerdict ni(const std::string& src, const Policy& pol, unsigned bits = 2, std::size_t cap = 4) {
  Program p = parse_program(src);
  OracleOptions o;
  o.bits = bits;
  o.capacity = cap;
  return check_noninterference(p, gather_downgrades(p, pol), o);
}

} // namespace

TEST(Oracle, DirectFlowIsInsecure) {
  OracleVerdict v = ws("l := h", two_level());
  EXPECT_EQ(v.status, OracleVerdict::Status::insecure);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->observable, "variable l");
}

TEST(Oracle, DeclassCorpusWhereColumn) {
  const std::pair<const char*, bool> rows[] = {
      {"l := h; l := declass(h)", true},
      {"l := declass(h); l := h", true},
      {"h1 := h2; l := declass(h1)", true},
      {"h1 := h2; h2 := 0; l1 := declass(h2); h2 := h1; l2 := h2", false},
      {"h2 := 0; if h1 then l := declass(h1) else l := declass(h2) fi", false},
      {"l := 0; if l then l := declass(h) else skip fi; l := h", false},
      {"h2 := 0; if h1 then l := declass(h2) else l := 0 fi", true},
      {"l := declass(h != 0); if l then l1 := declass(h1) else skip fi", true},
  };
  for (const auto& [src, secure] : rows) EXPECT_EQ(ws(src, two_level()).secure(), secure) << src;
}

TEST(Oracle, DeclassIsNotNoninterference) {
  EXPECT_TRUE(ws("l := declass(h)", two_level()).secure());
  EXPECT_FALSE(ni("l := declass(h)", two_level()).secure());
}

TEST(Oracle, ImplicitFlowThroughOutput) {
  EXPECT_FALSE(ws("if h then output(1, o) else skip fi", io_policy()).secure());
  EXPECT_TRUE(ws("if h then output(1, o) else output(1, o) fi", io_policy()).secure());
  EXPECT_TRUE(ws("output(h, oh)", io_policy()).secure());
}

TEST(Oracle, LowInputsAreShared) {
  EXPECT_TRUE(ws("input(x, in); output(x, o)", io_policy()).secure());
  EXPECT_FALSE(ws("input(h, ih); output(h, o)", io_policy()).secure());
}

TEST(Oracle, TerminationInsensitive) {
  EXPECT_TRUE(ws("while h do skip od", io_policy()).secure());
}

TEST(Oracle, CheckPairReportsDeclassTraces) {
  Policy pol = gather_downgrades(parse_program("l := declass(h)"), two_level());
  Program p = parse_program("l := declass(h)");
  OracleOptions o;
  o.bits = 2;
  RunPair pair{{1, 0}, {2, 0}, {}, {}};
  PairCheck c = check_pair(p, pol, level(pol, "L"), Property::where_security, pair, o);
  EXPECT_EQ(c.kind, PairCheck::Kind::compliant);
  ASSERT_EQ(c.run1_declass.size(), 1u);
  EXPECT_EQ(c.run1_declass[0].value, 1u);
  EXPECT_EQ(c.run1_outcome, RunOutcome::halted);

  PairCheck n = check_pair(p, pol, level(pol, "L"), Property::noninterference, pair, o);
  EXPECT_EQ(n.kind, PairCheck::Kind::violation);
}

TEST(Oracle, StaticInputCounts) {
  Program p = parse_program("input(x, in); while x do input(x, in); input(h, ih) od");
  auto counts = static_input_counts(p);
  EXPECT_EQ(counts[p.channel_index("in")], 2u);
  EXPECT_EQ(counts[p.channel_index("ih")], 1u);
}

TEST(Oracle, BudgetIsEnforced) {
  Program p = parse_program("l := h + h1 + h2 + l1 + l2");
  OracleOptions o;
  o.bits = 3;
  o.budget = 100;
  EXPECT_THROW(check_where_security(p, two_level(), o), BudgetExceeded);
}
