#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace wherecheck;
using namespace wherecheck::testing;

namespace {

struct Fixture {
  Program program;
  Policy policy;
  Interpreter interp;
  Fixture(const std::string& src, Policy pol, unsigned bits)
      : program(parse_program(src)), policy(gather_downgrades(program, pol)), interp(program, policy, bits) {}
};

} // namespace

TEST(Semantics, ArithmeticWraps) {
  EXPECT_EQ(apply_binop(BinOp::add, 3, 1, 2), 0u);
  EXPECT_EQ(apply_binop(BinOp::sub, 0, 1, 2), 3u);
  EXPECT_EQ(apply_binop(BinOp::mul, 3, 3, 3), 1u);
  EXPECT_EQ(apply_binop(BinOp::lt, 1, 2, 3), 1u);
  EXPECT_EQ(apply_binop(BinOp::le, 2, 2, 3), 1u);
  EXPECT_EQ(apply_binop(BinOp::bit_and, 6, 3, 3), 2u);
  EXPECT_EQ(apply_binop(BinOp::bit_or, 4, 1, 3), 5u);
}

TEST(Semantics, RunHaltsWithExpectedStore) {
  Fixture f("n := 3; l := 0; while n do l := l + 2; n := n - 1 od", io_policy(), 3);
  Trace t = f.interp.run(f.interp.initial({0, 0, 0, 0}, {}), 1000);
  ASSERT_EQ(t.outcome, RunOutcome::halted);
  const auto& mu = t.steps.back().config.mu;
  EXPECT_EQ(mu[f.program.variable_index("l")], 6u);
  EXPECT_EQ(mu[f.program.variable_index("n")], 0u);
}

TEST(Semantics, Deterministic) {
  Fixture f("input(x, in); while x do output(x, o); input(x, in) od", io_policy(), 2);
  Configuration c = f.interp.initial({0, 0, 0, 0}, {{3, 1}, {}, {}, {}});
  Trace a = f.interp.run(c, 1000), b = f.interp.run(c, 1000);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  EXPECT_EQ(dump_trace(f.program, a), dump_trace(f.program, b));
  for (std::size_t i = 0; i < a.steps.size(); ++i) EXPECT_EQ(a.steps[i].config.mu, b.steps[i].config.mu);
}

TEST(Semantics, CountersMonotoneAndInputsImmutable) {
  Fixture f("input(x, in); output(x, o); input(x, in); output(x, o); output(h, oh)", io_policy(), 2);
  Configuration c = f.interp.initial({1, 0, 0, 0}, {{2, 3}, {}, {}, {}});
  const auto ins = c.ins;
  std::vector<std::size_t> p = c.p, q = c.q;
  while (true) {
    StepLabel l = f.interp.advance(c);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_GE(c.p[i], p[i]);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_GE(c.q[i], q[i]);
    EXPECT_EQ(c.ins, ins);
    p = c.p;
    q = c.q;
    if (l.terminal()) {
      EXPECT_EQ(l.kind, StepLabel::Kind::halted);
      break;
    }
  }
  const int o = f.program.channel_index("o");
  EXPECT_EQ(c.q[o], 2u);
  EXPECT_EQ(c.outs[o][0], 2u);
  EXPECT_EQ(c.outs[o][1], 3u);
}

TEST(Semantics, InputExhaustedAndCapacity) {
  Fixture f("input(x, in); input(x, in)", io_policy(), 2);
  Trace t = f.interp.run(f.interp.initial({0, 0, 0, 0}, {{1}, {}, {}, {}}), 100);
  EXPECT_EQ(t.outcome, RunOutcome::input_exhausted);

  Fixture g("output(1, o); output(1, o); output(1, o)", io_policy(), 2);
  Trace u = g.interp.run(g.interp.initial({0, 0, 0, 0}, {}, 2), 100);
  EXPECT_EQ(u.outcome, RunOutcome::capacity_exceeded);
}

TEST(Semantics, DeclassLabelOnlyForRealDowngrades) {
  Fixture f("l := declass(h); h1 := declass(h2)", two_level(), 3);
  Trace t = f.interp.run(f.interp.initial({5, 0, 0, 0, 0, 0}, {}), 100);
  ASSERT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.steps[0].label.kind, StepLabel::Kind::declass);
  EXPECT_EQ(t.steps[0].label.value, 5u);
  EXPECT_EQ(t.steps[1].label.kind, StepLabel::Kind::plain);
}

TEST(Semantics, DriveDetectsDivergence) {
  Fixture f("while 1 do skip od", two_level(), 2);
  Configuration c = f.interp.initial(std::vector<Value>(0), {});
  auto r = f.interp.drive(c, 100000, true, [](const StepLabel&, const Configuration&) { return true; });
  EXPECT_EQ(r.outcome, RunOutcome::diverged);
}

TEST(Semantics, LowEquivalence) {
  Policy p = two_level();
  Program prog = parse_program("l := h");
  const Level L = level(p, "L"), H = level(p, "H");
  // slots: h, l
  EXPECT_TRUE(low_equiv_store(prog, {1, 2}, {3, 2}, L, p));
  EXPECT_FALSE(low_equiv_store(prog, {1, 2}, {1, 3}, L, p));
  EXPECT_FALSE(low_equiv_store(prog, {1, 2}, {3, 2}, H, p));
  EXPECT_TRUE(low_equiv_store(prog, {1, 2}, {1, 2}, H, p));

  ChannelState a{{1, 2, 3}, 2}, b{{1, 2, 0}, 2}, c{{1, 0, 3}, 2};
  EXPECT_TRUE(low_equiv_channels(a, b, L, L, p));
  EXPECT_FALSE(low_equiv_channels(a, c, L, L, p));
  EXPECT_TRUE(low_equiv_channels(a, c, H, L, p));
  ChannelState d{{1, 2, 3}, 1};
  EXPECT_FALSE(low_equiv_channels(a, d, L, L, p));
}
