#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wherecheck/compose.hpp"

using namespace wherecheck;
using namespace wherecheck::testing;

namespace {

ModelSkeleton skeleton(const std::string& src, const Policy& pol, const std::string& lvl, unsigned bits = 1,
                       std::size_t cap = 2) {
  Program p = parse_program(src);
  Policy g = gather_downgrades(p, pol);
  return build_model(p, g, level(g, lvl), {bits, cap});
}

std::vector<const Rule*> rules_from(const Spds& s, int lhs) {
  std::vector<const Rule*> out;
  for (const auto& r : s.rules)
    if (r.lhs == lhs) out.push_back(&r);
  return out;
}

} // namespace

TEST(Compose, RuleCountLaw) {
  ModelSkeleton sk = skeleton("l := h; l := declass(h)", two_level(), "L");
  ComposedModel cm = self_compose(sk);
  EXPECT_EQ(cm.spds.rules.size(), 20u);
  EXPECT_EQ(storematch_rule_count(sk), 20u);

  const char* programs[] = {"skip", "output(l, o); output(h, oh)", "input(x, in); while x do output(x, o); input(x, in) od",
                            "x := declass(h); output(x, o)"};
  for (const char* src : programs)
    for (const char* lvl : {"L", "H"}) {
      ModelSkeleton s = skeleton(src, io_policy(), lvl);
      EXPECT_EQ(self_compose(s).spds.rules.size(), storematch_rule_count(s)) << src << " @" << lvl;
    }
}

TEST(Compose, IdleAndErrorStructure) {
  ModelSkeleton sk = skeleton("x := declass(h); output(x, o)", io_policy(), "L");
  ComposedModel cm = self_compose(sk);
  cm.spds.validate();
  EXPECT_TRUE(rules_from(cm.spds, cm.error).empty());
  auto idle = rules_from(cm.spds, cm.idle);
  ASSERT_EQ(idle.size(), 1u);
  EXPECT_EQ(idle[0]->rhs, (std::vector<int>{cm.idle}));
  EXPECT_EQ(idle[0]->rel.retain.size(), cm.spds.layout.globals().size());
  EXPECT_TRUE(idle[0]->rel.constraints.empty());
  EXPECT_EQ(cm.spds.start, cm.init_symbol);

  std::size_t to_error = 0, to_idle = 0;
  for (const auto& r : cm.spds.rules) {
    if (r.rhs == std::vector<int>{cm.error}) {
      ++to_error;
      EXPECT_EQ(r.meta.kind, RuleKind::output_mismatch);
    }
    if (r.rhs == std::vector<int>{cm.idle} && r.lhs != cm.idle) {
      ++to_idle;
      EXPECT_EQ(r.meta.kind, RuleKind::declass_mismatch);
    }
  }
  EXPECT_EQ(to_error, 2u); // o and finalvars
  EXPECT_EQ(to_idle, 1u);
}

TEST(Compose, RunsTouchOnlyTheirOwnVariables) {
  ModelSkeleton sk = skeleton("h1 := h2; l := declass(h1); l2 := l + h", two_level(), "L");
  ComposedModel cm = self_compose(sk);
  for (const auto& r : cm.spds.rules) {
    if (r.meta.run != 1 && r.meta.run != 2) continue;
    const std::set<int> w = r.rel.written(cm.spds.layout);
    for (int slot = 0; slot < static_cast<int>(sk.var_global.size()); ++slot) {
      const int other = r.meta.run == 1 ? cm.run2_var(slot) : cm.run1_var(slot);
      EXPECT_FALSE(w.count(other)) << cm.spds.symbol_name(r.lhs);
      EXPECT_TRUE(r.rel.retain.count(other)) << cm.spds.symbol_name(r.lhs);
    }
  }
}

TEST(Compose, CompanionFollowsVariable) {
  ModelSkeleton sk = skeleton("l := h", two_level(), "L");
  ComposedModel cm = self_compose(sk);
  const Layout& L = cm.spds.layout;
  EXPECT_EQ(L.at("xi(h)"), L.at("h") + 1);
  EXPECT_EQ(L.at("xi(l)"), L.at("l") + 1);
  EXPECT_EQ(cm.run2_var(0), L.at("xi(h)"));
}

TEST(Compose, InitCopiesLowVariables) {
  ModelSkeleton sk = skeleton("l := h", two_level(), "L");
  ComposedModel cm = self_compose(sk);
  auto init = rules_from(cm.spds, cm.init_symbol);
  ASSERT_EQ(init.size(), 1u);
  Valuation v(cm.spds.layout.globals().size(), 0);
  v[static_cast<std::size_t>(cm.run1_var(0))] = 1; // h
  v[static_cast<std::size_t>(cm.run1_var(1))] = 1; // l
  for (const auto& n : successors(cm.spds.layout, init[0]->rel, v)) {
    EXPECT_EQ(n[static_cast<std::size_t>(cm.run2_var(1))], 1u);
    EXPECT_EQ(n[static_cast<std::size_t>(cm.run2_var(0))], 0u);
  }
}

TEST(Compose, TrDuplicatesUserChannelsOnly) {
  ModelSkeleton sk = skeleton("output(l, o)", io_policy(), "L");
  ComposedModel sm = self_compose(sk), tr = tr_compose(sk);
  EXPECT_GT(tr.spds.layout.total_bits(), sm.spds.layout.total_bits());
  EXPECT_TRUE(tr.spds.layout.find("xi(q(o))"));
  EXPECT_FALSE(tr.spds.layout.find("xi(q(finalvars))"));
  EXPECT_GE(tr.check, 0);
  EXPECT_GE(tr.done, 0);
  auto done = rules_from(tr.spds, tr.done);
  ASSERT_EQ(done.size(), 1u);
  EXPECT_EQ(done[0]->rhs, (std::vector<int>{tr.done}));
  auto check = rules_from(tr.spds, tr.check);
  EXPECT_GE(check.size(), 2u);
  tr.spds.validate();
}

TEST(Compose, ModeDispatch) {
  ModelSkeleton sk = skeleton("output(l, o)", io_policy(), "L");
  EXPECT_EQ(compose(sk, ComposeMode::storematch).mode, ComposeMode::storematch);
  EXPECT_EQ(compose(sk, ComposeMode::tr).mode, ComposeMode::tr);
  EXPECT_STREQ(to_string(ComposeMode::tr), "tr");
}
