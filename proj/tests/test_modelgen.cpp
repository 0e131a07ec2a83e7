#include <gtest/gtest.h>

#include <bit>

#include "test_util.hpp"
#include "wherecheck/modelgen.hpp"

using namespace wherecheck;
using namespace wherecheck::testing;

namespace {

ModelSkeleton skeleton(const std::string& src, const Policy& pol, const std::string& lvl, unsigned bits,
                       std::size_t cap) {
  Program p = parse_program(src);
  Policy g = gather_downgrades(p, pol);
  return build_model(p, g, level(g, lvl), {bits, cap});
}

const Rule* rule_from(const Spds& s, const std::string& lhs) {
  for (const auto& r : s.rules)
    if (s.symbol_name(r.lhs) == lhs) return &r;
  return nullptr;
}

} // namespace

TEST(Modelgen, GlobalCountForDeclassThenLeak) {
  ModelSkeleton sk = skeleton("l := declass(h); l := h", two_level(), "L", 3, 8);
  BitBudget b = count_globals(sk);
  EXPECT_EQ(b.variables, 6u);
  EXPECT_EQ(b.tmp, 3u);
  EXPECT_EQ(b.declass, 3u);
  EXPECT_EQ(b.total(), 17u);
  EXPECT_EQ(sk.spds.layout.total_bits(), 17u);
}

TEST(Modelgen, SkipHasOnlyCounterBits) {
  Policy pol = parse_policy("lattice: L < H\n");
  ModelSkeleton sk = skeleton("skip", pol, "L", 3, 8);
  BitBudget b = count_globals(sk);
  EXPECT_EQ(b.variables, 0u);
  EXPECT_EQ(b.tmp, 0u);
  EXPECT_EQ(b.declass, 0u);
  EXPECT_EQ(b.total(), sk.spds.layout.total_bits());
  EXPECT_LE(b.channels, 1u);
}

TEST(Modelgen, DoublingCapacityGrowsCells) {
  ModelSkeleton a = skeleton("output(l, o)", io_policy(), "L", 2, 4);
  ModelSkeleton b = skeleton("output(l, o)", io_policy(), "L", 2, 8);
  const unsigned counter_a = std::bit_width(std::size_t{5}), counter_b = std::bit_width(std::size_t{9});
  EXPECT_EQ(count_globals(b).channels - count_globals(a).channels, 4u * 2u + (counter_b - counter_a));
}

TEST(Modelgen, HighInputHavocsTarget) {
  ModelSkeleton sk = skeleton("input(h, ih)", io_policy(), "L", 2, 4);
  const Rule* r = rule_from(sk.spds, "g0");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->meta.kind, RuleKind::input_high);
  const int h = sk.var_global[0];
  EXPECT_FALSE(r->rel.retain.count(h));
  Valuation v(sk.spds.layout.globals().size(), 0);
  auto next = successors(sk.spds.layout, r->rel, v);
  std::set<Value> hs;
  for (const auto& n : next) hs.insert(n[static_cast<std::size_t>(h)]);
  EXPECT_EQ(hs.size(), 4u);
}

TEST(Modelgen, LowInputReadsCell) {
  ModelSkeleton sk = skeleton("input(x, in)", io_policy(), "L", 2, 4);
  ASSERT_EQ(sk.inputs.size(), 1u);
  EXPECT_EQ(sk.inputs[0].length, 2u); // declared length
  const Rule* r = rule_from(sk.spds, "g0");
  EXPECT_EQ(r->meta.kind, RuleKind::input_low);
}

TEST(Modelgen, HighChannelsInvisibleAtLow) {
  ModelSkeleton sk = skeleton("output(h, oh); output(l, o)", io_policy(), "L", 2, 4);
  ASSERT_EQ(sk.outputs.size(), 2u);
  EXPECT_EQ(sk.outputs[0].name, "o");
  EXPECT_EQ(sk.outputs[1].name, kFinalChannel);
  EXPECT_EQ(sk.outputs[1].capacity, 1u); // one low variable
  EXPECT_EQ(rule_from(sk.spds, "g0")->meta.kind, RuleKind::output_high);

  ModelSkeleton hi = skeleton("output(h, oh); output(l, o)", io_policy(), "H", 2, 4);
  EXPECT_EQ(hi.outputs.size(), 3u);
}

TEST(Modelgen, DeclassPushAndPop) {
  ModelSkeleton sk = skeleton("l := declass(h)", two_level(), "L", 1, 2);
  ASSERT_EQ(sk.declass_sites.size(), 1u);
  const Rule* push = rule_from(sk.spds, "g0");
  EXPECT_EQ(push->meta.kind, RuleKind::declass_push);
  EXPECT_EQ(push->rhs.front(), sk.declass_sites[0].entry);
  const Rule* pop = rule_from(sk.spds, "declass_exit_g0");
  ASSERT_NE(pop, nullptr);
  EXPECT_TRUE(pop->rhs.empty());
  EXPECT_EQ(sk.rho[0], 0);
}

TEST(Modelgen, NonDowngradingDeclassIsPlain) {
  ModelSkeleton sk = skeleton("h1 := declass(h2)", two_level(), "L", 1, 2);
  EXPECT_TRUE(sk.declass_sites.empty());
  EXPECT_EQ(sk.rho[0], -1);
}

TEST(Modelgen, LastTransEndsTheProgram) {
  ModelSkeleton sk = skeleton("l := h", two_level(), "L", 1, 2);
  const Rule& last = sk.spds.rules.at(sk.last_rule());
  EXPECT_EQ(last.meta.kind, RuleKind::last);
  EXPECT_TRUE(last.rhs.empty());
  EXPECT_EQ(last.lhs, sk.final_symbol);
}

TEST(Modelgen, SingleRunModelExecutesProgram) {
  Program p = parse_program("n := 2; l := 0; while n do l := l + 1; output(l, o); n := n - 1 od");
  Policy g = gather_downgrades(p, io_policy());
  ModelSkeleton sk = build_model(p, g, level(g, "L"), {2, 4});
  Spds run = single_run_model(sk);
  Valuation v(run.layout.globals().size(), 0);
  std::set<StackState> frontier{{v, {run.start}}};
  std::optional<Valuation> final_v;
  for (int i = 0; i < 200 && !frontier.empty(); ++i) {
    for (const auto& s : frontier)
      if (s.stack.empty()) final_v = s.valuation;
    frontier = successors(run, frontier);
  }
  ASSERT_TRUE(final_v);
  const auto& o = sk.outputs[0];
  const auto& cells = run.layout.group(o.group).cells;
  EXPECT_EQ((*final_v)[static_cast<std::size_t>(o.counter)], 2u);
  EXPECT_EQ((*final_v)[static_cast<std::size_t>(cells[0])], 1u);
  EXPECT_EQ((*final_v)[static_cast<std::size_t>(cells[1])], 2u);
}

TEST(Modelgen, RejectsReservedChannelName) {
  Policy pol = parse_policy("lattice: L < H\nvar l : L\nchannel finalvars : L output\n");
  Program p = parse_program("output(l, finalvars)");
  EXPECT_ANY_THROW(build_model(p, pol, level(pol, "L"), {1, 2}));
}

TEST(Modelgen, SiteTableNamesSites) {
  Program p = parse_program("l := declass(h)");
  Policy g = gather_downgrades(p, two_level());
  ModelSkeleton sk = build_model(p, g, level(g, "L"), {1, 2});
  const std::string t = site_table(p, g, sk);
  EXPECT_NE(t.find("# site 0 declass g0 rho=0"), std::string::npos) << t;
}
