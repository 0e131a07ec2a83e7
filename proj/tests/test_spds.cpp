#include <gtest/gtest.h>

#include <random>

#include "wherecheck/spds.hpp"

using namespace wherecheck;

namespace {

struct Small {
  Layout layout;
  int a, b, c;
  Small() {
    a = layout.add("a", 2);
    b = layout.add("b", 2);
    c = layout.add("c", 1);
  }
  std::vector<Valuation> all() const {
    std::vector<Valuation> out;
    for (std::uint64_t x = 0; x < (1u << layout.total_bits()); ++x) out.push_back(unpack(layout, x));
    return out;
  }
};

bool same_relation(const Small& s, const Relation& r1, const Relation& r2) {
  for (const auto& cur : s.all())
    for (const auto& nxt : s.all())
      if (related(s.layout, r1, cur, nxt) != related(s.layout, r2, cur, nxt)) return false;
  return true;
}

} // namespace

TEST(Layout, OffsetsAndLookup) {
  Small s;
  EXPECT_EQ(s.layout.offset(s.b), 2u);
  EXPECT_EQ(s.layout.total_bits(), 5u);
  EXPECT_EQ(s.layout.at("c"), s.c);
  EXPECT_FALSE(s.layout.find("zz"));
  EXPECT_THROW(s.layout.at("zz"), std::out_of_range);
  EXPECT_THROW(s.layout.add("a", 1), std::logic_error);
}

TEST(Layout, PackRoundTrip) {
  Small s;
  for (const auto& v : s.all()) EXPECT_EQ(unpack(s.layout, pack(s.layout, v)), v);
  EXPECT_EQ(pack(s.layout, {1, 2, 1}), 1u | (2u << 2) | (1u << 4));
}

TEST(Rt, UnionIsConjunction) {
  Small s;
  std::mt19937 rng(5);
  for (int t = 0; t < 20; ++t) {
    std::set<int> A, B;
    for (int g = 0; g < 3; ++g) {
      if (rng() % 2) A.insert(g);
      if (rng() % 2) B.insert(g);
    }
    std::set<int> U = A;
    U.insert(B.begin(), B.end());
    EXPECT_TRUE(same_relation(s, rt(U), conjoin(rt(A), rt(B))));
  }
}

TEST(Rt, AllIsIdentityEmptyIsUniversal) {
  Small s;
  for (const auto& cur : s.all())
    for (const auto& nxt : s.all()) {
      EXPECT_EQ(related(s.layout, rt({s.a, s.b, s.c}), cur, nxt), cur == nxt);
      EXPECT_TRUE(related(s.layout, rt({}), cur, nxt));
    }
}

TEST(Successors, AssignAndFrame) {
  Small s;
  Relation r;
  r.assign(s.a, MExpr::binary(BinOp::add, MExpr::global(s.layout, s.b), MExpr::constant(1, 2))).keep({s.b});
  auto next = successors(s.layout, r, {0, 3, 1});
  ASSERT_EQ(next.size(), 2u); // c is havocked
  EXPECT_EQ(next[0], (Valuation{0, 3, 0}));
  EXPECT_EQ(next[1], (Valuation{0, 3, 1}));
}

TEST(Successors, GuardBlocks) {
  Small s;
  Relation r;
  r.guard(m_lt(MExpr::global(s.layout, s.a), MExpr::global(s.layout, s.b))).keep({s.a, s.b, s.c});
  EXPECT_TRUE(successors(s.layout, r, {2, 1, 0}).empty());
  EXPECT_EQ(successors(s.layout, r, {1, 2, 0}), (std::vector<Valuation>{{1, 2, 0}}));
}

TEST(Successors, StoreWritesOneCell) {
  Layout L;
  int i = L.add("i", 1), x0 = L.add("x0", 2), x1 = L.add("x1", 2);
  int g = L.add_group("X", {x0, x1});
  Relation r;
  r.store(g, MExpr::global(L, i), MExpr::constant(3, 2)).keep({i});
  EXPECT_EQ(successors(L, r, {1, 0, 0}), (std::vector<Valuation>{{1, 0, 3}}));
  EXPECT_EQ(successors(L, r, {0, 2, 2}), (std::vector<Valuation>{{0, 3, 2}}));
  EXPECT_EQ(eval(L, *MExpr::read(L, g, MExpr::global(L, i)), {1, 1, 2}), 2u);
}

TEST(Successors, ComparisonsAreOneBit) {
  Small s;
  auto e = m_eq(MExpr::global(s.layout, s.a), MExpr::global(s.layout, s.b));
  EXPECT_EQ(e->width, 1u);
  auto sum = MExpr::binary(BinOp::add, MExpr::global(s.layout, s.a), MExpr::global(s.layout, s.c));
  EXPECT_EQ(sum->width, 2u);
  EXPECT_EQ(eval(s.layout, *sum, {3, 0, 1}), 0u);
}

TEST(Spds, StackSuccessorsAndValidate) {
  Spds p;
  p.layout.add("a", 1);
  int s0 = p.symbol("s0"), s1 = p.symbol("s1"), s2 = p.symbol("s2");
  p.start = s0;
  Relation keep = rt({0});
  p.rules.push_back({s0, {s1, s2}, keep, {}});
  p.rules.push_back({s1, {}, keep, {}});
  p.validate();
  auto step1 = successors(p, {{{0}, {s0}}});
  ASSERT_EQ(step1.size(), 1u);
  EXPECT_EQ(step1.begin()->stack, (std::vector<int>{s1, s2}));
  auto step2 = successors(p, step1);
  EXPECT_EQ(step2.begin()->stack, (std::vector<int>{s2}));
  EXPECT_EQ(dump_spds(p), "s0 -> s1 s2 [rt(G)]\ns1 -> eps [rt(G)]\n");

  p.rules.push_back({s0, {s0, s1, s2}, keep, {}});
  EXPECT_THROW(p.validate(), std::logic_error);
}

TEST(Spds, DumpListsHavockedGlobals) {
  Spds p;
  int a = p.layout.add("a", 1);
  p.layout.add("b", 1);
  int s = p.symbol("s");
  p.start = s;
  Relation r;
  r.assign(a, MExpr::constant(1, 1));
  p.rules.push_back({s, {s}, r, {}});
  EXPECT_EQ(dump_spds(p), "s -> s [a' = 1 && rt(G \\ {a, b})]\n");
}
