#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace wherecheck;
using namespace wherecheck::testing;

TEST(Parser, NumbersSitesInPreorder) {
  Program p = parse_program("l := 0; if h then l := declass(h) else skip fi; output(l, o)");
  ASSERT_EQ(p.sites().size(), 5u);
  EXPECT_EQ(p.sites()[0].kind, SiteKind::plain);
  EXPECT_EQ(p.sites()[1].command->kind, Command::Kind::if_then_else);
  EXPECT_EQ(p.sites()[2].kind, SiteKind::declass);
  EXPECT_EQ(p.sites()[3].command->kind, Command::Kind::skip);
  EXPECT_EQ(p.sites()[4].kind, SiteKind::output);
  EXPECT_EQ(p.sites()[4].channel, "o");
}

TEST(Parser, SlotsSortedByName) {
  Program p = parse_program("z := a; input(b, c2); output(z, c1)");
  EXPECT_EQ(p.variables(), (std::vector<std::string>{"a", "b", "z"}));
  EXPECT_EQ(p.channels(), (std::vector<std::string>{"c1", "c2"}));
  EXPECT_EQ(p.variable_index("z"), 2);
  EXPECT_EQ(p.channel_index("c2"), 1);
}

TEST(Parser, RoundTrip) {
  const char* sources[] = {
      "skip",
      "l := h + 1 * 2",
      "l := (h + 1) * 2",
      "while n do output(l, o); n := n - 1 od",
      "if h == 1 & l != 0 | l < 2 then l := declass(h <= 3) else input(x, in) fi",
      "h1 := h2; h2 := 0; l1 := declass(h2); h2 := h1; l2 := h2",
  };
  for (const char* src : sources) {
    Program p = parse_program(src);
    Program q = parse_program(pretty_print(p.root()));
    EXPECT_TRUE(same_command(p.root(), q.root())) << src << " => " << pretty_print(p.root());
  }
}

TEST(Parser, Precedence) {
  ExprPtr e = parse_expression("a + b * c == d");
  ASSERT_EQ(e->kind, Expr::Kind::binary);
  EXPECT_EQ(e->op, BinOp::eq);
  EXPECT_EQ(e->lhs->op, BinOp::add);
  EXPECT_EQ(e->lhs->rhs->op, BinOp::mul);
}

TEST(Parser, TrailingSemicolonAndComments) {
  Program p = parse_program("# leading\nl := 1; # tail\nl := 2;\n");
  EXPECT_EQ(p.sites().size(), 2u);
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_program("l := 1;\nif h then skip fi");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
  EXPECT_THROW(parse_program(""), ParseError);
  EXPECT_THROW(parse_program("l := "), ParseError);
  EXPECT_THROW(parse_program("while h do skip"), ParseError);
  EXPECT_THROW(parse_program("output(l)"), ParseError);
  EXPECT_THROW(parse_program("l := 1 $"), ParseError);
}

TEST(Policy, ClosureAndLub) {
  Policy p = parse_policy("lattice: L < M, M < H, L < N, N < H\n");
  Level L = level(p, "L"), M = level(p, "M"), N = level(p, "N"), H = level(p, "H");
  EXPECT_TRUE(p.lattice.leq(L, H));
  EXPECT_TRUE(p.lattice.leq(M, M));
  EXPECT_FALSE(p.lattice.leq(M, N));
  EXPECT_EQ(*p.lattice.lub(M, N), H);
  EXPECT_EQ(*p.lattice.lub(L, M), M);
  EXPECT_EQ(*p.lattice.bottom(), L);
}

TEST(Policy, RejectsCyclesAndBadLines) {
  EXPECT_THROW(parse_policy("lattice: A < B, B < A\n"), ParseError);
  EXPECT_THROW(parse_policy("lattice: L < H\nvar x : Q\n"), ParseError);
  EXPECT_THROW(parse_policy("lattice: L < H\nchannel c : L sideways\n"), ParseError);
  EXPECT_THROW(parse_policy("lattice: L < H\nlattice: L < M\n"), ParseError);
}

TEST(Policy, ChannelDeclarations) {
  Policy p = io_policy();
  EXPECT_EQ(p.channel("in").direction, Direction::input);
  EXPECT_EQ(*p.channel("in").length, 2u);
  EXPECT_FALSE(p.channel("ih").length.has_value());
  EXPECT_EQ(p.channel("oh").level, level(p, "H"));
}

TEST(Frontend, DomainOfExpr) {
  Policy p = two_level();
  EXPECT_EQ(domain_of_expr(*parse_expression("l + 1"), p), level(p, "L"));
  EXPECT_EQ(domain_of_expr(*parse_expression("l + h1"), p), level(p, "H"));
  EXPECT_EQ(domain_of_expr(*parse_expression("3"), p), level(p, "L"));
}

TEST(Frontend, CheckProgram) {
  Policy p = io_policy();
  EXPECT_NO_THROW(check_program(parse_program("input(x, in); output(x, o)"), p));
  EXPECT_THROW(check_program(parse_program("output(x, in)"), p), PolicyError);
  EXPECT_THROW(check_program(parse_program("input(x, o)"), p), PolicyError);
  EXPECT_THROW(check_program(parse_program("y := 1"), p), PolicyError);
  EXPECT_THROW(check_program(parse_program("output(1, nowhere)"), p), PolicyError);
}

TEST(Frontend, IncomparableDeclassRejected) {
  Policy p = parse_policy("lattice: L < A, L < B\nvar a : A\nvar b : B\n");
  EXPECT_THROW(check_program(parse_program("a := declass(b)"), p), PolicyError);
}

TEST(Frontend, GatherDowngrades) {
  Policy p = two_level();
  Program prog = parse_program("l := declass(h); h1 := declass(h2); l1 := declass(l2)");
  Policy g = gather_downgrades(prog, p);
  EXPECT_EQ(g.downgrades.size(), 1u);
  EXPECT_TRUE(g.downgrades.count({level(p, "H"), level(p, "L")}));
  EXPECT_EQ(downgrade_sites(prog, p), (std::vector<bool>{true, false, false}));
  EXPECT_TRUE(is_real_downgrade(*prog.sites()[0].command, p));
  EXPECT_FALSE(is_real_downgrade(*prog.sites()[2].command, p));
}
