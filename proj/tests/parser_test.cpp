#include <gtest/gtest.h>

#include <random>
#include <string>

#include "qchr/games/connect4.hpp"
#include "qchr/games/matrix.hpp"
#include "qchr/games/nim.hpp"
#include "qchr/parser.hpp"

namespace qchr {
namespace {

TEST(ParseProgram, PropagationRule) {
  Program p = parse_program("l @ nimfibo(R) ==> nimfiboe(R-1,R).");
  ASSERT_EQ(p.rules.size(), 1u);
  const Rule& r = p.rules[0];
  EXPECT_EQ(r.name, "l");
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_TRUE(r.deleted.empty());
  EXPECT_EQ(r.kept[0].functor, intern("nimfibo"));
  EXPECT_FALSE(r.quantifier);
  ASSERT_EQ(r.body.size(), 1u);
  EXPECT_EQ(r.body[0].functor, intern("nimfiboe"));
  EXPECT_EQ(r.body[0].args[0], Expr::variable(0) - Expr::integer(1));
}

TEST(ParseProgram, ExistentialSimplificationWithLowercaseIterator) {
  Program p = parse_program("e @ nimfiboe(N,R) <=> exists it in [1..min(N,R)] | nimfibou(2*it,R-it).");
  const Rule& r = p.rules[0];
  EXPECT_TRUE(r.kept.empty());
  ASSERT_EQ(r.deleted.size(), 1u);
  ASSERT_TRUE(r.quantifier);
  EXPECT_EQ(r.quantifier->kind, QuantKind::Exists);
  EXPECT_EQ(r.quantifier->lower, Expr::integer(1));
  EXPECT_EQ(r.quantifier->upper, min_expr(Expr::variable(0), Expr::variable(1)));
  int it = r.quantifier->iterator;
  EXPECT_EQ(r.slots[static_cast<std::size_t>(it)], "it");
  EXPECT_EQ(r.body[0].args[0], Expr::integer(2) * Expr::variable(it));
  EXPECT_EQ(r.body[0].args[1], Expr::variable(1) - Expr::variable(it));
}

TEST(ParseProgram, SimpagationWithGuard) {
  Program p = parse_program("s @ a(X), b \\ c(Y) <=> X < Y, X != 0 | d(X + Y).");
  const Rule& r = p.rules[0];
  EXPECT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.deleted.size(), 1u);
  ASSERT_EQ(r.guard.size(), 2u);
  EXPECT_EQ(r.guard[0].op, CmpOp::Lt);
  EXPECT_EQ(r.guard[1].op, CmpOp::Ne);
}

TEST(ParseProgram, EmptyHeadIsSyntaxError) {
  try {
    parse_program("x @ <=> true.");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 5);
    EXPECT_NE(std::string(e.what()).find("empty head"), std::string::npos);
  }
}

TEST(ParseProgram, DuplicateRuleName) {
  EXPECT_THROW(parse_program("r @ a <=> true.\nr @ b <=> true."), ParseError);
}

TEST(ParseProgram, ErrorReportsLine) {
  try {
    parse_program("r @ a <=> true.\n\ns @ b <=> c(.\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ParseProgram, RejectsMalformedInput) {
  EXPECT_THROW(parse_program(""), ParseError);
  EXPECT_THROW(parse_program("r @ a ==> b"), ParseError);                 // missing '.'
  EXPECT_THROW(parse_program("r @ a \\ b ==> true."), ParseError);        // propagation cannot delete
  EXPECT_THROW(parse_program("r @ a(X+1) <=> true."), ParseError);        // head args
  EXPECT_THROW(parse_program("r @ a <=> X < 1."), ParseError);            // comparison in body
  EXPECT_THROW(parse_program("r @ a <=> b | c."), ParseError);            // guard item not comparison
  EXPECT_THROW(parse_program("r @ a <=> b(_)."), ParseError);             // anonymous in body
  EXPECT_THROW(parse_program("r @ a <=> b # c."), ParseError);            // bad character
}

TEST(ParseProgram, CommentsAndSymbols) {
  Program p = parse_program("% comment\nif_top @ ifRule(top, _) <=> true. % trailing\n");
  const Rule& r = p.rules[0];
  EXPECT_EQ(r.deleted[0].args[0], HeadArg::constant(Term::top()));
  EXPECT_EQ(r.deleted[0].args[1], HeadArg::anonymous());
  EXPECT_EQ(r.body[0].kind, AtomKind::True);
}

TEST(ParseProgram, NimPresetHasRulesLEUInOrder) {
  Program p = parse_program(games::nim_program_text());
  ASSERT_EQ(p.rules.size(), 3u);
  EXPECT_EQ(p.rules[0].name, "l");
  EXPECT_EQ(p.rules[1].name, "e");
  EXPECT_EQ(p.rules[2].name, "u");
  EXPECT_EQ(p, games::nim_program());
}

TEST(ParseGoal, SingleAtom) {
  Goal g = parse_goal("nimfibo(4)");
  ASSERT_EQ(g.atoms.size(), 1u);
  EXPECT_EQ(g.atoms[0].functor, intern("nimfibo"));
  EXPECT_EQ(g.atoms[0].args[0], Expr::integer(4));
}

TEST(ParseGoal, ZeroArityAtomsInOrder) {
  Goal g = parse_goal("b,c,a");
  ASSERT_EQ(g.atoms.size(), 3u);
  EXPECT_EQ(g.atoms[0].functor, intern("b"));
  EXPECT_EQ(g.atoms[1].functor, intern("c"));
  EXPECT_EQ(g.atoms[2].functor, intern("a"));
  for (const auto& a : g.atoms) EXPECT_TRUE(a.args.empty());
}

TEST(ParseGoal, Errors) {
  EXPECT_THROW(parse_goal("nimfibo("), ParseError);
  EXPECT_THROW(parse_goal("p(X)"), ParseError);  // X never equated
  EXPECT_THROW(parse_goal(""), ParseError);
  EXPECT_NO_THROW(parse_goal("X = 3, p(X)"));
}

void expect_round_trip(const Program& p) {
  std::string text = to_string(p);
  Program again = parse_program(text);
  EXPECT_EQ(again, p) << text;
  EXPECT_EQ(to_string(again), text);
}

TEST(RoundTrip, ShippedPresets) {
  expect_round_trip(games::nim_program());
  expect_round_trip(games::matrix_program());
  expect_round_trip(games::connect4_program(4));
}

/// Grammar-driven generator of valid programs.
class ProgramFuzzer {
 public:
  explicit ProgramFuzzer(unsigned seed) : rng_(seed) {}

  std::string program() {
    std::string out;
    int rules = 1 + pick(4);
    for (int i = 0; i < rules; ++i) out += rule(i) + "\n";
    return out;
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

  std::string var() { return std::string(1, static_cast<char>('A' + pick(4))); }

  std::string constant() {
    switch (pick(3)) {
      case 0: return std::to_string(pick(20));
      case 1: return "-" + std::to_string(1 + pick(9));
      default: return pick(2) ? "top" : "sym" + std::to_string(pick(3));
    }
  }

  std::string head_atom() {
    std::string out = "h" + std::to_string(pick(3));
    int n = pick(3);
    if (n == 0) return out;
    out += "(";
    for (int i = 0; i < n; ++i) {
      if (i) out += ", ";
      int k = pick(4);
      out += k == 0 ? constant() : k == 1 ? "_" : var();
    }
    return out + ")";
  }

  std::string expr(int depth) {
    if (depth == 0 || pick(3) == 0) return pick(2) ? var() : std::to_string(pick(10));
    switch (pick(6)) {
      case 0: return expr(depth - 1) + " + " + expr(depth - 1);
      case 1: return expr(depth - 1) + " - " + expr(depth - 1);
      case 2: return expr(depth - 1) + "*" + expr(depth - 1);
      case 3: return "min(" + expr(depth - 1) + ", " + expr(depth - 1) + ")";
      case 4: return "(" + expr(depth - 1) + ")";
      default: return "f(" + expr(depth - 1) + ")";
    }
  }

  std::string body_atom() {
    switch (pick(5)) {
      case 0: return expr(2) + " = " + expr(1);
      case 1: return "b" + std::to_string(pick(3));
      default: return "b" + std::to_string(pick(3)) + "(" + expr(2) + ", " + expr(1) + ")";
    }
  }

  std::string rule(int index) {
    std::string out = "r" + std::to_string(index) + " @ ";
    auto heads = [&] {
      std::string s = head_atom();
      for (int i = pick(2); i > 0; --i) s += ", " + head_atom();
      return s;
    };
    switch (pick(3)) {
      case 0: out += heads() + " ==> "; break;
      case 1: out += heads() + " <=> "; break;
      default: out += heads() + " \\ " + heads() + " <=> "; break;
    }
    if (pick(2)) out += (pick(2) ? "exists" : "forall") + std::string(" It in [") + expr(1) + ".." + expr(2) + "] | ";
    if (pick(2)) {
      const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
      out += expr(1) + " " + ops[pick(6)] + " " + expr(1) + " | ";
    }
    switch (pick(4)) {
      case 0: out += "true"; break;
      case 1: out += "false"; break;
      default:
        out += body_atom();
        for (int i = pick(3); i > 0; --i) out += ", " + body_atom();
    }
    return out + ".";
  }

  std::mt19937 rng_;
};

TEST(RoundTrip, GrammarFuzzedPrograms) {
  for (unsigned seed = 0; seed < 500; ++seed) {
    ProgramFuzzer fuzz(seed);
    std::string text = fuzz.program();
    Program p;
    ASSERT_NO_THROW(p = parse_program(text)) << text;
    expect_round_trip(p);
  }
}

TEST(RoundTrip, Goals) {
  for (const char* text : {"nimfibo(4)", "b, c, a", "X = 3, p(X)", "cfe(bot)", "p(1 - -2, min(3, 4)*2)"}) {
    Goal g = parse_goal(text);
    EXPECT_EQ(parse_goal(to_string(g)), g) << text;
  }
}

}  // namespace
}  // namespace qchr
