#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "qchr/engine.hpp"
#include "qchr/games/connect4.hpp"
#include "qchr/games/matrix.hpp"
#include "qchr/games/nim.hpp"
#include "qchr/games/oracle.hpp"
#include "qchr/parser.hpp"

namespace qchr::games {
namespace {

std::set<int> fibonacci_upto(int n) {
  std::set<int> out;
  for (int a = 1, b = 2; a <= n; b += a, a = b - a) out.insert(a);
  return out;
}

// ---------------------------------------------------------------- oracles

TEST(Oracle, NimLosesExactlyOnFibonacci) {
  auto fib = fibonacci_upto(200);
  for (int n = 2; n <= 200; ++n) EXPECT_EQ(oracle::nim_first_player_wins(n), !fib.count(n)) << n;
}

TEST(Oracle, SizeGuards) {
  EXPECT_THROW(oracle::nim_first_player_wins(5000), oracle::SizeGuardExceeded);
  EXPECT_THROW(oracle::connect4_first_player_wins(5, 5), oracle::SizeGuardExceeded);
}

TEST(Oracle, MatrixDepthOne) {
  EXPECT_TRUE(oracle::matrix_first_player_wins({{0}, {1}}, 1));
  EXPECT_FALSE(oracle::matrix_first_player_wins({{0}, {0}}, 1));
}

// -------------------------------------------------------------------- nim

TEST(Nim, EngineMatchesOracle) {
  NullHost host;
  Program p = nim_program();
  for (int n = 2; n <= 25; ++n) {
    auto r = solve(p, nim_goal(n), host);
    EXPECT_EQ(r.valid, oracle::nim_first_player_wins(n)) << n;
  }
}

TEST(Nim, FibonacciPositionsAreInvalid) {
  NullHost host;
  Program p = nim_program();
  for (int n : {2, 3, 5, 8, 13, 21}) EXPECT_FALSE(solve(p, nim_goal(n), host).valid) << n;
}

TEST(Nim, WitnessForFourIsOne) {
  NullHost host;
  auto r = solve(nim_program(), nim_goal(4), host, {.collect_witness = true});
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, 1);
}

TEST(Nim, SingleMatchIsInvalid) {
  // The first player may take at most n - 1 = 0 matches.
  NullHost host;
  EXPECT_FALSE(solve(nim_program(), nim_goal(1), host).valid);
  EXPECT_THROW(nim_goal(0), std::invalid_argument);
}

TEST(Nim, DslTextEqualsBuiltProgram) {
  Program dsl = parse_program(nim_program_text());
  NullHost host;
  for (int n = 2; n <= 15; ++n) {
    auto a = solve(dsl, nim_goal(n), host, {.collect_witness = true});
    auto b = solve(nim_program(), nim_goal(n), host, {.collect_witness = true});
    EXPECT_EQ(a.valid, b.valid);
    EXPECT_TRUE(a.stats.same_counts(b.stats));
    EXPECT_EQ(a.witness, b.witness);
  }
}

// ----------------------------------------------------------------- matrix

bool engine_matrix(const MatrixInstance& m) {
  MatrixHost host(m);
  return solve(matrix_program(), matrix_goal(m.depth), host).valid;
}

TEST(Matrix, AllOnesValidAllZerosInvalid) {
  for (int d = 1; d <= 8; ++d) {
    EXPECT_TRUE(engine_matrix(filled_matrix(d, 1))) << d;
    EXPECT_FALSE(engine_matrix(filled_matrix(d, 0))) << d;
  }
}

TEST(Matrix, DepthZeroIsTheSingleCell) {
  EXPECT_TRUE(engine_matrix(filled_matrix(0, 1)));
  EXPECT_FALSE(engine_matrix(filled_matrix(0, 0)));
}

TEST(Matrix, ComplementAtDepthOne) {
  // First player picks a row of a 2 x 1 matrix: wins iff some cell is 1.
  for (int bits = 0; bits < 4; ++bits) {
    MatrixInstance m = filled_matrix(1, 0);
    m.cells[0][0] = bits & 1;
    m.cells[1][0] = (bits >> 1) & 1;
    MatrixInstance flipped = m;
    for (auto& row : flipped.cells) row[0] ^= 1;
    EXPECT_EQ(engine_matrix(m), bits != 0);
    EXPECT_EQ(engine_matrix(flipped), bits != 3);
  }
}

TEST(Matrix, ExhaustiveDepthTwo) {
  for (int bits = 0; bits < 16; ++bits) {
    MatrixInstance m = filled_matrix(2, 0);
    for (int i = 0; i < 4; ++i) m.cells[i / 2][i % 2] = (bits >> i) & 1;
    EXPECT_EQ(engine_matrix(m), oracle::matrix_first_player_wins(m.cells, 2)) << bits;
  }
}

TEST(Matrix, RandomInstancesMatchOracle) {
  for (int d = 2; d <= 8; ++d) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      auto m = random_matrix(d, seed, 0.5);
      EXPECT_EQ(engine_matrix(m), oracle::matrix_first_player_wins(m.cells, d)) << d << " " << seed;
    }
  }
}

TEST(Matrix, HostRestoredAfterSolve) {
  auto m = random_matrix(6, 3, 0.5);
  MatrixHost host(m);
  auto before = host.digest();
  solve(matrix_program(), matrix_goal(6), host);
  EXPECT_EQ(host.digest(), before);
}

TEST(MatrixFile, FormatParseRoundTrip) {
  auto m = random_matrix(5, 11, 0.3);
  std::istringstream in(format_matrix(m));
  auto back = parse_matrix(in);
  EXPECT_EQ(back.depth, m.depth);
  EXPECT_EQ(back.cells, m.cells);
}

TEST(MatrixFile, ShapeMismatchRejected) {
  std::istringstream wrong_rows("2\n01\n");
  EXPECT_THROW(parse_matrix(wrong_rows), std::invalid_argument);
  std::istringstream wrong_cols("2\n011\n10\n");
  EXPECT_THROW(parse_matrix(wrong_cols), std::invalid_argument);
  std::istringstream bad_char("1\n0\n2\n");
  EXPECT_THROW(parse_matrix(bad_char), std::invalid_argument);
  std::istringstream no_depth("x\n");
  EXPECT_THROW(parse_matrix(no_depth), std::invalid_argument);
}

TEST(MatrixFile, RandomIsReproducible) {
  EXPECT_EQ(format_matrix(random_matrix(6, 42, 0.5)), format_matrix(random_matrix(6, 42, 0.5)));
  EXPECT_NE(format_matrix(random_matrix(6, 42, 0.5)), format_matrix(random_matrix(6, 43, 0.5)));
  EXPECT_EQ(random_matrix(4, 9, 1.0).cells, filled_matrix(4, 1).cells);
  EXPECT_EQ(random_matrix(4, 9, 0.0).cells, filled_matrix(4, 0).cells);
}

// ----------------------------------------------------------- connect four

bool engine_connect4(int rows, int cols) {
  Connect4Host host(rows, cols);
  auto r = solve(connect4_program(cols), connect4_goal(), host);
  EXPECT_EQ(host.moves(), 0);
  return r.valid;
}

TEST(Connect4, SmallBoardsMatchOracleAndKnownValues) {
  struct Case {
    int rows, cols;
    bool first_wins;
  };
  for (Case c : {Case{3, 3, true}, Case{4, 3, false}, Case{3, 4, false}, Case{4, 4, false}}) {
    EXPECT_EQ(oracle::connect4_first_player_wins(c.rows, c.cols), c.first_wins) << c.rows << "x" << c.cols;
    EXPECT_EQ(engine_connect4(c.rows, c.cols), c.first_wins) << c.rows << "x" << c.cols;
  }
}

TEST(Connect4, TinyBoardsAgree) {
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c) EXPECT_EQ(engine_connect4(r, c), oracle::connect4_first_player_wins(r, c)) << r << "x" << c;
}

TEST(Connect4, TablingAgrees) {
  Connect4Host host(3, 4);
  auto plain = solve(connect4_program(4), connect4_goal(), host);
  auto tabled = solve(connect4_program(4), connect4_goal(), host, {.tabling = true});
  EXPECT_EQ(plain.valid, tabled.valid);
  EXPECT_LE(tabled.stats.failures, plain.stats.failures);
}

}  // namespace
}  // namespace qchr::games
