#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchr/builtins.hpp"
#include "qchr/parser.hpp"

namespace qchr::games {

/// Connect-four board behind the coin/isFull/isWon built-ins. Columns are
/// numbered from 1. The player to move is given by the move parity.
class Connect4Host final : public HostState {
 public:
  Connect4Host(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("board needs at least one row and one column");
    cells_.assign(static_cast<std::size_t>(cols), std::string());
    registry_.register_effect("coin", 1, [this](std::span<const Term> a) { return coin(column(a[0])); });
    registry_.register_pure("isFull", 1, [this](std::span<const Term> a) { return Term::boolean(is_full(column(a[0]))); });
    registry_.register_pure("isWon", 1, [this](std::span<const Term> a) { return Term::boolean(is_won(column(a[0]))); });
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int moves() const { return static_cast<int>(history_.size()); }
  int height(int col) const { return static_cast<int>(cells_[index(col)].size()); }

  /// Drops a coin for the player to move. False if the column is full.
  bool coin(int col) {
    auto& stack = cells_[index(col)];
    if (static_cast<int>(stack.size()) >= rows_) return false;
    stack.push_back(history_.size() % 2 == 0 ? 'A' : 'B');
    history_.push_back(col);
    return true;
  }

  bool is_full(int col) const { return height(col) >= rows_; }

  /// Whether the top coin of `col` (the one just played there) completes a
  /// line of four for its owner.
  bool is_won(int col) const {
    const auto& stack = cells_[index(col)];
    if (stack.empty()) return false;
    const int c = col - 1;
    const int r = static_cast<int>(stack.size()) - 1;
    const char who = stack.back();
    static constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (const auto& d : kDirs) {
      int run = 1;
      for (int sign : {1, -1}) {
        int cc = c + sign * d[0];
        int rr = r + sign * d[1];
        while (at(cc, rr) == who) {
          ++run;
          cc += sign * d[0];
          rr += sign * d[1];
        }
      }
      if (run >= 4) return true;
    }
    return false;
  }

  Mark checkpoint() const override { return history_.size(); }

  void rollback(Mark mark) override {
    while (history_.size() > mark) {
      cells_[index(history_.back())].pop_back();
      history_.pop_back();
    }
  }

  std::string digest() const override {
    std::string out;
    for (const auto& s : cells_) {
      out += s;
      out += '|';
    }
    return out;
  }

 private:
  std::size_t index(int col) const {
    if (col < 1 || col > cols_) throw EvalError("column " + std::to_string(col) + " is off the board");
    return static_cast<std::size_t>(col - 1);
  }

  static int column(const Term& t) {
    if (!t.is_int()) throw EvalError("column must be an integer");
    return static_cast<int>(t.value);
  }

  char at(int c, int r) const {
    if (c < 0 || c >= cols_ || r < 0) return 0;
    const auto& s = cells_[static_cast<std::size_t>(c)];
    return r < static_cast<int>(s.size()) ? s[static_cast<std::size_t>(r)] : 0;
  }

  int rows_;
  int cols_;
  std::vector<std::string> cells_;  // bottom-up stacks of 'A'/'B'
  std::vector<int> history_;
};

/// cfe(W)/cfu(W): existential/universal player to move, W tells whether the
/// previous move won. ifRule skips full columns on the universal side.
inline std::string connect4_program_text(int cols) {
  const std::string nc = std::to_string(cols);
  return "if_top @ ifRule(top, _) <=> true.\n"
         "if_bot @ ifRule(bot, N) <=> coin(N), cfe(isWon(N)).\n"
         "u_top @ cfu(top) <=> true.\n"
         "u_bot @ cfu(bot) <=> forall It in [1.." + nc + "] | ifRule(isFull(It), It).\n"
         "e_top @ cfe(top) <=> false.\n"
         "e_bot @ cfe(bot) <=> exists It in [1.." + nc + "] | coin(It), cfu(isWon(It)).\n";
}

inline Program connect4_program(int cols) { return parse_program(connect4_program_text(cols)); }

inline Goal connect4_goal() {
  Goal g;
  g.atoms.push_back(BodyAtom::user("cfe", {Expr::constant(Term::bot())}));
  return g;
}

}  // namespace qchr::games
