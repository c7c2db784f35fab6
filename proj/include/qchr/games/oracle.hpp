#pragma once

// Exhaustive game-tree evaluation, kept free of any rule-engine code so it
// can serve as an independent reference.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qchr::oracle {

class SizeGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fibonacci Nim from `matches` matches: the first mover takes 1..n-1, then
/// each player takes 1..2k after the opponent took k. Taking the last match
/// wins. Returns whether the first mover can force a win.
inline bool nim_first_player_wins(int matches) {
  if (matches > 2000) throw SizeGuardExceeded("nim oracle limited to 2000 matches");
  if (matches < 1) return false;
  // wins[left][cap]: player to move with `left` matches, allowed 1..cap.
  std::map<std::pair<int, int>, bool> memo;
  auto wins = [&](auto&& self, int left, int cap) -> bool {
    if (left == 0) return false;  // opponent took the last one
    auto key = std::make_pair(left, cap);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool result = false;
    for (int take = 1; take <= cap && take <= left && !result; ++take) {
      if (!self(self, left - take, 2 * take)) result = true;
    }
    memo[key] = result;
    return result;
  };
  return wins(wins, matches, matches - 1);
}

/// Matrix cutting game. The first player keeps the top or bottom half of
/// the rows, the second the left or right half of the columns, alternately,
/// for `depth` moves in total. The first player wins if the final cell is 1.
inline bool matrix_first_player_wins(const std::vector<std::vector<std::uint8_t>>& m, int depth) {
  if (depth > 24) throw SizeGuardExceeded("matrix oracle limited to depth 24");
  auto eval = [&](auto&& self, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                  int moves_left, bool first_to_move) -> bool {
    if (moves_left == 0) return m[r0][c0] == 1;
    bool any = false;
    bool all = true;
    for (int half = 0; half < 2; ++half) {
      bool v;
      if (first_to_move) {
        std::size_t mid = (r0 + r1) / 2;
        v = half == 0 ? self(self, r0, mid, c0, c1, moves_left - 1, false)
                      : self(self, mid, r1, c0, c1, moves_left - 1, false);
      } else {
        std::size_t mid = (c0 + c1) / 2;
        v = half == 0 ? self(self, r0, r1, c0, mid, moves_left - 1, true)
                      : self(self, r0, r1, mid, c1, moves_left - 1, true);
      }
      any = any || v;
      all = all && v;
    }
    return first_to_move ? any : all;
  };
  if (m.empty() || m.front().empty()) throw std::invalid_argument("empty matrix");
  return eval(eval, 0, m.size(), 0, m.front().size(), depth, true);
}

/// Connect four on a rows x cols grid. Players alternate dropping coins; a
/// player completing four in a row wins at once, and a player who has no
/// legal move (board full) loses. Returns whether the first player wins.
inline bool connect4_first_player_wins(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("empty board");
  if (rows * cols > 20) throw SizeGuardExceeded("connect-four oracle limited to 20 cells");

  // grid[r * cols + c], row 0 at the bottom; '.' empty.
  std::string grid(static_cast<std::size_t>(rows * cols), '.');
  std::unordered_map<std::string, bool> memo;

  auto four_anywhere = [&](char who) {
    auto cell = [&](int r, int c) { return grid[static_cast<std::size_t>(r * cols + c)]; };
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (cell(r, c) != who) continue;
        const int dr[4] = {0, 1, 1, 1};
        const int dc[4] = {1, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          int k = 1;
          while (k < 4) {
            int rr = r + dr[d] * k;
            int cc = c + dc[d] * k;
            if (rr < 0 || rr >= rows || cc < 0 || cc >= cols || cell(rr, cc) != who) break;
            ++k;
          }
          if (k == 4) return true;
        }
      }
    return false;
  };

  // Does the side to move win from here?
  auto to_move_wins = [&](auto&& self, char me) -> bool {
    std::string key = grid + me;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    char other = me == 'x' ? 'o' : 'x';
    bool result = false;
    for (int c = 0; c < cols && !result; ++c) {
      int r = 0;
      while (r < rows && grid[static_cast<std::size_t>(r * cols + c)] != '.') ++r;
      if (r == rows) continue;
      grid[static_cast<std::size_t>(r * cols + c)] = me;
      if (four_anywhere(me) || !self(self, other)) result = true;
      grid[static_cast<std::size_t>(r * cols + c)] = '.';
    }
    memo.emplace(std::move(key), result);
    return result;
  };
  return to_move_wins(to_move_wins, 'x');
}

}  // namespace qchr::oracle
