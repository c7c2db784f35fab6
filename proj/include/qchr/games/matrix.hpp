#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchr/builtins.hpp"
#include "qchr/parser.hpp"

namespace qchr::games {

/// 0/1 matrix for the cutting game. For d moves the shape is
/// 2^ceil(d/2) rows by 2^floor(d/2) columns.
struct MatrixInstance {
  int depth = 0;
  std::vector<std::vector<std::uint8_t>> cells;

  std::size_t rows() const { return cells.size(); }
  std::size_t cols() const { return cells.empty() ? 0 : cells.front().size(); }
};

inline std::size_t matrix_rows_for(int depth) { return std::size_t{1} << ((depth + 1) / 2); }
inline std::size_t matrix_cols_for(int depth) { return std::size_t{1} << (depth / 2); }

inline void validate(const MatrixInstance& m) {
  if (m.depth < 0 || m.depth > 40) throw std::invalid_argument("matrix depth out of range");
  if (m.rows() != matrix_rows_for(m.depth)) throw std::invalid_argument("matrix row count does not match depth");
  for (const auto& row : m.cells) {
    if (row.size() != matrix_cols_for(m.depth))
      throw std::invalid_argument("matrix column count does not match depth");
    for (auto c : row)
      if (c > 1) throw std::invalid_argument("matrix cells must be 0 or 1");
  }
}

inline MatrixInstance filled_matrix(int depth, std::uint8_t value) {
  MatrixInstance m{depth, {}};
  m.cells.assign(matrix_rows_for(depth), std::vector<std::uint8_t>(matrix_cols_for(depth), value));
  return m;
}

/// Seeded random instance; a cell is 1 with probability `density`.
/// Uses the raw 64-bit engine output so files are identical across
/// standard libraries.
inline MatrixInstance random_matrix(int depth, std::uint64_t seed, double density) {
  if (density < 0.0 || density > 1.0) throw std::invalid_argument("density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  MatrixInstance m = filled_matrix(depth, 0);
  for (auto& row : m.cells)
    for (auto& c : row) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      c = u < density ? 1 : 0;
    }
  return m;
}

/// Text form: first line the depth, then one line of 0/1 characters per row.
inline std::string format_matrix(const MatrixInstance& m) {
  std::string out = std::to_string(m.depth) + "\n";
  for (const auto& row : m.cells) {
    for (auto c : row) out += c ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline MatrixInstance parse_matrix(std::istream& in) {
  MatrixInstance m;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("matrix file is empty");
  try {
    m.depth = std::stoi(line);
  } catch (const std::exception&) {
    throw std::invalid_argument("matrix file must start with the depth");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    for (char ch : line) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("matrix rows may only contain 0 and 1");
      row.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    m.cells.push_back(std::move(row));
  }
  validate(m);
  return m;
}

inline MatrixInstance load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file " + path);
  return parse_matrix(in);
}

/// Host for the matrix game: the live submatrix [row_lo, row_hi) x
/// [col_lo, col_hi). updateCornerE halves rows (0 top, 1 bottom),
/// updateCornerU halves columns (0 left, 1 right), cell() reads the
/// upper-left corner.
class MatrixHost final : public HostState {
 public:
  explicit MatrixHost(MatrixInstance m) : m_(std::move(m)) {
    validate(m_);
    current_ = {0, m_.rows(), 0, m_.cols()};
    registry_.register_effect("updateCornerE", 1, [this](std::span<const Term> a) { return cut(a[0], true); });
    registry_.register_effect("updateCornerU", 1, [this](std::span<const Term> a) { return cut(a[0], false); });
    registry_.register_pure("cell", 0, [this](std::span<const Term>) {
      return Term::integer(m_.cells[current_.row_lo][current_.col_lo]);
    });
  }

  Mark checkpoint() const override { return undo_.size(); }

  void rollback(Mark mark) override {
    while (undo_.size() > mark) {
      current_ = undo_.back();
      undo_.pop_back();
    }
  }

  std::string digest() const override {
    std::ostringstream os;
    os << current_.row_lo << ':' << current_.row_hi << ':' << current_.col_lo << ':' << current_.col_hi;
    return os.str();
  }

  const MatrixInstance& instance() const { return m_; }

 private:
  struct Window {
    std::size_t row_lo, row_hi, col_lo, col_hi;
  };

  bool cut(Term which, bool rows) {
    if (!which.is_int() || which.value < 0 || which.value > 1) return false;
    std::size_t& lo = rows ? current_.row_lo : current_.col_lo;
    std::size_t& hi = rows ? current_.row_hi : current_.col_hi;
    if (hi - lo < 2) return false;
    undo_.push_back(current_);
    std::size_t mid = lo + (hi - lo) / 2;
    if (which.value == 0) {
      hi = mid;
    } else {
      lo = mid;
    }
    return true;
  }

  MatrixInstance m_;
  Window current_{};
  std::vector<Window> undo_;
};

/// Existential player cuts rows, universal player cuts columns; at depth 0
/// the remaining cell must be 1. u0 covers odd depths, where the
/// existential player makes the last cut.
inline const char* matrix_program_text() {
  return "u0 @ mgu(0) <=> cell() = 1.\n"
         "u @ mgu(D) <=> forall It in [0..1] | updateCornerU(It), mge(D - 1).\n"
         "e0 @ mge(0) <=> cell() = 1.\n"
         "e @ mge(D) <=> exists It in [0..1] | updateCornerE(It), mgu(D - 1).\n";
}

inline Program matrix_program() { return parse_program(matrix_program_text()); }

inline Goal matrix_goal(int depth) {
  Goal g;
  g.atoms.push_back(BodyAtom::user("mge", {Expr::integer(depth)}));
  return g;
}

}  // namespace qchr::games
