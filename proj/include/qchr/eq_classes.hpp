#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qchr/term.hpp"

namespace qchr {

/// Equivalence classes over variables, each carrying at most one constant.
///
/// Union by rank without path compression so that every union can be undone
/// from the trail in O(1).
class EqClasses {
 public:
  using Mark = std::size_t;

  VarId fresh() {
    auto id = static_cast<VarId>(parent_.size());
    parent_.push_back(id);
    rank_.push_back(0);
    constant_.emplace_back();
    return id;
  }

  std::size_t variable_count() const { return parent_.size(); }

  VarId find(VarId v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }

  /// Constant of the class when it has one, otherwise the root variable.
  Term resolve(Term t) const {
    if (!t.is_var()) return t;
    VarId root = find(t.var_id());
    if (constant_[root]) return *constant_[root];
    return Term::var(root);
  }

  bool same(Term x, Term y) const { return resolve(x) == resolve(y); }

  /// Merges the classes of x and y. Returns false, leaving the classes
  /// untouched, when both already hold distinct constants.
  bool unite(Term x, Term y) {
    Term rx = resolve(x);
    Term ry = resolve(y);
    if (rx == ry) return true;
    if (rx.is_constant() && ry.is_constant()) return false;
    if (rx.is_constant()) std::swap(rx, ry);
    VarId a = rx.var_id();
    if (ry.is_constant()) {
      trail_.push_back({kNone, a, rank_[a], constant_[a]});
      constant_[a] = ry;
      return true;
    }
    VarId b = ry.var_id();
    if (rank_[a] < rank_[b]) std::swap(a, b);
    // b hangs below a; a inherits nothing since neither holds a constant here
    trail_.push_back({b, a, rank_[a], constant_[a]});
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

  Mark checkpoint() const { return trail_.size(); }

  void rollback(Mark mark) {
    while (trail_.size() > mark) {
      const Undo& u = trail_.back();
      if (u.child != kNone) parent_[u.child] = u.child;
      rank_[u.root] = u.old_rank;
      constant_[u.root] = u.old_constant;
      trail_.pop_back();
    }
  }

  /// Canonical partition of the given variables: for each one, the smallest
  /// variable id in its class (or its constant).
  std::vector<Term> partition(const std::vector<VarId>& vars) const {
    std::vector<Term> out;
    out.reserve(vars.size());
    for (VarId v : vars) {
      Term r = resolve(Term::var(v));
      if (r.is_constant()) {
        out.push_back(r);
        continue;
      }
      VarId smallest = v;
      for (VarId w : vars)
        if (find(w) == r.var_id() && w < smallest) smallest = w;
      out.push_back(Term::var(smallest));
    }
    return out;
  }

 private:
  static constexpr VarId kNone = static_cast<VarId>(-1);

  struct Undo {
    VarId child;
    VarId root;
    std::uint8_t old_rank;
    std::optional<Term> old_constant;
  };

  std::vector<VarId> parent_;
  std::vector<std::uint8_t> rank_;
  std::vector<std::optional<Term>> constant_;
  std::vector<Undo> trail_;
};

}  // namespace qchr
