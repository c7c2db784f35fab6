#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qchr/expr.hpp"
#include "qchr/term.hpp"

namespace qchr {

/// Head argument: a rule variable, a constant, or the anonymous `_`.
struct HeadArg {
  enum class Kind : std::uint8_t { Slot, Const, Anon };
  Kind kind = Kind::Anon;
  int slot = -1;
  Term value{};

  static HeadArg variable(int slot) { return {Kind::Slot, slot, {}}; }
  static HeadArg constant(Term t) { return {Kind::Const, -1, t}; }
  static HeadArg anonymous() { return {}; }

  friend bool operator==(const HeadArg&, const HeadArg&) = default;
};

struct HeadPattern {
  SymbolId functor = 0;
  std::vector<HeadArg> args;

  FunctorKey key() const { return functor_key(functor, args.size()); }
  friend bool operator==(const HeadPattern&, const HeadPattern&) = default;
};

enum class AtomKind : std::uint8_t { User, Equality, True, False };

/// One element of a rule body or goal. For Equality, args holds both sides.
struct BodyAtom {
  AtomKind kind = AtomKind::True;
  SymbolId functor = 0;
  std::vector<Expr> args;

  static BodyAtom user(std::string_view functor, std::vector<Expr> args) {
    return {AtomKind::User, intern(functor), std::move(args)};
  }
  static BodyAtom equality(Expr lhs, Expr rhs) {
    BodyAtom a{AtomKind::Equality, 0, {}};
    a.args.push_back(std::move(lhs));
    a.args.push_back(std::move(rhs));
    return a;
  }
  static BodyAtom truth() { return {AtomKind::True, 0, {}}; }
  static BodyAtom falsity() { return {AtomKind::False, 0, {}}; }

  friend bool operator==(const BodyAtom&, const BodyAtom&) = default;
};

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

struct Comparison {
  Expr lhs;
  CmpOp op = CmpOp::Eq;
  Expr rhs;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

enum class QuantKind : std::uint8_t { Exists, Forall };

struct Quantifier {
  QuantKind kind = QuantKind::Exists;
  int iterator = -1;
  Expr lower;
  Expr upper;

  friend bool operator==(const Quantifier&, const Quantifier&) = default;
};

/// Simpagation rule `kept \ deleted <=> [quantifier |] [guard |] body`.
/// Simplification rules have no kept heads; propagation rules no deleted ones.
struct Rule {
  std::string name;
  std::vector<HeadPattern> kept;
  std::vector<HeadPattern> deleted;
  std::optional<Quantifier> quantifier;
  std::vector<Comparison> guard;
  std::vector<BodyAtom> body;
  std::vector<std::string> slots;  // variable names, indexed by slot

  bool is_propagation() const { return deleted.empty(); }
  bool is_simplification() const { return kept.empty(); }
  std::size_t head_count() const { return kept.size() + deleted.size(); }
  const HeadPattern& head(std::size_t i) const { return i < kept.size() ? kept[i] : deleted[i - kept.size()]; }

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Program {
  std::vector<Rule> rules;

  const Rule* find(std::string_view name) const {
    for (const auto& r : rules)
      if (r.name == name) return &r;
    return nullptr;
  }

  friend bool operator==(const Program&, const Program&) = default;
};

struct Goal {
  std::vector<BodyAtom> atoms;
  std::vector<std::string> slots;

  friend bool operator==(const Goal&, const Goal&) = default;
};

// ---------------------------------------------------------------------------
// Pretty printing. The output reparses to a structurally identical value.

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul: return 2;
    default: return 3;
  }
}

inline std::string slot_name(const std::vector<std::string>& slots, int slot) {
  if (slot >= 0 && static_cast<std::size_t>(slot) < slots.size() && !slots[slot].empty()) return slots[slot];
  return "V" + std::to_string(slot);
}

}  // namespace detail

inline std::string to_string(const Expr& e, const std::vector<std::string>& slots) {
  switch (e.op) {
    case ExprOp::Const: return to_string(e.value);
    case ExprOp::Slot: return detail::slot_name(slots, e.slot);
    case ExprOp::Neg: return "-(" + to_string(e.operands[0], slots) + ")";
    case ExprOp::Min:
      return "min(" + to_string(e.operands[0], slots) + ", " + to_string(e.operands[1], slots) + ")";
    case ExprOp::Call: {
      std::string out = symbol_name(e.callee) + "(";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) out += ", ";
        out += to_string(e.operands[i], slots);
      }
      return out + ")";
    }
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul: {
      int p = detail::precedence(e);
      auto side = [&](const Expr& child, bool right) {
        std::string s = to_string(child, slots);
        int cp = detail::precedence(child);
        bool paren = right ? cp <= p : cp < p;
        return paren ? "(" + s + ")" : s;
      };
      const char* sym = e.op == ExprOp::Add ? " + " : e.op == ExprOp::Sub ? " - " : "*";
      return side(e.operands[0], false) + sym + side(e.operands[1], true);
    }
  }
  return {};
}

inline std::string to_string(const HeadPattern& h, const std::vector<std::string>& slots) {
  std::string out = symbol_name(h.functor);
  if (h.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < h.args.size(); ++i) {
    if (i) out += ", ";
    const auto& a = h.args[i];
    switch (a.kind) {
      case HeadArg::Kind::Slot: out += detail::slot_name(slots, a.slot); break;
      case HeadArg::Kind::Const: out += to_string(a.value); break;
      case HeadArg::Kind::Anon: out += '_'; break;
    }
  }
  return out + ')';
}

inline std::string to_string(const BodyAtom& a, const std::vector<std::string>& slots) {
  switch (a.kind) {
    case AtomKind::True: return "true";
    case AtomKind::False: return "false";
    case AtomKind::Equality: return to_string(a.args[0], slots) + " = " + to_string(a.args[1], slots);
    case AtomKind::User: {
      std::string out = symbol_name(a.functor);
      if (a.args.empty()) return out;
      out += '(';
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(a.args[i], slots);
      }
      return out + ')';
    }
  }
  return {};
}

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

inline std::string to_string(const Rule& r) {
  auto heads = [&](const std::vector<HeadPattern>& hs) {
    std::string out;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (i) out += ", ";
      out += to_string(hs[i], r.slots);
    }
    return out;
  };
  std::string out = r.name + " @ ";
  if (r.deleted.empty()) {
    out += heads(r.kept) + " ==> ";
  } else if (r.kept.empty()) {
    out += heads(r.deleted) + " <=> ";
  } else {
    out += heads(r.kept) + " \\ " + heads(r.deleted) + " <=> ";
  }
  if (r.quantifier) {
    const auto& q = *r.quantifier;
    out += q.kind == QuantKind::Exists ? "exists " : "forall ";
    out += detail::slot_name(r.slots, q.iterator) + " in [" + to_string(q.lower, r.slots) + ".." +
           to_string(q.upper, r.slots) + "] | ";
  }
  if (!r.guard.empty()) {
    for (std::size_t i = 0; i < r.guard.size(); ++i) {
      if (i) out += ", ";
      out += to_string(r.guard[i].lhs, r.slots) + " " + to_string(r.guard[i].op) + " " +
             to_string(r.guard[i].rhs, r.slots);
    }
    out += " | ";
  }
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (i) out += ", ";
    out += to_string(r.body[i], r.slots);
  }
  return out + ".";
}

inline std::string to_string(const Program& p) {
  std::string out;
  for (const auto& r : p.rules) out += to_string(r) + "\n";
  return out;
}

inline std::string to_string(const Goal& g) {
  std::string out;
  for (std::size_t i = 0; i < g.atoms.size(); ++i) {
    if (i) out += ", ";
    out += to_string(g.atoms[i], g.slots);
  }
  return out;
}

}  // namespace qchr
