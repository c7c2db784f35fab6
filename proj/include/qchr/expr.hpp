#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qchr/builtins.hpp"
#include "qchr/eq_classes.hpp"
#include "qchr/term.hpp"

namespace qchr {

enum class ExprOp : std::uint8_t { Const, Slot, Add, Sub, Mul, Min, Neg, Call };

/// Argument expression: a constant, a rule-local variable slot, arithmetic,
/// or a call to a pure host function.
struct Expr {
  ExprOp op = ExprOp::Const;
  Term value{};
  int slot = -1;
  SymbolId callee = 0;
  std::vector<Expr> operands;

  static Expr constant(Term t) { return Expr{ExprOp::Const, t, -1, 0, {}}; }
  static Expr integer(std::int64_t v) { return constant(Term::integer(v)); }
  static Expr symbol(std::string_view s) { return constant(Term::symbol(intern(s))); }
  static Expr variable(int slot) { return Expr{ExprOp::Slot, {}, slot, 0, {}}; }
  static Expr binary(ExprOp op, Expr a, Expr b) {
    Expr e{op, {}, -1, 0, {}};
    e.operands.push_back(std::move(a));
    e.operands.push_back(std::move(b));
    return e;
  }
  static Expr negate(Expr a) {
    Expr e{ExprOp::Neg, {}, -1, 0, {}};
    e.operands.push_back(std::move(a));
    return e;
  }
  static Expr call(SymbolId callee, std::vector<Expr> args) {
    return Expr{ExprOp::Call, {}, -1, callee, std::move(args)};
  }

  bool is_slot() const { return op == ExprOp::Slot; }
  bool is_const() const { return op == ExprOp::Const; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

inline Expr operator+(Expr a, Expr b) { return Expr::binary(ExprOp::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(ExprOp::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(ExprOp::Mul, std::move(a), std::move(b)); }
inline Expr min_expr(Expr a, Expr b) { return Expr::binary(ExprOp::Min, std::move(a), std::move(b)); }

/// Raised when evaluation meets a variable whose class holds no constant.
class UnboundError : public EvalError {
 public:
  using EvalError::EvalError;
};

/// Slot bindings of one rule firing or goal.
using Env = std::vector<std::optional<Term>>;

namespace detail {

inline std::int64_t as_int(const Term& t, const char* what) {
  if (!t.is_int()) throw EvalError(std::string("non-integer operand to ") + what);
  return t.value;
}

}  // namespace detail

/// Evaluates an expression to a constant. Variables are replaced by the
/// constant of their equality class; a class without one is an error.
inline Term eval_expr(const Expr& e, const Env& env, const EqClasses& eq, const BuiltinRegistry& reg) {
  switch (e.op) {
    case ExprOp::Const:
      return e.value;
    case ExprOp::Slot: {
      const auto& b = env.at(static_cast<std::size_t>(e.slot));
      if (!b) throw UnboundError("unbound variable in expression");
      Term r = eq.resolve(*b);
      if (r.is_var()) throw UnboundError("unbound variable in expression");
      return r;
    }
    case ExprOp::Neg:
      return Term::integer(-detail::as_int(eval_expr(e.operands[0], env, eq, reg), "-"));
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Min: {
      auto a = detail::as_int(eval_expr(e.operands[0], env, eq, reg), "arithmetic");
      auto b = detail::as_int(eval_expr(e.operands[1], env, eq, reg), "arithmetic");
      switch (e.op) {
        case ExprOp::Add: return Term::integer(a + b);
        case ExprOp::Sub: return Term::integer(a - b);
        case ExprOp::Mul: return Term::integer(a * b);
        default: return Term::integer(std::min(a, b));
      }
    }
    case ExprOp::Call: {
      std::vector<Term> args;
      args.reserve(e.operands.size());
      for (const auto& o : e.operands) args.push_back(eval_expr(o, env, eq, reg));
      return reg.call_pure(e.callee, args);
    }
  }
  throw EvalError("malformed expression");
}

/// Convenience overload for ground expressions.
inline Term eval_expr(const Expr& e, const BuiltinRegistry& reg) {
  static const EqClasses kNoClasses;
  return eval_expr(e, Env{}, kNoClasses, reg);
}

}  // namespace qchr
