#pragma once

#include <stdexcept>
#include <string>

#include "qchr/program.hpp"

namespace qchr::games {

/// Fibonacci Nim as three rules, built without the parser:
///
///   l @ nimfibo(R) ==> nimfiboe(R-1, R).
///   e @ nimfiboe(N, R) <=> exists It in [1..min(N, R)] | nimfibou(2*It, R-It).
///   u @ nimfibou(N, R) <=> forall It in [1..min(N, R)] | nimfiboe(2*It, R-It).
///
/// nimfiboe(N, R): the existential player may take 1..N of R matches;
/// nimfibou(N, R) likewise for the universal player.
inline Program nim_program() {
  constexpr int kN = 0, kR = 1, kIt = 2;
  auto head = [](const char* f, std::vector<HeadArg> args) { return HeadPattern{intern(f), std::move(args)}; };
  auto N = [] { return Expr::variable(kN); };
  auto R = [] { return Expr::variable(kR); };
  auto It = [] { return Expr::variable(kIt); };

  Program p;

  Rule l;
  l.name = "l";
  l.slots = {"R"};
  l.kept.push_back(head("nimfibo", {HeadArg::variable(0)}));
  l.body.push_back(BodyAtom::user("nimfiboe", {Expr::variable(0) - Expr::integer(1), Expr::variable(0)}));
  p.rules.push_back(std::move(l));

  auto turn = [&](const char* name, const char* self, const char* other, QuantKind kind) {
    Rule r;
    r.name = name;
    r.slots = {"N", "R", "It"};
    r.deleted.push_back(head(self, {HeadArg::variable(kN), HeadArg::variable(kR)}));
    r.quantifier = Quantifier{kind, kIt, Expr::integer(1), min_expr(N(), R())};
    r.body.push_back(BodyAtom::user(other, {Expr::integer(2) * It(), R() - It()}));
    return r;
  };
  p.rules.push_back(turn("e", "nimfiboe", "nimfibou", QuantKind::Exists));
  p.rules.push_back(turn("u", "nimfibou", "nimfiboe", QuantKind::Forall));
  return p;
}

/// Goal nimfibo(n). Requires n >= 1; n = 1 is invalid (empty first move).
inline Goal nim_goal(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("nim needs at least one match");
  Goal g;
  g.atoms.push_back(BodyAtom::user("nimfibo", {Expr::integer(n)}));
  return g;
}

/// The same program as DSL text.
inline const char* nim_program_text() {
  return "% Fibonacci Nim: take 1..2k matches after the opponent took k.\n"
         "l @ nimfibo(R) ==> nimfiboe(R - 1, R).\n"
         "e @ nimfiboe(N, R) <=> exists It in [1..min(N, R)] | nimfibou(2*It, R - It).\n"
         "u @ nimfibou(N, R) <=> forall It in [1..min(N, R)] | nimfiboe(2*It, R - It).\n";
}

}  // namespace qchr::games
