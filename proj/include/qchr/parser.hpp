#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qchr/program.hpp"

namespace qchr {

/// Syntax or semantic error in program/goal text, with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

namespace detail {

enum class Tok {
  Name,
  Var,
  Int,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Dot,
  DotDot,
  At,
  Backslash,
  SimpArrow,
  PropArrow,
  Bar,
  Plus,
  Minus,
  Star,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t number = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t{Tok::End, {}, 0, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.kind = Tok::Int;
        t.text = std::string(src_.substr(start, pos_ - start));
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec != std::errc()) throw ParseError("integer literal out of range", t.line, t.column);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Tok::Var : Tok::Name;
      } else {
        t.kind = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Tok punct(Token& t) {
    static const std::pair<std::string_view, Tok> kTable[] = {
        {"<=>", Tok::SimpArrow}, {"==>", Tok::PropArrow}, {"..", Tok::DotDot}, {"<=", Tok::Le},
        {">=", Tok::Ge},         {"!=", Tok::Ne},         {"(", Tok::LParen},  {")", Tok::RParen},
        {"[", Tok::LBrack},      {"]", Tok::RBrack},      {",", Tok::Comma},   {".", Tok::Dot},
        {"@", Tok::At},          {"\\", Tok::Backslash},  {"|", Tok::Bar},     {"+", Tok::Plus},
        {"-", Tok::Minus},       {"*", Tok::Star},        {"=", Tok::Eq},      {"<", Tok::Lt},
        {">", Tok::Gt},
    };
    for (const auto& [text, kind] : kTable) {
      if (starts(text)) {
        t.text = std::string(text);
        advance(text.size());
        return kind;
      }
    }
    throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", line_, col_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

/// Scope of variable names inside one rule or goal.
struct Scope {
  std::map<std::string, int> slots;
  std::vector<std::string> names;
  std::string iterator;  // name bound by the quantifier, may be lowercase

  int slot(const std::string& name) {
    auto it = slots.find(name);
    if (it != slots.end()) return it->second;
    int id = static_cast<int>(names.size());
    slots.emplace(name, id);
    names.push_back(name);
    return id;
  }
};

/// Body/guard item before classification: `expr` or `expr op expr`.
struct Item {
  Expr lhs;
  std::optional<CmpOp> op;
  Expr rhs;
  int line = 0;
  int column = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  Program program() {
    Program p;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      const Token& start = peek();
      Rule r = rule();
      if (!names.insert(r.name).second) throw error("duplicate rule name '" + r.name + "'", start);
      p.rules.push_back(std::move(r));
    }
    if (p.rules.empty()) throw error("program has no rules", peek());
    return p;
  }

  Goal goal() {
    Scope scope;
    scope_ = &scope;
    Goal g;
    if (peek().kind == Tok::End) throw error("empty goal", peek());
    for (;;) {
      Item it = item();
      g.atoms.push_back(to_atom(it));
      if (!accept(Tok::Comma)) break;
    }
    accept(Tok::Dot);
    expect(Tok::End, "end of goal");
    g.slots = scope.names;
    // Goal variables must be tied down by an equality of the goal.
    std::set<int> equated;
    for (const auto& a : g.atoms)
      if (a.kind == AtomKind::Equality)
        for (const auto& side : a.args) collect_slots(side, equated);
    for (const auto& a : g.atoms)
      for (const auto& arg : a.args) {
        std::set<int> used;
        collect_slots(arg, used);
        for (int s : used)
          if (!equated.count(s)) throw ParseError("unbound variable " + g.slots[s] + " in goal", 1, 1);
      }
    scope_ = nullptr;
    return g;
  }

 private:
  static void collect_slots(const Expr& e, std::set<int>& out) {
    if (e.op == ExprOp::Slot) out.insert(e.slot);
    for (const auto& o : e.operands) collect_slots(o, out);
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) throw error(std::string("expected ") + what, peek());
    return toks_[pos_++];
  }

  static ParseError error(const std::string& msg, const Token& at) {
    std::string near = at.kind == Tok::End ? "end of input" : "'" + at.text + "'";
    return ParseError(msg + " near " + near, at.line, at.column);
  }

  Rule rule() {
    Scope scope;
    scope_ = &scope;
    Rule r;
    const Token& name = peek();
    if (name.kind != Tok::Name && name.kind != Tok::Var) throw error("expected rule name", name);
    ++pos_;
    r.name = name.text;
    expect(Tok::At, "'@' after rule name");

    std::vector<HeadPattern> first = heads();
    std::vector<HeadPattern> second;
    bool split = false;
    if (accept(Tok::Backslash)) {
      split = true;
      second = heads();
    }
    const Token& arrow = peek();
    if (accept(Tok::PropArrow)) {
      if (split) throw error("propagation rule cannot delete heads", arrow);
      r.kept = std::move(first);
    } else if (accept(Tok::SimpArrow)) {
      if (split) {
        r.kept = std::move(first);
        r.deleted = std::move(second);
      } else {
        r.deleted = std::move(first);
      }
    } else {
      throw error("expected '<=>' or '==>'", arrow);
    }

    if ((peek().kind == Tok::Name && (peek().text == "exists" || peek().text == "forall")) &&
        (peek(1).kind == Tok::Var || peek(1).kind == Tok::Name) && peek(2).kind == Tok::Name &&
        peek(2).text == "in") {
      Quantifier q;
      q.kind = peek().text == "exists" ? QuantKind::Exists : QuantKind::Forall;
      const Token& it = peek(1);
      if (it.text == "_") throw error("iterator cannot be anonymous", it);
      pos_ += 3;
      expect(Tok::LBrack, "'['");
      q.lower = expr();
      expect(Tok::DotDot, "'..'");
      q.upper = expr();
      expect(Tok::RBrack, "']'");
      expect(Tok::Bar, "'|' after quantifier");
      q.iterator = scope.slot(it.text);
      scope.iterator = it.text;
      r.quantifier = std::move(q);
    }

    std::vector<Item> items = item_list();
    if (accept(Tok::Bar)) {
      for (auto& i : items) {
        if (!i.op) throw ParseError("guard items must be comparisons", i.line, i.column);
        r.guard.push_back(Comparison{std::move(i.lhs), *i.op, std::move(i.rhs)});
      }
      items = item_list();
    }
    for (auto& i : items) r.body.push_back(to_atom(i));
    expect(Tok::Dot, "'.' at end of rule");
    r.slots = scope.names;
    scope_ = nullptr;
    return r;
  }

  std::vector<HeadPattern> heads() {
    std::vector<HeadPattern> out;
    do {
      out.push_back(head());
    } while (accept(Tok::Comma));
    return out;
  }

  HeadPattern head() {
    const Token& t = peek();
    if (t.kind != Tok::Name) throw error(t.kind == Tok::SimpArrow || t.kind == Tok::PropArrow
                                             ? "empty head"
                                             : "expected head constraint",
                                         t);
    ++pos_;
    HeadPattern h;
    h.functor = intern(t.text);
    if (accept(Tok::LParen)) {
      if (!accept(Tok::RParen)) {
        do {
          h.args.push_back(head_arg());
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
      }
    }
    return h;
  }

  HeadArg head_arg() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var:
        ++pos_;
        if (t.text == "_") return HeadArg::anonymous();
        return HeadArg::variable(scope_->slot(t.text));
      case Tok::Int:
        ++pos_;
        return HeadArg::constant(Term::integer(t.number));
      case Tok::Minus:
        if (peek(1).kind == Tok::Int) {
          pos_ += 2;
          return HeadArg::constant(Term::integer(-toks_[pos_ - 1].number));
        }
        break;
      case Tok::Name:
        if (peek(1).kind != Tok::LParen) {
          ++pos_;
          return HeadArg::constant(Term::symbol(intern(t.text)));
        }
        break;
      default:
        break;
    }
    throw error("head arguments must be variables or constants", t);
  }

  std::vector<Item> item_list() {
    std::vector<Item> out;
    do {
      out.push_back(item());
    } while (accept(Tok::Comma));
    return out;
  }

  Item item() {
    Item it;
    it.line = peek().line;
    it.column = peek().column;
    it.lhs = expr();
    static const std::pair<Tok, CmpOp> kOps[] = {{Tok::Eq, CmpOp::Eq}, {Tok::Ne, CmpOp::Ne},
                                                 {Tok::Lt, CmpOp::Lt}, {Tok::Le, CmpOp::Le},
                                                 {Tok::Gt, CmpOp::Gt}, {Tok::Ge, CmpOp::Ge}};
    for (auto [tok, op] : kOps) {
      if (accept(tok)) {
        it.op = op;
        it.rhs = expr();
        break;
      }
    }
    return it;
  }

  BodyAtom to_atom(Item& it) {
    if (it.op) {
      if (*it.op != CmpOp::Eq)
        throw ParseError("only '=' is allowed outside guards", it.line, it.column);
      return BodyAtom::equality(std::move(it.lhs), std::move(it.rhs));
    }
    Expr& e = it.lhs;
    if (e.op == ExprOp::Const && e.value.is_sym()) {
      const std::string& n = symbol_name(e.value.sym_id());
      if (n == "true") return BodyAtom::truth();
      if (n == "false") return BodyAtom::falsity();
      return BodyAtom{AtomKind::User, e.value.sym_id(), {}};
    }
    if (e.op == ExprOp::Call) return BodyAtom{AtomKind::User, e.callee, std::move(e.operands)};
    throw ParseError("expected a constraint", it.line, it.column);
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept(Tok::Plus)) {
        lhs = std::move(lhs) + term();
      } else if (accept(Tok::Minus)) {
        lhs = std::move(lhs) - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    while (accept(Tok::Star)) lhs = std::move(lhs) * unary();
    return lhs;
  }

  Expr unary() {
    if (accept(Tok::Minus)) {
      if (peek().kind == Tok::Int) return Expr::integer(-toks_[pos_++].number);
      return Expr::negate(unary());
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
        ++pos_;
        return Expr::integer(t.number);
      case Tok::Var:
        ++pos_;
        if (t.text == "_") throw error("anonymous variable only allowed in heads", t);
        return Expr::variable(scope_->slot(t.text));
      case Tok::LParen: {
        ++pos_;
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Name: {
        ++pos_;
        if (!accept(Tok::LParen)) {
          if (!scope_->iterator.empty() && t.text == scope_->iterator)
            return Expr::variable(scope_->slot(t.text));
          return Expr::symbol(t.text);
        }
        std::vector<Expr> args;
        if (!accept(Tok::RParen)) {
          do {
            args.push_back(expr());
          } while (accept(Tok::Comma));
          expect(Tok::RParen, "')'");
        }
        if (t.text == "min") {
          if (args.size() != 2) throw error("min takes two arguments", t);
          return min_expr(std::move(args[0]), std::move(args[1]));
        }
        return Expr::call(intern(t.text), std::move(args));
      }
      default:
        throw error("expected expression", t);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Scope* scope_ = nullptr;
};

}  // namespace detail

/// Parses a rule program. Rule order is preserved.
inline Program parse_program(std::string_view text) { return detail::Parser(text).program(); }

/// Parses a comma-separated goal, e.g. `nimfibo(4)` or `X = 3, p(X)`.
inline Goal parse_goal(std::string_view text) { return detail::Parser(text).goal(); }

}  // namespace qchr
