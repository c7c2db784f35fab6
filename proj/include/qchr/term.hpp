#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qchr {

using SymbolId = std::uint32_t;
using VarId = std::uint32_t;

/// Process-wide interning of functor and symbol names.
///
/// Ids 0 and 1 are reserved for the truth symbols `top` and `bot`.
class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  SymbolId intern(std::string_view name) {
    std::lock_guard lock(mutex_);
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<SymbolId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  const std::string& name(SymbolId id) const {
    std::lock_guard lock(mutex_);
    return names_.at(id);
  }

 private:
  SymbolTable() {
    intern("top");
    intern("bot");
  }

  mutable std::mutex mutex_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, SymbolId> ids_;
};

inline SymbolId intern(std::string_view name) { return SymbolTable::instance().intern(name); }
inline const std::string& symbol_name(SymbolId id) { return SymbolTable::instance().name(id); }

inline constexpr SymbolId kTopSymbol = 0;
inline constexpr SymbolId kBotSymbol = 1;

enum class TermKind : std::uint8_t { Var, Int, Sym };

/// A variable, an integer constant or a symbolic constant.
struct Term {
  TermKind kind = TermKind::Int;
  std::int64_t value = 0;

  static constexpr Term var(VarId id) { return {TermKind::Var, static_cast<std::int64_t>(id)}; }
  static constexpr Term integer(std::int64_t v) { return {TermKind::Int, v}; }
  static constexpr Term symbol(SymbolId s) { return {TermKind::Sym, static_cast<std::int64_t>(s)}; }
  static constexpr Term top() { return symbol(kTopSymbol); }
  static constexpr Term bot() { return symbol(kBotSymbol); }
  static constexpr Term boolean(bool b) { return b ? top() : bot(); }

  constexpr bool is_var() const { return kind == TermKind::Var; }
  constexpr bool is_int() const { return kind == TermKind::Int; }
  constexpr bool is_sym() const { return kind == TermKind::Sym; }
  constexpr bool is_constant() const { return kind != TermKind::Var; }
  constexpr VarId var_id() const { return static_cast<VarId>(value); }
  constexpr SymbolId sym_id() const { return static_cast<SymbolId>(value); }

  friend constexpr bool operator==(const Term&, const Term&) = default;
  friend constexpr auto operator<=>(const Term&, const Term&) = default;
};

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::Var: return "_G" + std::to_string(t.value);
    case TermKind::Int: return std::to_string(t.value);
    case TermKind::Sym: return symbol_name(t.sym_id());
  }
  return {};
}

/// Functor name and arity packed into one key.
using FunctorKey = std::uint64_t;

constexpr FunctorKey functor_key(SymbolId functor, std::size_t arity) {
  return (static_cast<FunctorKey>(functor) << 16) | static_cast<FunctorKey>(arity);
}

/// A user-defined constraint as it lives in the store: every argument is a
/// variable or a constant.
struct UserConstraint {
  SymbolId functor = 0;
  std::vector<Term> args;

  FunctorKey key() const { return functor_key(functor, args.size()); }
  friend bool operator==(const UserConstraint&, const UserConstraint&) = default;
};

inline std::string to_string(const UserConstraint& c) {
  std::string out = symbol_name(c.functor);
  if (c.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) out += ',';
    out += to_string(c.args[i]);
  }
  out += ')';
  return out;
}

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_constraint(const UserConstraint& c) {
  std::uint64_t h = mix64(c.key());
  for (const auto& a : c.args) {
    h = mix64(h ^ (static_cast<std::uint64_t>(a.kind) << 60) ^ static_cast<std::uint64_t>(a.value));
  }
  return h;
}

/// Raised when an expression cannot be evaluated to a constant.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qchr
