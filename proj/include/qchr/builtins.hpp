#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "qchr/term.hpp"

namespace qchr {

class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BuiltinKind { Pure, Effect };

using PureFn = std::function<Term(std::span<const Term>)>;
using EffectFn = std::function<bool(std::span<const Term>)>;

struct Builtin {
  std::string name;
  BuiltinKind kind = BuiltinKind::Pure;
  std::size_t arity = 0;
  PureFn pure;
  EffectFn effect;
};

/// Host functions callable from expressions (pure) and effectful built-in
/// constraints callable from rule bodies.
class BuiltinRegistry {
 public:
  void register_pure(std::string_view name, std::size_t arity, PureFn fn) {
    add(Builtin{std::string(name), BuiltinKind::Pure, arity, std::move(fn), {}});
  }

  void register_effect(std::string_view name, std::size_t arity, EffectFn fn) {
    add(Builtin{std::string(name), BuiltinKind::Effect, arity, {}, std::move(fn)});
  }

  const Builtin* find(SymbolId name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const Builtin* find(std::string_view name) const { return find(intern(name)); }

  Term call_pure(SymbolId name, std::span<const Term> args) const {
    const Builtin* b = find(name);
    if (!b) throw EvalError("unknown host call '" + symbol_name(name) + "'");
    if (b->kind != BuiltinKind::Pure)
      throw EvalError("effect '" + b->name + "' used in expression position");
    check_arity(*b, args.size());
    return b->pure(args);
  }

  bool invoke_effect(SymbolId name, std::span<const Term> args) const {
    const Builtin* b = find(name);
    if (!b) throw EvalError("unknown effect '" + symbol_name(name) + "'");
    if (b->kind != BuiltinKind::Effect)
      throw EvalError("pure function '" + b->name + "' used as a constraint");
    check_arity(*b, args.size());
    for (const Term& a : args)
      if (!a.is_constant()) throw EvalError("effect '" + b->name + "' called with unbound argument");
    return b->effect(args);
  }

  std::size_t size() const { return entries_.size(); }

 private:
  void add(Builtin b) {
    SymbolId id = intern(b.name);
    if (entries_.count(id)) throw RegistryError("duplicate builtin '" + b.name + "'");
    entries_.emplace(id, std::move(b));
  }

  static void check_arity(const Builtin& b, std::size_t got) {
    if (got != b.arity)
      throw EvalError("'" + b.name + "' expects " + std::to_string(b.arity) + " argument(s), got " +
                      std::to_string(got));
  }

  std::unordered_map<SymbolId, Builtin> entries_;
};

/// Mutable per-session state behind the registered built-ins.
///
/// rollback(checkpoint()) must be an observational identity, and equal
/// digests must imply identical answers from every registered call.
class HostState {
 public:
  using Mark = std::size_t;

  virtual ~HostState() = default;

  virtual Mark checkpoint() const = 0;
  virtual void rollback(Mark mark) = 0;
  virtual std::string digest() const = 0;

  const BuiltinRegistry& registry() const { return registry_; }
  BuiltinRegistry& registry() { return registry_; }

 protected:
  BuiltinRegistry registry_;
};

/// Host without state; used for plain CHR programs and Nim.
class NullHost final : public HostState {
 public:
  Mark checkpoint() const override { return 0; }
  void rollback(Mark) override {}
  std::string digest() const override { return {}; }
};

}  // namespace qchr
