#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qchr/builtins.hpp"
#include "qchr/expr.hpp"
#include "qchr/program.hpp"
#include "qchr/store.hpp"

namespace qchr {

struct SolveOptions {
  bool tabling = false;
  std::optional<std::uint64_t> failure_limit;
  std::optional<std::int64_t> time_limit_ms;
  bool collect_witness = false;
};

struct SolveStats {
  std::uint64_t failures = 0;
  std::uint64_t rule_applications = 0;
  std::uint64_t inactivations = 0;
  std::uint64_t exists_nodes = 0;
  std::uint64_t forall_nodes = 0;
  std::uint64_t table_hits = 0;
  double elapsed_ms = 0.0;

  /// Equality on the counters only; elapsed time is ignored.
  bool same_counts(const SolveStats& o) const {
    return failures == o.failures && rule_applications == o.rule_applications &&
           inactivations == o.inactivations && exists_nodes == o.exists_nodes &&
           forall_nodes == o.forall_nodes && table_hits == o.table_hits;
  }
};

enum class Verdict { Valid, Invalid, LimitExceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::LimitExceeded: return "limit";
  }
  return "?";
}

struct SolveResult {
  Verdict verdict = Verdict::Invalid;
  bool valid = false;
  SolveStats stats;
  std::optional<std::int64_t> witness;       // first top-level existential choice
  std::vector<UserConstraint> final_store;  // live constraints at the end
  std::string message;
};

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quantified constraint produced by an existential or universal rule: the
/// rule's body over the interval [lower..upper] for its iterator.
struct QuantifiedGoal {
  QuantKind kind = QuantKind::Exists;
  const Rule* rule = nullptr;
  Env env;
  std::int64_t lower = 0;
  std::int64_t upper = -1;
};

/// Result of head matching: bindings plus the chosen token per head
/// position (kept heads first, then deleted heads).
struct Match {
  std::size_t rule = 0;
  Env env;
  std::vector<TokenId> heads;
};

/// One solve session: goal-directed proof search with committed rule choice,
/// backtracking over existential values and exhaustive universal iteration.
///
/// Not thread-safe; a Program may be shared between Solvers.
class Solver {
 public:
  Solver(const Program& program, HostState& host, SolveOptions opts = {})
      : program_(program), host_(host), opts_(opts) {
    for (std::size_t ri = 0; ri < program_.rules.size(); ++ri) {
      const Rule& r = program_.rules[ri];
      for (std::size_t h = 0; h < r.head_count(); ++h) {
        auto& list = rules_by_functor_[r.head(h).key()];
        if (list.empty() || list.back() != ri) list.push_back(ri);
      }
    }
  }

  SolveResult solve(const Goal& goal) {
    reset();
    const auto host_mark = host_.checkpoint();
    start_ = Clock::now();
    SolveResult res;
    try {
      Env env(goal.slots.size());
      bool ok = solve_sequence(goal.atoms, env);
      res.verdict = ok ? Verdict::Valid : Verdict::Invalid;
    } catch (const LimitExceeded& e) {
      res.verdict = Verdict::LimitExceeded;
      res.message = e.what();
    } catch (...) {
      host_.rollback(host_mark);
      throw;
    }
    res.valid = res.verdict == Verdict::Valid;
    res.final_store = store_.constraints();
    if (res.valid && opts_.collect_witness) res.witness = witness_;
    host_.rollback(host_mark);
    stats_.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    res.stats = stats_;
    return res;
  }

  /// Solves the atoms left to right, threading one store through them.
  bool solve_sequence(std::span<const BodyAtom> atoms, Env& env) {
    for (const BodyAtom& a : atoms)
      if (!activate(a, env)) return false;
    return true;
  }

  /// Solves a single goal atom. Arguments are evaluated at this point, so
  /// host calls observe the effects of the atoms before it.
  bool activate(const BodyAtom& a, Env& env) {
    switch (a.kind) {
      case AtomKind::True:
        return true;
      case AtomKind::False:
        ++stats_.failures;
        return false;
      case AtomKind::Equality:
        return add_equality(instantiate(a.args[0], env), instantiate(a.args[1], env));
      case AtomKind::User: {
        UserConstraint c{a.functor, {}};
        c.args.reserve(a.args.size());
        for (const Expr& e : a.args) c.args.push_back(instantiate(e, env));
        if (is_effect(a)) {
          bool ok = host_.registry().invoke_effect(a.functor, c.args);
          if (!ok) ++stats_.failures;
          return ok;
        }
        return activate_new(std::move(c));
      }
    }
    return false;
  }

  bool activate_new(UserConstraint c) { return activate_token(store_.add(std::move(c))); }

  /// Tries every rule mentioning the token's functor in textual order and
  /// commits to the first match; without one the token stays suspended.
  bool activate_token(TokenId token) {
    auto it = rules_by_functor_.find(store_.get(token).key());
    if (it != rules_by_functor_.end()) {
      for (std::size_t ri : it->second) {
        if (auto m = try_apply(ri, token)) return fire(*m);
      }
    }
    ++stats_.inactivations;
    return true;
  }

  /// Finds partners for `active` so that the heads of rule `ri` match
  /// (modulo equality classes) and the guard is entailed. Partners are
  /// distinct tokens, searched in ascending id.
  std::optional<Match> try_apply(std::size_t ri, TokenId active) const {
    const Rule& r = program_.rules[ri];
    const UserConstraint& c = store_.get(active);
    for (std::size_t pos = 0; pos < r.head_count(); ++pos) {
      const HeadPattern& h = r.head(pos);
      if (h.key() != c.key()) continue;
      Match m{ri, Env(r.slots.size()), std::vector<TokenId>(r.head_count(), 0)};
      if (!bind_head(h, c, m.env)) continue;
      m.heads[pos] = active;
      if (match_from(r, 0, m)) return m;
    }
    return std::nullopt;
  }

  /// Commits to a match: deletes the deleted heads, solves the body (or
  /// the quantified constraint) and re-activates surviving kept heads.
  bool fire(const Match& m) {
    const Rule& r = program_.rules[m.rule];
    ++stats_.rule_applications;
    if (r.is_propagation()) store_.record_firing(history_key(m));
    for (std::size_t i = r.kept.size(); i < m.heads.size(); ++i) store_.erase(m.heads[i]);
    Env env = m.env;
    if (r.quantifier) {
      QuantifiedGoal q{r.quantifier->kind, &r, env, eval_bound(r.quantifier->lower, env),
                       eval_bound(r.quantifier->upper, env)};
      return eliminate(q);
    }
    if (!solve_sequence(r.body, env)) return false;
    for (std::size_t i = 0; i < r.kept.size(); ++i) {
      if (store_.alive(m.heads[i]) && !activate_token(m.heads[i])) return false;
    }
    return true;
  }

  bool eliminate(const QuantifiedGoal& q) {
    return q.kind == QuantKind::Exists ? eliminate_exists(q) : eliminate_forall(q);
  }

  /// Tries lower, lower+1, ... and succeeds on the first value whose body
  /// instance succeeds. Every branch is local: state is rolled back after it.
  bool eliminate_exists(const QuantifiedGoal& q) {
    ++stats_.exists_nodes;
    const bool top_level = quant_depth_ == 0;
    DepthGuard depth(quant_depth_);
    for (std::int64_t x = q.lower; x <= q.upper; ++x) {
      check_limits();
      bool ok = solve_instance(q, x);
      if (ok) {
        if (top_level && !witness_) witness_ = x;
        return true;
      }
      ++stats_.failures;
    }
    return false;
  }

  /// Succeeds iff every value of [lower..upper] succeeds; an empty interval
  /// is vacuously true.
  bool eliminate_forall(const QuantifiedGoal& q) {
    ++stats_.forall_nodes;
    DepthGuard depth(quant_depth_);
    for (std::int64_t x = q.lower; x <= q.upper; ++x) {
      check_limits();
      if (!solve_instance(q, x)) {
        ++stats_.failures;
        return false;
      }
    }
    return true;
  }

  /// Adds X = Y. On a consistent merge every suspended constraint that
  /// mentions the merged class is re-activated in ascending token order.
  bool add_equality(Term x, Term y) {
    const EqClasses& eq = store_.eq();
    Term rx = eq.resolve(x);
    Term ry = eq.resolve(y);
    if (!store_.eq().unite(rx, ry)) return false;
    if (rx == ry) return true;
    VarId root = eq.find(rx.is_var() ? rx.var_id() : ry.var_id());
    std::vector<TokenId> woken;
    for (TokenId t : store_.token_ids()) {
      const auto& args = store_.get(t).args;
      bool touches = std::any_of(args.begin(), args.end(),
                                 [&](const Term& a) { return a.is_var() && eq.find(a.var_id()) == root; });
      if (touches) woken.push_back(t);
    }
    for (TokenId t : woken)
      if (store_.alive(t) && !activate_token(t)) return false;
    return true;
  }

  /// Recorded verdict for a ground sub-goal under the current store and
  /// host state, if any.
  std::optional<bool> table_lookup(const UserConstraint& c) const {
    auto it = table_.find(table_key(c));
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  void table_store(const UserConstraint& c, bool verdict) { table_.emplace(table_key(c), verdict); }

  std::size_t table_size() const { return table_.size(); }

  Store& store() { return store_; }
  const Store& store() const { return store_; }
  const SolveStats& stats() const { return stats_; }
  HostState& host() { return host_; }

  struct Checkpoint {
    Store::Mark store;
    HostState::Mark host;
  };

  Checkpoint checkpoint() const { return {store_.checkpoint(), host_.checkpoint()}; }

  void rollback(const Checkpoint& cp) {
    store_.rollback(cp.store);
    host_.rollback(cp.host);
  }

 private:
  using Clock = std::chrono::steady_clock;

  struct DepthGuard {
    explicit DepthGuard(int& d) : depth(d) { ++depth; }
    ~DepthGuard() { --depth; }
    int& depth;
  };

  void reset() {
    store_ = Store{};
    stats_ = SolveStats{};
    table_.clear();
    witness_.reset();
    quant_depth_ = 0;
    tick_ = 0;
  }

  bool is_effect(const BodyAtom& a) const {
    const Builtin* b = host_.registry().find(a.functor);
    return b && b->kind == BuiltinKind::Effect;
  }

  /// Value of an argument expression. A bare variable may stay unbound (a
  /// fresh variable is created for it); anything else must be ground.
  Term instantiate(const Expr& e, Env& env) {
    if (e.is_slot()) {
      auto& b = env[static_cast<std::size_t>(e.slot)];
      if (!b) b = Term::var(store_.eq().fresh());
      return store_.eq().resolve(*b);
    }
    return eval_expr(e, env, store_.eq(), host_.registry());
  }

  std::int64_t eval_bound(const Expr& e, const Env& env) const {
    Term t = eval_expr(e, env, store_.eq(), host_.registry());
    if (!t.is_int()) throw EvalError("quantifier bound is not an integer");
    return t.value;
  }

  bool bind_head(const HeadPattern& h, const UserConstraint& c, Env& env) const {
    const EqClasses& eq = store_.eq();
    for (std::size_t i = 0; i < h.args.size(); ++i) {
      const HeadArg& a = h.args[i];
      Term v = eq.resolve(c.args[i]);
      switch (a.kind) {
        case HeadArg::Kind::Anon:
          break;
        case HeadArg::Kind::Const:
          if (v != a.value) return false;
          break;
        case HeadArg::Kind::Slot: {
          auto& b = env[static_cast<std::size_t>(a.slot)];
          if (!b) {
            b = v;
          } else if (eq.resolve(*b) != v) {
            return false;
          }
          break;
        }
      }
    }
    return true;
  }

  bool match_from(const Rule& r, std::size_t pos, Match& m) const {
    if (pos == r.head_count()) {
      if (!guard_holds(r, m.env)) return false;
      return !r.is_propagation() || !store_.has_fired(history_key(m));
    }
    if (m.heads[pos] != 0) return match_from(r, pos + 1, m);
    const HeadPattern& h = r.head(pos);
    for (TokenId t : store_.candidates(h.key())) {
      if (std::find(m.heads.begin(), m.heads.end(), t) != m.heads.end()) continue;
      Env saved = m.env;
      if (bind_head(h, store_.get(t), m.env)) {
        m.heads[pos] = t;
        if (match_from(r, pos + 1, m)) return true;
        m.heads[pos] = 0;
      }
      m.env = std::move(saved);
    }
    return false;
  }

  Term guard_value(const Expr& e, const Env& env) const {
    if (e.is_slot()) {
      const auto& b = env[static_cast<std::size_t>(e.slot)];
      if (!b) throw UnboundError("unbound guard variable");
      return store_.eq().resolve(*b);
    }
    return eval_expr(e, env, store_.eq(), host_.registry());
  }

  /// Entailment check: a comparison over unbound variables holds only when
  /// it follows from the equality classes alone.
  bool guard_holds(const Rule& r, const Env& env) const {
    for (const Comparison& c : r.guard) {
      Term a, b;
      try {
        a = guard_value(c.lhs, env);
        b = guard_value(c.rhs, env);
      } catch (const UnboundError&) {
        return false;
      }
      bool holds = false;
      switch (c.op) {
        case CmpOp::Eq: holds = a == b; break;
        case CmpOp::Ne: holds = a.is_constant() && b.is_constant() && a != b; break;
        case CmpOp::Lt: holds = a.is_int() && b.is_int() && a.value < b.value; break;
        case CmpOp::Le: holds = a.is_int() && b.is_int() && a.value <= b.value; break;
        case CmpOp::Gt: holds = a.is_int() && b.is_int() && a.value > b.value; break;
        case CmpOp::Ge: holds = a.is_int() && b.is_int() && a.value >= b.value; break;
      }
      if (!holds) return false;
    }
    return true;
  }

  static std::vector<TokenId> history_key(const Match& m) {
    std::vector<TokenId> key;
    key.reserve(m.heads.size() + 1);
    key.push_back(static_cast<TokenId>(m.rule));
    key.insert(key.end(), m.heads.begin(), m.heads.end());
    return key;
  }

  /// Solves the body instance for iterator value x under a checkpoint that
  /// is always rolled back.
  bool solve_instance(const QuantifiedGoal& q, std::int64_t x) {
    const Rule& r = *q.rule;
    const auto cp = checkpoint();
    Env env = q.env;
    env[static_cast<std::size_t>(r.quantifier->iterator)] = Term::integer(x);
    bool ok = false;
    try {
      ok = solve_quantified_body(r.body, env);
    } catch (...) {
      rollback(cp);
      throw;
    }
    rollback(cp);
    return ok;
  }

  bool solve_quantified_body(const std::vector<BodyAtom>& body, Env& env) {
    if (!opts_.tabling || body.size() != 1 || body[0].kind != AtomKind::User || is_effect(body[0]))
      return solve_sequence(body, env);
    UserConstraint c{body[0].functor, {}};
    for (const Expr& e : body[0].args) c.args.push_back(instantiate(e, env));
    bool ground = std::all_of(c.args.begin(), c.args.end(), [](const Term& t) { return t.is_constant(); });
    if (!ground) return activate_new(std::move(c));
    std::string key = table_key(c);
    if (auto it = table_.find(key); it != table_.end()) {
      ++stats_.table_hits;
      return it->second;
    }
    bool verdict = activate_new(std::move(c));
    table_.emplace(std::move(key), verdict);
    return verdict;
  }

  /// Key: functor, argument values, store fingerprint and host digest.
  std::string table_key(const UserConstraint& c) const {
    std::string key;
    auto put = [&key](std::uint64_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(c.key());
    for (const Term& a : c.args) {
      put(static_cast<std::uint64_t>(a.kind));
      put(static_cast<std::uint64_t>(a.value));
    }
    put(store_.fingerprint());
    key += host_.digest();
    return key;
  }

  void check_limits() {
    if (opts_.failure_limit && stats_.failures > *opts_.failure_limit)
      throw LimitExceeded("failure limit exceeded");
    if (opts_.time_limit_ms && (++tick_ & 0xff) == 0) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_).count();
      if (ms > *opts_.time_limit_ms) throw LimitExceeded("time limit exceeded");
    }
  }

  const Program& program_;
  HostState& host_;
  SolveOptions opts_;
  std::unordered_map<FunctorKey, std::vector<std::size_t>> rules_by_functor_;
  Store store_;
  SolveStats stats_;
  std::unordered_map<std::string, bool> table_;
  std::optional<std::int64_t> witness_;
  int quant_depth_ = 0;
  std::uint64_t tick_ = 0;
  Clock::time_point start_ = Clock::now();
};

/// Convenience wrapper: one fresh session per call.
inline SolveResult solve(const Program& program, const Goal& goal, HostState& host, SolveOptions opts = {}) {
  return Solver(program, host, opts).solve(goal);
}

}  // namespace qchr
