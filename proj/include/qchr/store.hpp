#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qchr/eq_classes.hpp"
#include "qchr/term.hpp"

namespace qchr {

using TokenId = std::uint64_t;

/// Identified multiset of suspended user constraints together with the
/// equality classes and the propagation history.
///
/// Every mutation is trailed; rollback(checkpoint()) restores the exact
/// observable content. Token ids are never reused, even across rollbacks.
class Store {
 public:
  struct Mark {
    std::size_t trail;
    EqClasses::Mark eq;
  };

  TokenId add(UserConstraint c) {
    TokenId id = next_++;
    fingerprint_ += hash_constraint(c);
    index_[c.key()].insert(id);
    tokens_.emplace(id, std::move(c));
    trail_.push_back({Undo::Kind::Added, id, {}, {}});
    return id;
  }

  /// Removes a live token. Returns false if it was already gone.
  bool erase(TokenId id) {
    auto it = tokens_.find(id);
    if (it == tokens_.end()) return false;
    fingerprint_ -= hash_constraint(it->second);
    remove_from_index(it->second.key(), id);
    trail_.push_back({Undo::Kind::Erased, id, std::move(it->second), {}});
    tokens_.erase(it);
    return true;
  }

  bool alive(TokenId id) const { return tokens_.count(id) != 0; }

  const UserConstraint& get(TokenId id) const {
    auto it = tokens_.find(id);
    if (it == tokens_.end()) throw std::out_of_range("dead token " + std::to_string(id));
    return it->second;
  }

  /// Live tokens with the given functor/arity, ascending.
  const std::set<TokenId>& candidates(FunctorKey key) const {
    static const std::set<TokenId> kEmpty;
    auto it = index_.find(key);
    return it == index_.end() ? kEmpty : it->second;
  }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  std::vector<TokenId> token_ids() const {
    std::vector<TokenId> out;
    out.reserve(tokens_.size());
    for (const auto& [id, c] : tokens_) out.push_back(id);
    return out;
  }

  std::vector<UserConstraint> constraints() const {
    std::vector<UserConstraint> out;
    out.reserve(tokens_.size());
    for (const auto& [id, c] : tokens_) out.push_back(c);
    return out;
  }

  /// Order-independent hash of the live multiset.
  std::uint64_t fingerprint() const { return fingerprint_; }

  TokenId next_token() const { return next_; }

  bool has_fired(const std::vector<TokenId>& key) const { return fired_.count(key) != 0; }

  void record_firing(std::vector<TokenId> key) {
    if (fired_.insert(key).second) trail_.push_back({Undo::Kind::Fired, 0, {}, std::move(key)});
  }

  EqClasses& eq() { return eq_; }
  const EqClasses& eq() const { return eq_; }

  Mark checkpoint() const { return {trail_.size(), eq_.checkpoint()}; }

  void rollback(const Mark& mark) {
    while (trail_.size() > mark.trail) {
      Undo& u = trail_.back();
      switch (u.kind) {
        case Undo::Kind::Added: {
          auto it = tokens_.find(u.id);
          if (it != tokens_.end()) {
            fingerprint_ -= hash_constraint(it->second);
            remove_from_index(it->second.key(), u.id);
            tokens_.erase(it);
          }
          break;
        }
        case Undo::Kind::Erased:
          fingerprint_ += hash_constraint(u.constraint);
          index_[u.constraint.key()].insert(u.id);
          tokens_.emplace(u.id, std::move(u.constraint));
          break;
        case Undo::Kind::Fired:
          fired_.erase(u.fired);
          break;
      }
      trail_.pop_back();
    }
    eq_.rollback(mark.eq);
  }

  /// Index consistency check, used by tests.
  bool index_consistent() const {
    std::size_t indexed = 0;
    for (const auto& [key, ids] : index_) {
      for (TokenId id : ids) {
        auto it = tokens_.find(id);
        if (it == tokens_.end() || it->second.key() != key) return false;
      }
      indexed += ids.size();
    }
    return indexed == tokens_.size();
  }

 private:
  struct Undo {
    enum class Kind : std::uint8_t { Added, Erased, Fired };
    Kind kind;
    TokenId id;
    UserConstraint constraint;
    std::vector<TokenId> fired;
  };

  void remove_from_index(FunctorKey key, TokenId id) {
    auto it = index_.find(key);
    if (it == index_.end()) return;
    it->second.erase(id);
    if (it->second.empty()) index_.erase(it);
  }

  TokenId next_ = 1;
  std::map<TokenId, UserConstraint> tokens_;
  std::unordered_map<FunctorKey, std::set<TokenId>> index_;
  std::set<std::vector<TokenId>> fired_;
  std::uint64_t fingerprint_ = 0;
  EqClasses eq_;
  std::vector<Undo> trail_;
};

}  // namespace qchr
