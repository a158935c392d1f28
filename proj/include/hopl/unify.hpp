#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hopl/term.hpp"

namespace hopl {

enum class ErrorKind { instantiation, arity, type, existence, cyclic_term };

std::string to_string(ErrorKind k);

/// A run-time error raised by resolution (not a check outcome).
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Finite map from variable ids to terms.
///
/// Values produced by `unify` with the occurs check enabled are idempotent:
/// no bound variable appears in any binding's right-hand side.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const VarId, Term>> init) : bindings_(init) {}

  const Term* lookup(VarId v) const {
    auto it = bindings_.find(v);
    return it == bindings_.end() ? nullptr : &it->second;
  }
  void bind(VarId v, Term t) { bindings_.insert_or_assign(v, std::move(t)); }

  Term deref_one(const Term& t) const {
    if (!t.is_var()) return t;
    const Term* next = lookup(t.var_id());
    return next ? *next : t;
  }

  /// Follows variable-to-variable chains until an unbound var or a non-var term.
  Term deref(Term t) const {
    while (t.is_var()) {
      const Term* next = lookup(t.var_id());
      if (next == nullptr) break;
      t = *next;
    }
    return t;
  }

  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::map<VarId, Term>& bindings() const { return bindings_; }

  bool operator==(const Substitution& other) const { return bindings_ == other.bindings_; }

 private:
  std::map<VarId, Term> bindings_;
};

/// Returns true when variable `v` occurs in `t` once bindings in `store` are followed.
template <class Store>
bool occurs_check_in(const Store& store, VarId v, const Term& t) {
  std::vector<Term> work{t};
  while (!work.empty()) {
    Term cur = store.deref(work.back());
    work.pop_back();
    switch (cur.kind()) {
      case TermKind::var:
        if (cur.var_id() == v) return true;
        break;
      case TermKind::structure:
      case TermKind::pred_ref:
        for (const Term& a : cur.args()) work.push_back(a);
        break;
      default:
        break;
    }
  }
  return false;
}

/// Robinson unification against any binding store providing `deref` and `bind`.
///
/// Bindings are made directly in `store`; on failure the store may hold
/// partial bindings, which the caller discards or undoes via its trail.
template <class Store>
bool unify_in(Store& store, const Term& a, const Term& b, bool occurs_check) {
  std::vector<std::pair<Term, Term>> work{{a, b}};
  while (!work.empty()) {
    auto [x0, y0] = work.back();
    work.pop_back();
    Term x = store.deref(x0);
    Term y = store.deref(y0);
    if (x.same_node(y)) continue;
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) continue;
    if (x.is_var() || y.is_var()) {
      // Bind the younger variable to the older one so var-var chains are stable.
      if (x.is_var() && y.is_var() && y.var_id() > x.var_id()) std::swap(x, y);
      if (!x.is_var()) std::swap(x, y);
      if (occurs_check && !y.is_var() && occurs_check_in(store, x.var_id(), y)) return false;
      store.bind(x.var_id(), y);
      continue;
    }
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case TermKind::atom:
        if (x.name() != y.name()) return false;
        break;
      case TermKind::integer:
        if (x.int_value() != y.int_value()) return false;
        break;
      case TermKind::structure:
      case TermKind::pred_ref: {
        if (x.name() != y.name() || x.arity() != y.arity() || x.args().size() != y.args().size())
          return false;
        auto xa = x.args();
        auto ya = y.args();
        for (std::size_t i = xa.size(); i-- > 0;) work.emplace_back(xa[i], ya[i]);
        break;
      }
      case TermKind::var:
        break;
    }
  }
  return true;
}

/// Fully applies a binding store to `t`, sharing unchanged subterms.
/// Throws CyclicTermError if a variable is reached through its own binding.
template <class Store>
Term resolve_in(const Store& store, const Term& t) {
  std::unordered_set<VarId> path;
  struct Walker {
    const Store& store;
    std::unordered_set<VarId>& path;
    Term operator()(const Term& in) {
      Term cur = in;
      std::vector<VarId> pushed;
      while (cur.is_var()) {
        const Term next = store.deref_one(cur);
        if (next.same_node(cur)) break;
        if (!path.insert(cur.var_id()).second) throw CyclicTermError("cyclic binding through variable");
        pushed.push_back(cur.var_id());
        cur = next;
      }
      Term out = cur;
      if (cur.is_struct() || cur.is_pred_ref()) {
        std::vector<Term> args;
        bool changed = false;
        args.reserve(cur.args().size());
        for (const Term& a : cur.args()) {
          args.push_back((*this)(a));
          changed = changed || !args.back().same_node(a);
        }
        if (changed)
          out = cur.is_struct() ? Term::structure(cur.name(), std::move(args))
                                : Term::pred_ref(cur.name(), cur.arity(), std::move(args));
      }
      for (VarId v : pushed) path.erase(v);
      return out;
    }
  };
  return Walker{store, path}(t);
}

/// Most general unifier of `a` and `b` extending `s`, or nullopt.
///
/// With the occurs check off, a cyclic binding is returned unnormalized;
/// `apply_subst` on it raises CyclicTermError.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s = {},
                                  bool occurs_check = true);

Term apply_subst(const Term& t, const Substitution& s);

/// Converts a triangular substitution into an idempotent one.
Substitution normalize(const Substitution& s);

/// Applies a higher-order callee to extra arguments.
///
/// atom + args      -> structure (or the atom for no args)
/// pred_ref, exact  -> structure over closed ++ extra
/// pred_ref, short  -> pred_ref with the extra args closed
/// Throws ResolutionError for an unbound callee, over-application, or a non-callable.
Term saturate(const Term& callee, std::span<const Term> extra);

/// True if `a` and `b` are equal up to a bijective renaming of variables.
bool is_variant(const Term& a, const Term& b);

}  // namespace hopl
