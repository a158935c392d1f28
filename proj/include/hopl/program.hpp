#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopl/term.hpp"

namespace hopl {

/// 1-based location of a syntactic object in a source file.
struct SourceSpan {
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;

  bool operator==(const SourceSpan&) const = default;
};

/// A body goal: either a first-order literal or a call/N over a
/// (possibly still unbound) predicate value.
struct Goal {
  enum class Kind { literal, ho_call };
  Kind kind = Kind::literal;
  Term term;                // literal
  Term callee;              // ho_call
  std::vector<Term> extra;  // ho_call

  static Goal literal(Term t) { return {Kind::literal, std::move(t), {}, {}}; }
  static Goal ho_call(Term callee, std::vector<Term> extra) {
    return {Kind::ho_call, {}, std::move(callee), std::move(extra)};
  }
  bool operator==(const Goal&) const = default;
};

struct Clause {
  Term head;
  std::vector<Goal> body;
  SourceSpan span;
};

enum class AssertionStatus { check, trust, true_ };

std::string to_string(AssertionStatus s);

enum class PropFlavor { state_prop, predprop, wrapper_predprop };

/// One property literal in an assertion's pre- or postcondition.
struct PropLiteral {
  Term term;  // atom or structure over the assertion's variables
  PropFlavor flavor = PropFlavor::state_prop;

  PredKey key() const { return term.key(); }
  bool is_predprop() const { return flavor != PropFlavor::state_prop; }
};

struct AssertionOrigin {
  enum class Kind { user, predprop, wrapper };
  Kind kind = Kind::user;
  std::string name;  // predprop name for predprop/wrapper origins

  bool operator==(const AssertionOrigin&) const = default;
};

std::string to_string(AssertionOrigin::Kind k);

struct Assertion {
  std::size_t id = 0;
  AssertionStatus status = AssertionStatus::check;
  /// Head over pairwise-distinct variables. For predprop bodies the functor is `_`.
  Term head;
  std::vector<PropLiteral> pre;
  std::vector<PropLiteral> post;
  SourceSpan span;
  AssertionOrigin origin;
};

/// A predicate property: a bundle of anonymous assertions that any predicate
/// bound to the property's argument must satisfy.
struct PredProp {
  std::string name;
  std::size_t described_arity = 0;
  std::vector<Assertion> anon_assertions;
  bool is_wrapper = false;
  SourceSpan span;
};

/// Check-status assertions of one predicate (or one predprop), in source order.
/// The calls condition is the disjunction of their preconditions.
struct AssertionGroup {
  std::vector<const Assertion*> assertions;
  bool empty() const { return assertions.empty(); }
};

struct Program {
  std::string origin;
  std::string source;
  std::vector<Clause> clauses;
  std::map<PredKey, std::vector<std::size_t>> index;
  std::vector<Assertion> assertions;
  std::map<std::string, PredProp> predprops;
  /// Filled by normalize_assertions; points into `assertions` / `predprops`.
  std::map<PredKey, AssertionGroup> groups;
  std::map<std::string, AssertionGroup> predprop_groups;
  VarId next_var = 1;

  Program() = default;
  Program(const Program& other);
  Program& operator=(const Program& other);
  Program(Program&&) noexcept = default;
  Program& operator=(Program&&) noexcept = default;

  bool defines(const PredKey& k) const { return index.count(k) != 0; }
  const PredProp* find_predprop(const std::string& name) const;
  void add_clause(Clause c);
  /// Rebuilds `groups` and `predprop_groups` from the owned assertions.
  void rebuild_groups();
};

/// Native builtin goals.
bool is_native_builtin(const PredKey& k);
/// Predicates provided without definition (native ones plus the list/member prelude).
bool is_builtin(const PredKey& k);
/// Builtins that may be used as properties in assertions.
bool is_builtin_prop(const PredKey& k);
/// Clauses of the list/1 and member/2 prelude.
const Program& prelude();

/// Returns a variant of `c` whose variables are fresh ids drawn from `counter`.
Clause rename_apart(const Clause& c, VarCounter& counter);

}  // namespace hopl
