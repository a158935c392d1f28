#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopl/engine.hpp"
#include "hopl/parser.hpp"
#include "hopl/program.hpp"

namespace hopl {

/// Load-time validation failure (undefined predprop, unreachable post variable, ...).
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(std::vector<Diagnostic> diags)
      : std::runtime_error(diags.empty() ? "load error" : diags.front().message), diags_(std::move(diags)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Validates assertions and groups the check-status ones per predicate and per predprop.
/// Each group's calls condition is the disjunction of its preconditions.
Program normalize_assertions(Program p);

struct PropOutcome {
  enum class Kind { holds, fails, inconclusive };
  enum class Reason { none, budget, unbound_required };
  Kind kind = Kind::holds;
  Reason reason = Reason::none;

  static PropOutcome holds() { return {Kind::holds, Reason::none}; }
  static PropOutcome fails() { return {Kind::fails, Reason::none}; }
  static PropOutcome inconclusive(Reason r) { return {Kind::inconclusive, r}; }
  bool operator==(const PropOutcome&) const = default;
};

std::string to_string(PropOutcome::Reason r);

inline constexpr std::size_t kDefaultPropBudget = 10'000;

/// Runs a state property goal against a copy of its arguments in an
/// unchecked sub-engine limited to `budget` steps.
///
/// Holds when some answer leaves the arguments uninstantiated; a goal that
/// only succeeds by binding its arguments is inconclusive (unbound_required).
PropOutcome eval_prop(const Program& p, const Term& goal, std::size_t budget, RunState& run);

/// Convenience overload: instantiates `lit` by mapping `head`'s variables to `args`.
PropOutcome eval_prop(const Program& p, const PropLiteral& lit, const Term& head,
                      std::span<const Term> args, std::size_t budget, RunState& run);

enum class CheckKind { calls, success };

std::string to_string(CheckKind k);

/// A predprop literal met while checking, handed to the checking semantics.
struct PredPropRequest {
  const Assertion& assertion;
  const PropLiteral& literal;
  const PredProp& predprop;
  Term value;               // instantiated argument
  std::size_t arg_index;    // position of the literal's variable in the assertion head
  CheckKind phase;
  bool commit;              // false: decide only, no attachment or wrapping
};

struct PredPropVerdict {
  PropOutcome outcome = PropOutcome::holds();
  std::optional<Term> replacement;  // new value for the argument (wrapper reference)
  std::string reason;
};

using PredPropPolicy = std::function<PredPropVerdict(const PredPropRequest&)>;

/// The first-order baseline: a predprop literal is read as callable/1.
PredPropVerdict callable_baseline(const PredPropRequest& req);

/// One definite breach or undecided check, before the run assigns provenance.
struct Finding {
  CheckKind kind = CheckKind::calls;
  std::vector<const Assertion*> assertions;
  std::string reason;
  PropOutcome::Reason inconclusive_reason = PropOutcome::Reason::none;
};

struct CheckResult {
  std::vector<Finding> violations;
  std::vector<Finding> inconclusives;
  /// Per assertion in the group: the precondition outcome (calls checks only).
  std::vector<PropOutcome::Kind> pre_outcomes;
  /// Argument replacements requested by predprop literals, by head position.
  std::vector<std::pair<std::size_t, Term>> replacements;

  bool passed() const { return violations.empty(); }
};

/// Calls condition: passes if ANY precondition holds; one violation if every
/// precondition has a failing literal; inconclusive otherwise.
CheckResult check_calls(const Program& p, const AssertionGroup& group, std::span<const Term> args,
                        std::size_t budget, RunState& run, const PredPropPolicy& policy = callable_baseline);

/// Success conditions: for each assertion whose precondition held at entry,
/// its postcondition must hold on the exit arguments.
///
/// `pre_held` gives the entry outcomes computed by check_calls; when absent
/// the preconditions are re-evaluated on `entry_args` without side effects.
CheckResult check_success(const Program& p, const AssertionGroup& group, std::span<const Term> entry_args,
                          std::span<const Term> exit_args, std::size_t budget, RunState& run,
                          const PredPropPolicy& policy = callable_baseline,
                          const std::vector<PropOutcome::Kind>* pre_held = nullptr);

}  // namespace hopl
