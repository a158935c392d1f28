#include "hopl/assertions.hpp"

#include <algorithm>
#include <set>

namespace hopl {

std::string to_string(PropOutcome::Reason r) {
  switch (r) {
    case PropOutcome::Reason::none:
      return "none";
    case PropOutcome::Reason::budget:
      return "budget";
    case PropOutcome::Reason::unbound_required:
      return "unbound_required";
  }
  return "?";
}

std::string to_string(CheckKind k) { return k == CheckKind::calls ? "calls" : "success"; }

namespace {

void validate_assertion(const Program& p, const Assertion& a, std::vector<Diagnostic>& errors) {
  std::set<VarId> known;
  for (const Term& arg : a.head.args()) {
    if (!arg.is_var() || !known.insert(arg.var_id()).second)
      errors.push_back({a.span, "assertion head arguments must be pairwise distinct variables"});
  }
  std::set<VarId> head_vars = known;
  auto check_literal = [&](const PropLiteral& lit) {
    PredKey k = lit.key();
    if (lit.is_predprop()) {
      const PredProp* pp = k.arity == 1 ? p.find_predprop(k.name) : nullptr;
      if (pp == nullptr) {
        errors.push_back({a.span, "reference to undefined predprop '" + k.str() + "'"});
      } else {
        const Term& arg = lit.term.args()[0];
        if (!arg.is_var() || head_vars.count(arg.var_id()) == 0)
          errors.push_back({a.span, "predprop literal " + print_term(lit.term) +
                                        " must apply to a head argument variable"});
      }
    } else if (!is_builtin_prop(k) && !p.defines(k)) {
      errors.push_back({a.span, "undefined property '" + k.str() + "'"});
    }
  };
  for (const PropLiteral& lit : a.pre) {
    check_literal(lit);
    for (VarId v : variables_of(lit.term)) known.insert(v);
  }
  for (const PropLiteral& lit : a.post) {
    check_literal(lit);
    for (VarId v : variables_of(lit.term)) {
      if (known.count(v) == 0)
        errors.push_back({a.span, "postcondition variable " + print_term(Term::var(v, "")) +
                                      " in " + print_term(lit.term) +
                                      " does not occur in the head or the precondition"});
    }
  }
}

/// Maps head variables to the given argument values.
Substitution bind_head(const Term& head, std::span<const Term> args) {
  Substitution s;
  auto hargs = head.args();
  for (std::size_t i = 0; i < hargs.size() && i < args.size(); ++i) s.bind(hargs[i].var_id(), args[i]);
  return s;
}

std::size_t head_position(const Term& head, const Term& var) {
  auto hargs = head.args();
  for (std::size_t i = 0; i < hargs.size(); ++i)
    if (hargs[i].var_id() == var.var_id()) return i;
  return hargs.size();
}

std::optional<PropOutcome> native_prop(const Term& goal) {
  PredKey k = goal.key();
  if (k.arity == 0 && k.name == "true") return PropOutcome::holds();
  if (k.arity != 1 || !is_native_builtin(k)) return std::nullopt;
  const Term& a = goal.args()[0];
  bool r = false;
  if (k.name == "int")
    r = a.is_int();
  else if (k.name == "atm")
    r = a.is_atom();
  else if (k.name == "var")
    r = a.is_var();
  else if (k.name == "nonvar")
    r = !a.is_var();
  else if (k.name == "ground")
    r = is_ground(a);
  else if (k.name == "callable")
    r = a.is_atom() || a.is_struct() || a.is_pred_ref();
  return r ? PropOutcome::holds() : PropOutcome::fails();
}

struct GroupEval {
  PropOutcome::Kind outcome = PropOutcome::Kind::holds;
  PropOutcome::Reason inconclusive_reason = PropOutcome::Reason::none;
  std::string failed;  // description of the failing literal
  std::vector<std::pair<std::size_t, Term>> replacements;
};

GroupEval eval_literals(const Program& p, const Assertion& a, const std::vector<PropLiteral>& lits,
                        std::span<const Term> args, std::size_t budget, RunState& run,
                        const PredPropPolicy& policy, CheckKind phase, bool commit) {
  GroupEval g;
  Substitution s = bind_head(a.head, args);
  for (const PropLiteral& lit : lits) {
    if (lit.is_predprop()) continue;
    Term goal = apply_subst(lit.term, s);
    PropOutcome o = eval_prop(p, goal, budget, run);
    if (o.kind == PropOutcome::Kind::fails) {
      g.outcome = PropOutcome::Kind::fails;
      g.failed = print_term_canonical(goal);
      return g;
    }
    if (o.kind == PropOutcome::Kind::inconclusive && g.outcome == PropOutcome::Kind::holds) {
      g.outcome = PropOutcome::Kind::inconclusive;
      g.inconclusive_reason = o.reason;
      g.failed = print_term_canonical(goal);
    }
  }
  bool side_effects = commit && g.outcome == PropOutcome::Kind::holds;
  for (const PropLiteral& lit : lits) {
    if (!lit.is_predprop()) continue;
    const PredProp* pp = p.find_predprop(lit.key().name);
    if (pp == nullptr) throw std::logic_error("unnormalized predprop literal " + print_term(lit.term));
    const Term& var = lit.term.args()[0];
    std::size_t pos = head_position(a.head, var);
    Term value = pos < args.size() ? args[pos] : var;
    PredPropVerdict v = policy(PredPropRequest{a, lit, *pp, value, pos, phase, side_effects});
    if (v.outcome.kind == PropOutcome::Kind::fails) {
      g.outcome = PropOutcome::Kind::fails;
      g.failed = v.reason.empty() ? print_term_canonical(apply_subst(lit.term, s)) : v.reason;
      g.replacements.clear();
      return g;
    }
    if (v.outcome.kind == PropOutcome::Kind::inconclusive && g.outcome == PropOutcome::Kind::holds) {
      g.outcome = PropOutcome::Kind::inconclusive;
      g.inconclusive_reason = v.outcome.reason;
      g.failed = v.reason;
    }
    if (v.replacement && side_effects) g.replacements.emplace_back(pos, *v.replacement);
  }
  if (g.outcome != PropOutcome::Kind::holds) g.replacements.clear();
  return g;
}

}  // namespace

Program normalize_assertions(Program p) {
  std::vector<Diagnostic> errors;
  for (const Assertion& a : p.assertions) {
    if (!p.defines(a.head.key()) && !is_builtin(a.head.key()))
      errors.push_back({a.span, "assertion on undefined predicate " + a.head.key().str()});
    validate_assertion(p, a, errors);
  }
  for (const auto& [name, pp] : p.predprops) {
    if (pp.anon_assertions.empty()) errors.push_back({pp.span, "predprop '" + name + "' has no assertions"});
    for (const Assertion& a : pp.anon_assertions) {
      if (a.head.args().size() != pp.described_arity)
        errors.push_back({a.span, "predprop assertion arity does not match the described arity"});
      validate_assertion(p, a, errors);
    }
  }
  if (!errors.empty()) throw LoadError(std::move(errors));
  p.rebuild_groups();
  return p;
}

PropOutcome eval_prop(const Program& p, const Term& goal, std::size_t budget, RunState& run) {
  if (auto fast = native_prop(goal)) return *fast;
  EngineLimits limits;
  limits.max_steps = budget;
  Engine sub(p, limits, run);
  Query q;
  q.goals.push_back(Goal::literal(goal));
  sub.start(q);
  const std::vector<VarId> vars = variables_of(goal);
  auto untouched = [&] {
    for (VarId v : vars) {
      Term d = sub.deref(Term::var(v));
      if (!d.is_var() || d.var_id() != v) return false;
    }
    return true;
  };
  bool saw_binding = false;
  while (sub.next()) {
    if (untouched()) return PropOutcome::holds();
    saw_binding = true;
  }
  switch (sub.outcome().status) {
    case EngineOutcome::Status::limit_hit:
      return PropOutcome::inconclusive(PropOutcome::Reason::budget);
    case EngineOutcome::Status::error:
      return PropOutcome::fails();
    default:
      break;
  }
  return saw_binding ? PropOutcome::inconclusive(PropOutcome::Reason::unbound_required) : PropOutcome::fails();
}

PropOutcome eval_prop(const Program& p, const PropLiteral& lit, const Term& head, std::span<const Term> args,
                      std::size_t budget, RunState& run) {
  return eval_prop(p, apply_subst(lit.term, bind_head(head, args)), budget, run);
}

PredPropVerdict callable_baseline(const PredPropRequest& req) {
  const Term& v = req.value;
  if (v.is_atom() || v.is_struct() || v.is_pred_ref()) return {};
  return {PropOutcome::fails(), std::nullopt, "callable(" + print_term_canonical(v) + ")"};
}

CheckResult check_calls(const Program& p, const AssertionGroup& group, std::span<const Term> args,
                        std::size_t budget, RunState& run, const PredPropPolicy& policy) {
  CheckResult r;
  if (group.empty()) return r;
  std::vector<std::string> failures;
  std::optional<std::pair<PropOutcome::Reason, std::string>> undecided;
  bool any_holds = false;
  for (const Assertion* a : group.assertions) {
    GroupEval g = eval_literals(p, *a, a->pre, args, budget, run, policy, CheckKind::calls, true);
    r.pre_outcomes.push_back(g.outcome);
    switch (g.outcome) {
      case PropOutcome::Kind::holds:
        any_holds = true;
        r.replacements.insert(r.replacements.end(), g.replacements.begin(), g.replacements.end());
        break;
      case PropOutcome::Kind::fails:
        failures.push_back(g.failed);
        break;
      case PropOutcome::Kind::inconclusive:
        if (!undecided) undecided.emplace(g.inconclusive_reason, g.failed);
        break;
    }
  }
  if (any_holds) return r;
  Finding f;
  f.kind = CheckKind::calls;
  f.assertions = group.assertions;
  if (undecided) {
    f.inconclusive_reason = undecided->first;
    f.reason = undecided->second;
    r.inconclusives.push_back(std::move(f));
    return r;
  }
  for (std::size_t i = 0; i < failures.size(); ++i) f.reason += (i ? " | " : "") + failures[i];
  r.violations.push_back(std::move(f));
  return r;
}

CheckResult check_success(const Program& p, const AssertionGroup& group, std::span<const Term> entry_args,
                          std::span<const Term> exit_args, std::size_t budget, RunState& run,
                          const PredPropPolicy& policy, const std::vector<PropOutcome::Kind>* pre_held) {
  CheckResult r;
  for (std::size_t i = 0; i < group.assertions.size(); ++i) {
    const Assertion& a = *group.assertions[i];
    if (a.post.empty()) continue;
    PropOutcome::Kind pre;
    if (pre_held != nullptr && i < pre_held->size()) {
      pre = (*pre_held)[i];
    } else {
      pre = eval_literals(p, a, a.pre, entry_args, budget, run, policy, CheckKind::calls, false).outcome;
    }
    if (pre != PropOutcome::Kind::holds) continue;
    GroupEval g = eval_literals(p, a, a.post, exit_args, budget, run, policy, CheckKind::success, true);
    Finding f;
    f.kind = CheckKind::success;
    f.assertions = {&a};
    f.reason = g.failed;
    if (g.outcome == PropOutcome::Kind::fails) {
      r.violations.push_back(std::move(f));
    } else if (g.outcome == PropOutcome::Kind::inconclusive) {
      f.inconclusive_reason = g.inconclusive_reason;
      r.inconclusives.push_back(std::move(f));
    } else {
      r.replacements.insert(r.replacements.end(), g.replacements.begin(), g.replacements.end());
    }
  }
  return r;
}

}  // namespace hopl
