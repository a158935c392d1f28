#include "hopl/rtcheck.hpp"

#include <algorithm>

namespace hopl {

std::string to_string(Semantics s) {
  switch (s) {
    case Semantics::off:
      return "off";
    case Semantics::fo:
      return "fo";
    case Semantics::tight:
      return "tight";
    case Semantics::loose:
      return "loose";
  }
  return "?";
}

std::string to_string(ErrorMode m) { return m == ErrorMode::fail_fast ? "fail_fast" : "gather_all"; }

std::optional<Semantics> parse_semantics(std::string_view s) {
  for (Semantics x : {Semantics::off, Semantics::fo, Semantics::tight, Semantics::loose})
    if (to_string(x) == s) return x;
  return std::nullopt;
}

std::optional<ErrorMode> parse_error_mode(std::string_view s) {
  if (s == "fail-fast" || s == "fail_fast") return ErrorMode::fail_fast;
  if (s == "gather-all" || s == "gather_all") return ErrorMode::gather_all;
  return std::nullopt;
}

std::string to_string(CheckSite::Kind k) {
  switch (k) {
    case CheckSite::Kind::direct:
      return "direct";
    case CheckSite::Kind::tight_registry:
      return "tight_registry";
    case CheckSite::Kind::wrapper:
      return "wrapper";
  }
  return "?";
}

bool TightRegistry::attach(const PredKey& key, const std::string& predprop) {
  bool added = map_[key].insert(predprop).second;
  if (added) ++count_;
  return added;
}

const std::set<std::string>* TightRegistry::find(const PredKey& key) const {
  auto it = map_.find(key);
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<std::pair<PredKey, std::string>> TightRegistry::entries() const {
  std::vector<std::pair<PredKey, std::string>> out;
  for (const auto& [k, names] : map_)
    for (const std::string& n : names) out.emplace_back(k, n);
  return out;
}

Checker::Checker(const Program& p, CheckConfig cfg) : program_(p), cfg_(cfg) {}

bool Checker::wraps(const PredProp& pp) const {
  if (cfg_.semantics == Semantics::loose) return true;
  return cfg_.semantics == Semantics::tight && pp.is_wrapper && cfg_.respect_wrapper_predprops;
}

namespace {

/// True if `value` already goes through a wrapper for `predprop`.
bool already_wrapped(const RunState& run, Term value, const std::string& predprop) {
  while (value.is_pred_ref() && value.args().empty()) {
    const WrapperInstance* w = run.find_wrapper(value.name());
    if (w == nullptr || w->arity != value.arity()) return false;
    if (w->predprop == predprop) return true;
    value = w->wrapped;
  }
  return false;
}

}  // namespace

PredPropVerdict Checker::decide(Engine& e, const PredPropRequest& req, const SourceSpan& site) {
  if (cfg_.semantics == Semantics::fo) return callable_baseline(req);
  const Term& v = req.value;
  const std::size_t k = req.predprop.described_arity;
  const std::string lit = req.predprop.name + "(" + print_term_canonical(v) + ")";
  PredKey target;
  if (v.is_var()) return {PropOutcome::fails(), std::nullopt, lit + ": instantiation error, unbound predicate argument"};
  if (v.is_atom()) {
    target = {v.name(), k};
  } else if (v.is_pred_ref()) {
    std::size_t open = v.arity() - v.args().size();
    if (open != k)
      return {PropOutcome::fails(), std::nullopt,
              lit + ": arity mismatch, expected a predicate of arity " + std::to_string(k) + " but it takes " +
                  std::to_string(open)};
    target = {v.name(), v.arity()};
  } else {
    return {PropOutcome::fails(), std::nullopt, lit + ": type error, not a predicate"};
  }
  if (wraps(req.predprop)) {
    if (!req.commit || already_wrapped(e.run(), v, req.predprop.name)) return {};
    const WrapperInstance& w = e.run().add_wrapper(k, v, req.predprop.name, site);
    return {PropOutcome::holds(), Term::pred_ref(w.name, k, {}), {}};
  }
  if (req.commit) registry_.attach(target, req.predprop.name);
  return {};
}

PredPropPolicy Checker::policy_for(Engine& e) {
  return [this, &e](const PredPropRequest& req) { return decide(e, req, req.assertion.span); };
}

bool Checker::record(const Finding& f, const Pending& g, const std::string& culprit, const std::string& entry,
                     const std::optional<std::string>& exit) {
  if (halted_) return false;
  const Assertion& first = *f.assertions.front();
  std::vector<std::size_t> ids;
  for (const Assertion* a : f.assertions) ids.push_back(a->id);
  if (f.inconclusive_reason != PropOutcome::Reason::none) {
    Inconclusive r;
    r.seq = ++seq_;
    r.kind = f.kind;
    r.assertion_ids = std::move(ids);
    r.origin = first.origin;
    r.pred_key = g.pred_key;
    r.check_site = g.site;
    r.culprit = culprit;
    r.span = first.span;
    r.reason = f.inconclusive_reason;
    r.detail = f.reason;
    inconclusives_.push_back(std::move(r));
    return false;
  }
  Violation v;
  v.seq = ++seq_;
  v.kind = f.kind;
  v.assertion_id = first.id;
  v.assertion_ids = std::move(ids);
  v.origin = first.origin;
  v.pred_key = g.pred_key;
  v.check_site = g.site;
  v.culprit = culprit;
  v.entry = entry;
  v.exit = exit;
  v.span = first.span;
  v.reason = f.reason;
  violations_.push_back(std::move(v));
  if (cfg_.error_mode == ErrorMode::fail_fast) halted_ = true;
  return halted_;
}

CallDecision Checker::on_call(Engine& e, const CallSite& site) {
  if (halted_) return {};
  const Term goal = e.deref(site.goal);
  const Term entry = e.resolve(goal);
  const PredKey key = goal.key();
  const std::span<const Term> args = entry.args();
  RunState& run = e.run();
  PredPropPolicy policy = policy_for(e);

  Invocation inv;
  inv.entry = entry;
  std::map<std::size_t, Term> replacements;
  const std::string entry_text = print_term_canonical(entry);
  bool halt = false;

  auto check = [&](const AssertionGroup& group, CheckSite where, std::size_t offset, PredKey reported,
                   const std::string& culprit) {
    if (halt || group.empty()) return;
    CheckResult r = check_calls(program_, group, args.subspan(offset), cfg_.prop_budget, run, policy);
    Pending pending{&group, where, offset, reported, r.pre_outcomes};
    const std::string& entry_seen = where.kind == CheckSite::Kind::wrapper ? culprit : entry_text;
    for (const Finding& f : r.violations) halt = record(f, pending, culprit, entry_seen, std::nullopt) || halt;
    for (const Finding& f : r.inconclusives) record(f, pending, culprit, entry_seen, std::nullopt);
    for (auto& [pos, t] : r.replacements) replacements.insert_or_assign(offset + pos, t);
    inv.groups.push_back(std::move(pending));
  };

  if (auto it = program_.groups.find(key); it != program_.groups.end())
    check(it->second, {CheckSite::Kind::direct, 0}, 0, key, entry_text);

  if (cfg_.semantics == Semantics::tight) {
    if (const auto* attached = registry_.find(key)) {
      std::vector<std::string> names(attached->begin(), attached->end());
      for (const std::string& name : names) {
        const PredProp* pp = program_.find_predprop(name);
        if (pp == nullptr || pp->described_arity > key.arity) continue;
        check(program_.predprop_groups.at(name), {CheckSite::Kind::tight_registry, 0},
              key.arity - pp->described_arity, key, entry_text);
      }
    }
  }

  if (const WrapperInstance* w = run.find_wrapper(key.name); w != nullptr && w->arity == key.arity) {
    Term target = saturate(e.resolve(w->wrapped), args);
    check(program_.predprop_groups.at(w->predprop), {CheckSite::Kind::wrapper, w->number}, 0, target.key(),
          print_term_canonical(target));
  }

  if (inv.groups.empty()) return {CallDecision{std::nullopt, halt}};

  // Output arguments whose postcondition may wrap them are routed through a
  // fresh variable; the caller's variable is bound at the Exit port.
  std::vector<Term> new_args(goal.args().begin(), goal.args().end());
  for (const Pending& g : inv.groups) {
    for (std::size_t i = 0; i < g.group->assertions.size(); ++i) {
      if (g.pre[i] != PropOutcome::Kind::holds) continue;
      const Assertion& a = *g.group->assertions[i];
      for (const PropLiteral& lit : a.post) {
        if (!lit.is_predprop() || !wraps(*program_.find_predprop(lit.key().name))) continue;
        auto hargs = a.head.args();
        std::size_t pos = g.offset;
        while (pos - g.offset < hargs.size() && hargs[pos - g.offset].var_id() != lit.term.args()[0].var_id()) ++pos;
        Term current = e.deref(new_args[pos]);
        if (!current.is_var() || replacements.count(pos)) continue;
        bool seen = std::any_of(inv.rewires.begin(), inv.rewires.end(), [&](const auto& r) { return r.first == pos; });
        if (seen) continue;
        inv.rewires.emplace_back(pos, current);
        new_args[pos] = e.fresh_var();
      }
    }
  }
  for (auto& [pos, t] : replacements) new_args[pos] = t;

  CallDecision d;
  d.halt = halt;
  if (!replacements.empty() || !inv.rewires.empty()) {
    d.replacement = Term::structure(goal.name(), new_args);
    inv.goal = *d.replacement;
  } else {
    inv.goal = goal;
  }
  invocations_.insert_or_assign(site.invocation, std::move(inv));
  return d;
}

ExitDecision Checker::on_exit(Engine& e, const CallSite& site) {
  ExitDecision d;
  auto it = invocations_.find(site.invocation);
  if (it == invocations_.end() || halted_) return d;
  const Invocation& inv = it->second;
  const Term exit = e.resolve(inv.goal);
  const std::string entry_text = print_term_canonical(inv.entry);
  const std::string exit_text = print_term_canonical(exit);
  PredPropPolicy policy = policy_for(e);
  std::map<std::size_t, Term> replacements;

  for (const Pending& g : inv.groups) {
    if (d.halt) break;
    CheckResult r = check_success(program_, *g.group, inv.entry.args().subspan(g.offset), exit.args().subspan(g.offset),
                                  cfg_.prop_budget, e.run(), policy, &g.pre);
    std::string culprit = exit_text;
    std::string entry_seen = entry_text;
    if (g.site.kind == CheckSite::Kind::wrapper) {
      const WrapperInstance* w = e.run().find_wrapper(inv.goal.name());
      Term wrapped = e.resolve(w->wrapped);
      culprit = print_term_canonical(saturate(wrapped, exit.args()));
      entry_seen = print_term_canonical(saturate(wrapped, inv.entry.args()));
    }
    for (const Finding& f : r.violations) d.halt = record(f, g, culprit, entry_seen, culprit) || d.halt;
    for (const Finding& f : r.inconclusives) record(f, g, culprit, entry_seen, culprit);
    for (auto& [pos, t] : r.replacements) replacements.insert_or_assign(g.offset + pos, t);
  }
  for (const auto& [pos, caller_var] : inv.rewires) {
    auto rep = replacements.find(pos);
    d.unify.emplace_back(caller_var, rep != replacements.end() ? rep->second : inv.goal.args()[pos]);
  }
  return d;
}

Report run_checked(const Program& p, const Query& query, const CheckConfig& cfg, const EngineLimits& limits,
                   EventSink sink) {
  auto started = std::chrono::steady_clock::now();
  RunState run(std::max(query.next_var, p.next_var));
  std::optional<Checker> checker;
  if (cfg.semantics != Semantics::off) checker.emplace(p, cfg);
  Engine engine(p, limits, run, checker ? &*checker : nullptr, std::move(sink));
  engine.start(query);

  Report r;
  r.version = kToolVersion;
  r.file = p.origin;
  r.config = cfg;
  r.limits = limits;
  while (auto a = engine.next()) r.answers.push_back(std::move(*a));
  r.outcome = engine.outcome();
  r.steps = engine.steps();
  if (checker) {
    r.violations = checker->violations();
    r.inconclusives = checker->inconclusives();
    r.attachments = checker->registry().entries();
  }
  r.wrappers = run.wrappers;
  r.wall_clock_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

Report run_checked(const Program& p, const std::string& goal, const CheckConfig& cfg, const EngineLimits& limits,
                   EventSink sink) {
  Report r = run_checked(p, parse_query(goal, p.next_var), cfg, limits, std::move(sink));
  r.goal = goal;
  return r;
}

}  // namespace hopl
