#include "hopl/engine.hpp"

#include <algorithm>
#include <map>

namespace hopl {

std::string to_string(Port p) {
  switch (p) {
    case Port::call:
      return "call";
    case Port::exit:
      return "exit";
    case Port::fail:
      return "fail";
    case Port::redo:
      return "redo";
  }
  return "?";
}

std::string to_string(EngineOutcome::Status s) {
  switch (s) {
    case EngineOutcome::Status::running:
      return "running";
    case EngineOutcome::Status::exhausted:
      return "exhausted";
    case EngineOutcome::Status::stopped:
      return "stopped";
    case EngineOutcome::Status::limit_hit:
      return "limit_hit";
    case EngineOutcome::Status::error:
      return "error";
    case EngineOutcome::Status::halted:
      return "halted";
  }
  return "?";
}

std::string format_event(const DerivationEvent& e) {
  return to_string(e.port) + " " + std::to_string(e.depth) + " " + print_term(e.goal);
}

std::vector<std::pair<std::string, std::string>> answer_parts(const Answer& a) {
  if (a.bindings.empty()) return {};
  // Print all bindings as one term so unbound variables share canonical names.
  std::vector<Term> values;
  for (const auto& [name, value] : a.bindings) values.push_back(value);
  std::string joined = print_term_canonical(Term::structure("$answer", values));
  // Split the printed argument list back into per-variable values.
  std::vector<std::string> parts;
  std::size_t start = joined.find('(') + 1;
  int depth = 0;
  bool quoted = false;
  for (std::size_t i = start; i + 1 < joined.size(); ++i) {
    char c = joined[i];
    if (quoted) {
      if (c == '\\') {
        ++i;
      } else if (c == '\'') {
        if (i + 1 < joined.size() && joined[i + 1] == '\'')
          ++i;
        else
          quoted = false;
      }
      continue;
    }
    if (c == '\'') quoted = true;
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(joined.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(joined.substr(start, joined.size() - 1 - start));
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < a.bindings.size(); ++i) out.emplace_back(a.bindings[i].first, parts[i]);
  return out;
}

std::string format_answer(const Answer& a) {
  if (a.bindings.empty()) return "true";
  std::string out;
  for (const auto& [name, value] : answer_parts(a)) {
    if (!out.empty()) out += ", ";
    out += name + " = " + value;
  }
  return out;
}

const WrapperInstance* RunState::find_wrapper(const std::string& name) const {
  constexpr std::string_view prefix = "$wrap_";
  if (name.rfind(prefix, 0) != 0) return nullptr;
  std::size_t n = 0;
  try {
    n = std::stoul(name.substr(prefix.size()));
  } catch (...) {
    return nullptr;
  }
  if (n == 0 || n > wrappers.size()) return nullptr;
  return &wrappers[n - 1];
}

const WrapperInstance& RunState::add_wrapper(std::size_t arity, Term wrapped, std::string predprop,
                                             SourceSpan site) {
  WrapperInstance w;
  w.number = wrappers.size() + 1;
  w.name = "$wrap_" + std::to_string(w.number);
  w.arity = arity;
  w.wrapped = std::move(wrapped);
  w.predprop = std::move(predprop);
  w.site = std::move(site);
  wrappers.push_back(std::move(w));
  return wrappers.back();
}

namespace {

constexpr InvocationId kNoInvocation = static_cast<InvocationId>(-1);

struct Cell {
  enum class Kind { goal, exit };
  Kind kind = Kind::goal;
  Goal goal;
  InvocationId inv = kNoInvocation;  // parent for goal cells, owner for exit cells
};

struct ContNode;
using Cont = std::shared_ptr<const ContNode>;
struct ContNode {
  Cell cell;
  Cont next;
};

Cont push(Cell c, Cont next) { return std::make_shared<const ContNode>(ContNode{std::move(c), std::move(next)}); }

struct Invocation {
  enum class State { open, exited, failed };
  Term goal;
  std::size_t depth = 0;
  InvocationId parent = kNoInvocation;
  State state = State::open;
};

struct ChoicePoint {
  std::size_t trail_mark = 0;
  Cont cont;  // continuation after the owner's exit
  InvocationId owner = kNoInvocation;
  std::size_t next_clause = 0;
  std::size_t watermark = 0;  // invocations with id >= watermark are younger
};

struct Stop {
  EngineOutcome outcome;
};

}  // namespace

struct Engine::Impl {
  Engine& e;
  std::vector<std::pair<std::string, Term>> query_vars;
  Cont cont;
  std::vector<Invocation> invs;
  std::vector<ChoicePoint> cps;
  std::map<PredKey, std::vector<const Clause*>> clause_cache;
  bool pending_backtrack = false;
  bool stop_after_answer = false;

  explicit Impl(Engine& engine) : e(engine) {}

  const std::vector<const Clause*>* clauses_for(const PredKey& k) {
    auto it = clause_cache.find(k);
    if (it != clause_cache.end()) return &it->second;
    const Program* sources[2] = {&e.program_, &prelude()};
    for (const Program* p : sources) {
      auto found = p->index.find(k);
      if (found == p->index.end()) continue;
      std::vector<const Clause*> list;
      for (std::size_t i : found->second) list.push_back(&p->clauses[i]);
      return &clause_cache.emplace(k, std::move(list)).first->second;
    }
    return nullptr;
  }

  void emit(Port port, InvocationId id) {
    if (!e.sink_) return;
    const Invocation& inv = invs[id];
    e.sink_(DerivationEvent{port, e.bindings_.resolve(inv.goal), inv.depth, id});
  }

  CallSite site(InvocationId id) { return CallSite{id, invs[id].depth, invs[id].goal}; }

  // With the occurs check off, a cyclic binding is an engine error rather than a failure.
  bool unify(const Term& a, const Term& b) {
    if (!unify_in(e.bindings_, a, b, e.limits_.occurs_check)) return false;
    if (!e.limits_.occurs_check) {
      check_acyclic(a);
      check_acyclic(b);
    }
    return true;
  }

  void check_acyclic(const Term& t) {
    try {
      (void)e.bindings_.resolve(t);
    } catch (const CyclicTermError&) {
      throw ResolutionError(ErrorKind::cyclic_term, "unification created a cyclic term");
    }
  }

  void count_step() {
    if (e.steps_ >= e.limits_.max_steps)
      throw Stop{{EngineOutcome::Status::limit_hit, "max_steps", std::nullopt,
                  "step limit of " + std::to_string(e.limits_.max_steps) + " reached"}};
    ++e.steps_;
  }

  static bool native(const PredKey& k) { return is_native_builtin(k); }

  bool run_native(const Term& goal) {
    const std::string& n = goal.name();
    if (n == "true") return true;
    if (n == "=") return unify(goal.args()[0], goal.args()[1]);
    Term a = e.bindings_.deref(goal.args()[0]);
    if (n == "int") return a.is_int();
    if (n == "atm") return a.is_atom();
    if (n == "var") return a.is_var();
    if (n == "nonvar") return !a.is_var();
    if (n == "ground") return is_ground(e.bindings_.resolve(a));
    if (n == "callable") return a.is_atom() || a.is_struct() || a.is_pred_ref();
    throw ResolutionError(ErrorKind::existence, "unknown builtin " + goal.key().str());
  }

  /// First clause at or after `from` whose head unifies with `goal`; bindings are left untouched.
  std::size_t find_match(const std::vector<const Clause*>& cs, std::size_t from, const Term& goal) {
    for (std::size_t j = from; j < cs.size(); ++j) {
      std::size_t mark = e.bindings_.mark();
      bool ok = unify_in(e.bindings_, goal, cs[j]->head, e.limits_.occurs_check);
      e.bindings_.undo_to(mark);
      if (ok) return j;
    }
    return cs.size();
  }

  /// Resolves `goal` for invocation `id` starting at clause `from`; false when no clause matches.
  bool try_clauses(InvocationId id, const std::vector<const Clause*>& cs, std::size_t from,
                   const Cont& after) {
    const Term goal = invs[id].goal;
    std::size_t i = find_match(cs, from, goal);
    if (i == cs.size()) return false;
    std::size_t j = find_match(cs, i + 1, goal);
    if (j < cs.size())
      cps.push_back(ChoicePoint{e.bindings_.mark(), after, id, j, invs.size()});
    Clause c = rename_apart(*cs[i], e.run_.vars);
    if (!unify(goal, c.head)) throw std::logic_error("head unification changed between probe and commit");
    Cont k = push(Cell{Cell::Kind::exit, {}, id}, after);
    for (std::size_t g = c.body.size(); g-- > 0;) k = push(Cell{Cell::Kind::goal, c.body[g], id}, k);
    cont = k;
    return true;
  }

  void do_exit(InvocationId id) {
    bool halt = false;
    if (e.hooks_) {
      ExitDecision d = e.hooks_->on_exit(e, site(id));
      halt = d.halt;
      for (auto& [a, b] : d.unify) {
        if (!unify(a, b)) {
          backtrack(id);
          return;
        }
      }
    }
    invs[id].state = Invocation::State::exited;
    emit(Port::exit, id);
    if (halt) throw Stop{{EngineOutcome::Status::halted, {}, std::nullopt, "halted by checker"}};
  }

  void call_literal(Term goal, InvocationId parent) {
    count_step();
    goal = e.bindings_.deref(goal);
    std::size_t depth = parent == kNoInvocation ? 0 : invs[parent].depth + 1;
    if (depth > e.limits_.max_depth)
      throw Stop{{EngineOutcome::Status::limit_hit, "max_depth", std::nullopt,
                  "depth limit of " + std::to_string(e.limits_.max_depth) + " reached"}};
    if (goal.is_var()) throw ResolutionError(ErrorKind::instantiation, "goal is unbound");
    if (!goal.is_callable()) throw ResolutionError(ErrorKind::type, "goal is not callable: " + print_term(goal));
    InvocationId id = invs.size();
    invs.push_back(Invocation{goal, depth, parent, Invocation::State::open});
    bool halt = false;
    if (e.hooks_) {
      CallDecision d = e.hooks_->on_call(e, site(id));
      if (d.replacement) invs[id].goal = *d.replacement;
      halt = d.halt;
    }
    emit(Port::call, id);
    if (halt) throw Stop{{EngineOutcome::Status::halted, {}, std::nullopt, "halted by checker"}};

    const Term& g = invs[id].goal;
    PredKey k = g.key();
    Cont after = cont;
    if (native(k)) {
      if (run_native(g)) {
        do_exit(id);
      } else {
        backtrack(id);
      }
      return;
    }
    if (const WrapperInstance* w = e.run_.find_wrapper(k.name); w != nullptr && w->arity == k.arity) {
      std::vector<Term> args(g.args().begin(), g.args().end());
      Cont body = push(Cell{Cell::Kind::exit, {}, id}, after);
      cont = push(Cell{Cell::Kind::goal, Goal::ho_call(w->wrapped, std::move(args)), id}, body);
      return;
    }
    const auto* cs = clauses_for(k);
    if (cs == nullptr) throw ResolutionError(ErrorKind::existence, "unknown procedure " + k.str());
    if (!try_clauses(id, *cs, 0, after)) backtrack(id);
  }

  /// Fails open invocations younger than the newest choicepoint, then resumes it.
  void backtrack(InvocationId failing) {
    while (true) {
      std::size_t watermark = cps.empty() ? 0 : cps.back().watermark;
      for (InvocationId id = failing; id != kNoInvocation && id >= watermark; id = invs[id].parent) {
        if (invs[id].state != Invocation::State::open) continue;
        emit(Port::fail, id);
        if (e.hooks_) e.hooks_->on_fail(e, site(id));
        invs[id].state = Invocation::State::failed;
      }
      if (cps.empty()) throw Stop{{EngineOutcome::Status::exhausted, {}, std::nullopt, {}}};
      ChoicePoint cp = cps.back();
      cps.pop_back();
      e.bindings_.undo_to(cp.trail_mark);
      std::vector<InvocationId> chain;
      for (InvocationId id = cp.owner; id != kNoInvocation && invs[id].state == Invocation::State::exited;
           id = invs[id].parent)
        chain.push_back(id);
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        invs[*it].state = Invocation::State::open;
        if (e.hooks_) e.hooks_->on_redo(e, site(*it));
        emit(Port::redo, *it);
      }
      count_step();
      const auto* cs = clauses_for(invs[cp.owner].goal.key());
      if (try_clauses(cp.owner, *cs, cp.next_clause, cp.cont)) return;
      failing = cp.owner;
    }
  }

  void step() {
    Cell cell = cont->cell;
    cont = cont->next;
    if (cell.kind == Cell::Kind::exit) {
      do_exit(cell.inv);
      return;
    }
    const Goal& g = cell.goal;
    if (g.kind == Goal::Kind::literal) {
      call_literal(g.term, cell.inv);
      return;
    }
    Term callee = e.bindings_.deref(g.callee);
    Term target = saturate(callee, g.extra);
    if (target.is_pred_ref())
      throw ResolutionError(ErrorKind::arity, "call/" + std::to_string(g.extra.size() + 1) + " leaves " +
                                                  print_term(e.bindings_.resolve(target)) +
                                                  " partially applied");
    call_literal(target, cell.inv);
  }

  Answer make_answer() {
    Answer a;
    for (const auto& [name, var] : query_vars) {
      if (!name.empty() && name.front() == '_') continue;
      a.bindings.emplace_back(name, e.bindings_.resolve(var));
    }
    return a;
  }
};

Engine::Engine(const Program& program, EngineLimits limits, RunState& run, CheckHooks* hooks, EventSink sink)
    : program_(program),
      limits_(limits),
      run_(run),
      hooks_(hooks),
      sink_(std::move(sink)),
      impl_(std::make_unique<Impl>(*this)) {}

Engine::~Engine() = default;

void Engine::start(const Query& query) {
  impl_ = std::make_unique<Impl>(*this);
  bindings_ = Bindings{};
  outcome_ = {};
  steps_ = 0;
  solutions_ = 0;
  impl_->query_vars = query.variables;
  Cont k;
  for (std::size_t g = query.goals.size(); g-- > 0;)
    k = push(Cell{Cell::Kind::goal, query.goals[g], kNoInvocation}, k);
  impl_->cont = k;
}

std::optional<Answer> Engine::next() {
  if (outcome_.status != EngineOutcome::Status::running) return std::nullopt;
  Impl& s = *impl_;
  try {
    if (s.stop_after_answer) throw Stop{{EngineOutcome::Status::stopped, {}, std::nullopt, "solution limit reached"}};
    if (s.pending_backtrack) {
      s.pending_backtrack = false;
      s.backtrack(kNoInvocation);
    }
    while (s.cont) s.step();
    s.pending_backtrack = true;
    ++solutions_;
    if (limits_.max_solutions && solutions_ >= *limits_.max_solutions) s.stop_after_answer = true;
    return s.make_answer();
  } catch (const Stop& stop) {
    outcome_ = stop.outcome;
  } catch (const ResolutionError& err) {
    outcome_ = {EngineOutcome::Status::error, {}, err.kind(), err.what()};
  } catch (const CyclicTermError& err) {
    outcome_ = {EngineOutcome::Status::error, {}, ErrorKind::cyclic_term, err.what()};
  }
  return std::nullopt;
}

SolveResult solve(const Program& p, const Query& query, const EngineLimits& limits, CheckHooks* hooks) {
  RunState run(std::max(query.next_var, p.next_var));
  Engine engine(p, limits, run, hooks);
  engine.start(query);
  SolveResult r;
  while (auto a = engine.next()) r.answers.push_back(std::move(*a));
  r.outcome = engine.outcome();
  r.steps = engine.steps();
  return r;
}

SolveResult solve(const Program& p, const std::string& goal_text, const EngineLimits& limits,
                  CheckHooks* hooks) {
  return solve(p, parse_query(goal_text, p.next_var), limits, hooks);
}

std::vector<DerivationEvent> trace(const Program& p, const Query& query, const EngineLimits& limits) {
  std::vector<DerivationEvent> events;
  RunState run(std::max(query.next_var, p.next_var));
  Engine engine(p, limits, run, nullptr, [&](const DerivationEvent& ev) { events.push_back(ev); });
  engine.start(query);
  while (engine.next()) {
  }
  return events;
}

}  // namespace hopl
