#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hopl/parser.hpp"
#include "hopl/program.hpp"
#include "hopl/unify.hpp"

namespace hopl {

struct EngineLimits {
  std::size_t max_steps = 1'000'000;
  std::size_t max_depth = 10'000;
  std::optional<std::size_t> max_solutions;  // nullopt: unlimited
  bool occurs_check = true;
};

/// An internal predicate minted for loose (wrapper-based) checking.
struct WrapperInstance {
  std::size_t number = 0;
  std::string name;  // '$wrap_<number>'
  std::size_t arity = 0;
  Term wrapped;
  std::string predprop;
  SourceSpan site;
};

/// State shared by the outer engine of one run and every property sub-engine
/// it spawns: the variable id source and the wrapper table.
struct RunState {
  VarCounter vars;
  std::vector<WrapperInstance> wrappers;

  explicit RunState(VarId first) : vars(first) {}
  const WrapperInstance* find_wrapper(const std::string& name) const;
  const WrapperInstance& add_wrapper(std::size_t arity, Term wrapped, std::string predprop,
                                     SourceSpan site);
};

using InvocationId = std::size_t;

enum class Port { call, exit, fail, redo };

std::string to_string(Port p);

/// One port of the box model. `goal` is instantiated as of the event.
struct DerivationEvent {
  Port port = Port::call;
  Term goal;
  std::size_t depth = 0;
  InvocationId invocation = 0;

  bool operator==(const DerivationEvent& o) const {
    return port == o.port && depth == o.depth && invocation == o.invocation && goal == o.goal;
  }
};

std::string format_event(const DerivationEvent& e);

/// Binding store with an undo trail; exclusively owned by one engine.
class Bindings {
 public:
  Term deref_one(const Term& t) const {
    if (!t.is_var()) return t;
    auto it = map_.find(t.var_id());
    return it == map_.end() ? t : it->second;
  }
  Term deref(Term t) const {
    while (t.is_var()) {
      auto it = map_.find(t.var_id());
      if (it == map_.end()) break;
      t = it->second;
    }
    return t;
  }
  void bind(VarId v, Term t) {
    map_.insert_or_assign(v, std::move(t));
    trail_.push_back(v);
  }
  std::size_t mark() const { return trail_.size(); }
  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      map_.erase(trail_.back());
      trail_.pop_back();
    }
  }
  bool is_bound(VarId v) const { return map_.count(v) != 0; }
  Term resolve(const Term& t) const { return resolve_in(*this, t); }

 private:
  std::unordered_map<VarId, Term> map_;
  std::vector<VarId> trail_;
};

class Engine;

/// What a hook asks the engine to do at a Call port.
struct CallDecision {
  std::optional<Term> replacement;  // goal to resolve instead of the original
  bool halt = false;
};

/// What a hook asks the engine to do at an Exit port.
struct ExitDecision {
  std::vector<std::pair<Term, Term>> unify;  // performed before the Exit event
  bool halt = false;
};

/// Call-site view handed to hooks.
struct CallSite {
  InvocationId invocation;
  std::size_t depth;
  const Term& goal;  // live (not instantiated); use Engine::resolve
};

/// Observer/controller of an engine run. The default hooks are inert.
class CheckHooks {
 public:
  virtual ~CheckHooks() = default;
  virtual CallDecision on_call(Engine&, const CallSite&) { return {}; }
  virtual ExitDecision on_exit(Engine&, const CallSite&) { return {}; }
  virtual void on_fail(Engine&, const CallSite&) {}
  virtual void on_redo(Engine&, const CallSite&) {}
};

using EventSink = std::function<void(const DerivationEvent&)>;

/// A restriction of the final substitution to the query's named variables.
struct Answer {
  std::vector<std::pair<std::string, Term>> bindings;
};

/// Prints `X = a, Y = _G0`; unbound variables are named canonically per answer.
std::string format_answer(const Answer& a);
/// The per-variable values of format_answer, in query order.
std::vector<std::pair<std::string, std::string>> answer_parts(const Answer& a);

struct EngineOutcome {
  enum class Status { running, exhausted, stopped, limit_hit, error, halted };
  Status status = Status::running;
  std::string limit;  // "max_steps" | "max_depth" for limit_hit
  std::optional<ErrorKind> error;
  std::string message;

  bool operator==(const EngineOutcome&) const = default;
};

std::string to_string(EngineOutcome::Status s);

/// Depth-first, left-to-right SLD resolution with call/N, a trail-based
/// binding store, and the 4-port box model.
class Engine {
 public:
  Engine(const Program& program, EngineLimits limits, RunState& run, CheckHooks* hooks = nullptr,
         EventSink sink = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void start(const Query& query);
  /// Runs to the next answer; nullopt once the run has terminated (see outcome()).
  std::optional<Answer> next();
  const EngineOutcome& outcome() const { return outcome_; }
  std::size_t steps() const { return steps_; }

  // Services for hooks.
  Term resolve(const Term& t) const { return bindings_.resolve(t); }
  Term deref(const Term& t) const { return bindings_.deref(t); }
  Term fresh_var() { return Term::var(run_.vars.fresh()); }
  RunState& run() { return run_; }
  const Program& program() const { return program_; }
  const EngineLimits& limits() const { return limits_; }

 private:
  struct Impl;
  const Program& program_;
  EngineLimits limits_;
  RunState& run_;
  CheckHooks* hooks_;
  EventSink sink_;
  Bindings bindings_;
  EngineOutcome outcome_;
  std::size_t steps_ = 0;
  std::size_t solutions_ = 0;
  std::unique_ptr<Impl> impl_;
};

struct SolveResult {
  std::vector<Answer> answers;
  EngineOutcome outcome;
  std::size_t steps = 0;
};

/// Runs `query` to completion (or to a limit).
SolveResult solve(const Program& p, const Query& query, const EngineLimits& limits = {},
                  CheckHooks* hooks = nullptr);
SolveResult solve(const Program& p, const std::string& goal_text, const EngineLimits& limits = {},
                  CheckHooks* hooks = nullptr);

/// Same control behavior as solve; returns the recorded event stream.
std::vector<DerivationEvent> trace(const Program& p, const Query& query,
                                   const EngineLimits& limits = {});

}  // namespace hopl
