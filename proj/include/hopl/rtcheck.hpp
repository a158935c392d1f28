#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hopl/assertions.hpp"
#include "hopl/engine.hpp"

namespace hopl {

enum class Semantics { off, fo, tight, loose };
enum class ErrorMode { fail_fast, gather_all };

std::string to_string(Semantics s);
std::string to_string(ErrorMode m);
std::optional<Semantics> parse_semantics(std::string_view s);
/// Accepts both `fail-fast` (CLI spelling) and `fail_fast`.
std::optional<ErrorMode> parse_error_mode(std::string_view s);

struct CheckConfig {
  Semantics semantics = Semantics::tight;
  ErrorMode error_mode = ErrorMode::gather_all;
  std::size_t prop_budget = kDefaultPropBudget;
  bool respect_wrapper_predprops = true;
};

struct CheckSite {
  enum class Kind { direct, tight_registry, wrapper };
  Kind kind = Kind::direct;
  std::size_t instance = 0;  // wrapper number for Kind::wrapper

  bool operator==(const CheckSite&) const = default;
};

std::string to_string(CheckSite::Kind k);

struct Violation {
  std::size_t seq = 0;
  CheckKind kind = CheckKind::calls;
  std::size_t assertion_id = 0;  // first of assertion_ids
  std::vector<std::size_t> assertion_ids;
  AssertionOrigin origin;
  PredKey pred_key;
  CheckSite check_site;
  std::string culprit;              // goal as called (calls) or as exited (success)
  std::string entry;                // goal at the Call port
  std::optional<std::string> exit;  // goal at the Exit port (success only)
  SourceSpan span;                  // span of the first assertion
  std::string reason;
};

struct Inconclusive {
  std::size_t seq = 0;
  CheckKind kind = CheckKind::calls;
  std::vector<std::size_t> assertion_ids;
  AssertionOrigin origin;
  PredKey pred_key;
  CheckSite check_site;
  std::string culprit;
  SourceSpan span;
  PropOutcome::Reason reason = PropOutcome::Reason::none;
  std::string detail;
};

/// Predprops attached to predicates under tight checking. Attachments are
/// never removed during a run, not even on backtracking.
class TightRegistry {
 public:
  /// Returns true if the pair was new.
  bool attach(const PredKey& key, const std::string& predprop);
  const std::set<std::string>* find(const PredKey& key) const;
  std::size_t size() const { return count_; }
  std::vector<std::pair<PredKey, std::string>> entries() const;

 private:
  std::map<PredKey, std::set<std::string>> map_;
  std::size_t count_ = 0;
};

/// The checking hooks for one run.
class Checker : public CheckHooks {
 public:
  Checker(const Program& p, CheckConfig cfg);

  CallDecision on_call(Engine& e, const CallSite& site) override;
  ExitDecision on_exit(Engine& e, const CallSite& site) override;

  const std::vector<Violation>& violations() const { return violations_; }
  const std::vector<Inconclusive>& inconclusives() const { return inconclusives_; }
  const TightRegistry& registry() const { return registry_; }

 private:
  /// One assertion group checked at a Call port, kept for the matching Exit ports.
  struct Pending {
    const AssertionGroup* group = nullptr;
    CheckSite site;
    std::size_t offset = 0;  // first goal argument covered by the group's heads
    PredKey pred_key;
    std::vector<PropOutcome::Kind> pre;
  };
  struct Invocation {
    Term goal;   // goal handed to resolution (after any rewrite)
    Term entry;  // resolved goal at the Call port, before any rewrite
    std::vector<Pending> groups;
    std::vector<std::pair<std::size_t, Term>> rewires;  // argument position, caller's variable
  };

  PredPropPolicy policy_for(Engine& e);
  PredPropVerdict decide(Engine& e, const PredPropRequest& req, const SourceSpan& site);
  bool wraps(const PredProp& pp) const;
  bool record(const Finding& f, const Pending& g, const std::string& culprit, const std::string& entry,
              const std::optional<std::string>& exit);

  const Program& program_;
  CheckConfig cfg_;
  TightRegistry registry_;
  std::vector<Violation> violations_;
  std::vector<Inconclusive> inconclusives_;
  std::map<InvocationId, Invocation> invocations_;
  std::size_t seq_ = 0;
  bool halted_ = false;
};

struct Report {
  std::string version;
  std::string file;
  std::string goal;
  CheckConfig config;
  EngineLimits limits;
  std::vector<Answer> answers;
  std::vector<Violation> violations;  // ordered by seq
  std::vector<Inconclusive> inconclusives;
  std::vector<WrapperInstance> wrappers;
  std::vector<std::pair<PredKey, std::string>> attachments;
  EngineOutcome outcome;
  std::size_t steps = 0;
  double wall_clock_ms = 0;
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs `query` under the given checking configuration and collects the report.
/// With Semantics::off no hooks are installed.
Report run_checked(const Program& p, const Query& query, const CheckConfig& cfg,
                   const EngineLimits& limits = {}, EventSink sink = {});
Report run_checked(const Program& p, const std::string& goal, const CheckConfig& cfg,
                   const EngineLimits& limits = {}, EventSink sink = {});

}  // namespace hopl
