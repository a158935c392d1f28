#include "hopl/report.hpp"

#include <map>
#include <sstream>

namespace hopl {

ExitCode exit_code(const Report& r) {
  if (!r.violations.empty()) return ExitCode::violations;
  if (r.outcome.status == EngineOutcome::Status::limit_hit || r.outcome.status == EngineOutcome::Status::error)
    return ExitCode::limit;
  return ExitCode::ok;
}

Json to_json(const SourceSpan& s) {
  return Json{{"file", s.file}, {"line", s.line}, {"column", s.column}, {"length", s.length}};
}

namespace {

Json origin_json(const AssertionOrigin& o) {
  Json j{{"kind", to_string(o.kind)}};
  j["name"] = o.name.empty() ? Json(nullptr) : Json(o.name);
  return j;
}

Json site_json(const CheckSite& s) {
  Json j{{"kind", to_string(s.kind)}};
  j["instance"] = s.kind == CheckSite::Kind::wrapper ? Json(s.instance) : Json(nullptr);
  return j;
}

Json answer_json(const Answer& a) {
  Json bindings = Json::object();
  for (const auto& [name, value] : answer_parts(a)) bindings[name] = value;
  return Json{{"text", format_answer(a)}, {"bindings", bindings}};
}

Json outcome_json(const Report& r) {
  Json j{{"status", to_string(r.outcome.status)}};
  j["limit"] = r.outcome.limit.empty() ? Json(nullptr) : Json(r.outcome.limit);
  j["error"] = r.outcome.error ? Json(to_string(*r.outcome.error)) : Json(nullptr);
  j["message"] = r.outcome.message;
  j["steps"] = r.steps;
  return j;
}

}  // namespace

Json to_json(const Violation& v) {
  Json j;
  j["seq"] = v.seq;
  j["kind"] = to_string(v.kind);
  j["assertion_id"] = v.assertion_id;
  j["assertion_ids"] = v.assertion_ids;
  j["origin"] = origin_json(v.origin);
  j["pred_key"] = v.pred_key.str();
  j["check_site"] = site_json(v.check_site);
  j["culprit"] = v.culprit;
  j["entry"] = v.entry;
  j["exit"] = v.exit ? Json(*v.exit) : Json(nullptr);
  j["span"] = to_json(v.span);
  j["reason"] = v.reason;
  return j;
}

Json to_json(const Inconclusive& i) {
  Json j;
  j["seq"] = i.seq;
  j["kind"] = to_string(i.kind);
  j["assertion_ids"] = i.assertion_ids;
  j["origin"] = origin_json(i.origin);
  j["pred_key"] = i.pred_key.str();
  j["check_site"] = site_json(i.check_site);
  j["culprit"] = i.culprit;
  j["span"] = to_json(i.span);
  j["reason"] = to_string(i.reason);
  j["detail"] = i.detail;
  return j;
}

Json to_json(const Report& r) {
  Json j;
  j["version"] = r.version;
  j["tool"] = "hopl";
  j["config"] = {{"file", r.file},
                 {"goal", r.goal},
                 {"semantics", to_string(r.config.semantics)},
                 {"error_mode", to_string(r.config.error_mode)},
                 {"prop_budget", r.config.prop_budget},
                 {"respect_wrapper_predprops", r.config.respect_wrapper_predprops},
                 {"max_steps", r.limits.max_steps},
                 {"max_depth", r.limits.max_depth},
                 {"max_solutions", r.limits.max_solutions ? Json(*r.limits.max_solutions) : Json(nullptr)},
                 {"occurs_check", r.limits.occurs_check}};
  j["answers"] = Json::array();
  for (const Answer& a : r.answers) j["answers"].push_back(answer_json(a));
  j["violations"] = Json::array();
  for (const Violation& v : r.violations) j["violations"].push_back(to_json(v));
  j["inconclusive"] = Json::array();
  for (const Inconclusive& i : r.inconclusives) j["inconclusive"].push_back(to_json(i));
  j["wrappers"] = Json::array();
  for (const WrapperInstance& w : r.wrappers)
    j["wrappers"].push_back({{"name", w.name},
                             {"arity", w.arity},
                             {"wrapped", print_term(w.wrapped)},
                             {"predprop", w.predprop},
                             {"site", to_json(w.site)}});
  j["attachments"] = Json::array();
  for (const auto& [key, name] : r.attachments) j["attachments"].push_back({{"pred_key", key.str()}, {"predprop", name}});
  j["engine_outcome"] = outcome_json(r);
  j["wall_clock_ms"] = r.wall_clock_ms;
  j["exit_code"] = static_cast<int>(exit_code(r));
  return j;
}

Json load_error_json(const std::string& file, const std::vector<Diagnostic>& errors) {
  Json j;
  j["version"] = kToolVersion;
  j["tool"] = "hopl";
  j["file"] = file;
  j["errors"] = Json::array();
  for (const Diagnostic& d : errors) j["errors"].push_back({{"span", to_json(d.span)}, {"message", d.message}});
  j["exit_code"] = static_cast<int>(ExitCode::load_error);
  return j;
}

std::string format_diagnostics(const std::vector<Diagnostic>& errors) {
  std::string out;
  for (const Diagnostic& d : errors)
    out += d.span.file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": error: " +
           d.message + "\n";
  return out;
}

std::string excerpt(const std::string& source, const SourceSpan& span) {
  std::istringstream in(source);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (n != span.line) continue;
    std::string num = std::to_string(n);
    std::size_t col = std::min(span.column, line.size() + 1);
    std::size_t width = std::max<std::size_t>(1, std::min(span.length, line.size() + 1 - col));
    std::string out = " " + num + " | " + line + "\n";
    out += " " + std::string(num.size(), ' ') + " | " + std::string(col - 1, ' ') + std::string(width, '^') + "\n";
    return out;
  }
  return {};
}

namespace {

std::string span_text(const SourceSpan& s) {
  return s.file + ":" + std::to_string(s.line) + ":" + std::to_string(s.column);
}

std::string site_text(const CheckSite& s) {
  if (s.kind == CheckSite::Kind::wrapper) return "wrapper $wrap_" + std::to_string(s.instance);
  return to_string(s.kind);
}

}  // namespace

std::string to_text(const Report& r, const std::string& source) {
  std::ostringstream o;
  o << "hopl " << r.version << "  semantics=" << to_string(r.config.semantics)
    << "  error_mode=" << to_string(r.config.error_mode) << "\n";
  o << "goal: " << r.goal << "\n";
  o << "answers (" << r.answers.size() << "):\n";
  for (const Answer& a : r.answers) o << "  " << format_answer(a) << "\n";
  o << "engine: " << to_string(r.outcome.status);
  if (!r.outcome.message.empty()) o << " (" << r.outcome.message << ")";
  o << ", " << r.steps << " steps\n";

  if (!r.violations.empty()) {
    o << "\nviolations (" << r.violations.size() << "):\n";
    // Group by assertion span, groups ordered by their first violation.
    std::vector<std::pair<SourceSpan, std::vector<const Violation*>>> groups;
    for (const Violation& v : r.violations) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == v.span; });
      if (it == groups.end()) {
        groups.emplace_back(v.span, std::vector<const Violation*>{});
        it = std::prev(groups.end());
      }
      it->second.push_back(&v);
    }
    for (const auto& [span, vs] : groups) {
      o << "\n" << span_text(span) << ": assertion #" << vs.front()->assertion_id << " ("
        << to_string(vs.front()->origin.kind);
      if (!vs.front()->origin.name.empty()) o << " " << vs.front()->origin.name;
      o << ")\n" << excerpt(source, span);
      for (const Violation* v : vs) {
        o << "  #" << v->seq << " " << to_string(v->kind) << " violation at " << site_text(v->check_site) << ": "
          << v->culprit << "\n";
        if (v->exit) o << "      called as " << v->entry << "\n";
        o << "      failed: " << v->reason << "\n";
      }
    }
  }
  if (!r.inconclusives.empty()) {
    o << "\ninconclusive (" << r.inconclusives.size() << "):\n";
    for (const Inconclusive& i : r.inconclusives)
      o << "  #" << i.seq << " " << to_string(i.kind) << " check at " << site_text(i.check_site) << ": " << i.culprit
        << " [" << to_string(i.reason) << "] " << i.detail << " (" << span_text(i.span) << ")\n";
  }
  o << "\nsummary: " << r.violations.size() << " violation(s), " << r.inconclusives.size()
    << " inconclusive, exit " << static_cast<int>(exit_code(r)) << "\n";
  return o.str();
}

namespace {

Json literals_json(const std::vector<PropLiteral>& lits) {
  Json a = Json::array();
  for (const PropLiteral& l : lits) {
    std::string flavor = l.flavor == PropFlavor::state_prop ? "state_prop"
                         : l.flavor == PropFlavor::predprop ? "predprop"
                                                            : "wrapper_predprop";
    a.push_back({{"literal", print_term(l.term)}, {"flavor", flavor}});
  }
  return a;
}

Json assertion_json(const Assertion& a) {
  Json j;
  j["id"] = a.id;
  j["status"] = to_string(a.status);
  j["pred_key"] = a.origin.kind == AssertionOrigin::Kind::user ? Json(a.head.key().str()) : Json(nullptr);
  j["text"] = print_assertion(a);
  j["pre"] = literals_json(a.pre);
  j["post"] = literals_json(a.post);
  j["origin"] = origin_json(a.origin);
  j["span"] = to_json(a.span);
  return j;
}

}  // namespace

Json list_json(const Program& p) {
  Json j;
  j["version"] = kToolVersion;
  j["file"] = p.origin;
  j["assertions"] = Json::array();
  for (const Assertion& a : p.assertions) j["assertions"].push_back(assertion_json(a));
  j["predprops"] = Json::array();
  for (const auto& [name, pp] : p.predprops) {
    Json q{{"name", name},
           {"described_arity", pp.described_arity},
           {"is_wrapper", pp.is_wrapper},
           {"anon_assertion_count", pp.anon_assertions.size()},
           {"span", to_json(pp.span)}};
    q["assertions"] = Json::array();
    for (const Assertion& a : pp.anon_assertions) q["assertions"].push_back(assertion_json(a));
    j["predprops"].push_back(std::move(q));
  }
  return j;
}

std::string list_text(const Program& p) {
  std::ostringstream o;
  o << "assertions (" << p.assertions.size() << "):\n";
  for (const Assertion& a : p.assertions)
    o << "  #" << a.id << " " << span_text(a.span) << "  " << print_assertion(a) << "\n";
  o << "predprops (" << p.predprops.size() << "):\n";
  for (const auto& [name, pp] : p.predprops) {
    o << "  " << name << "/1 on " << pp.described_arity << (pp.is_wrapper ? " wrapper" : "") << ", "
      << pp.anon_assertions.size() << " assertion(s)  " << span_text(pp.span) << "\n";
    for (const Assertion& a : pp.anon_assertions) o << "    #" << a.id << "  " << print_assertion(a) << "\n";
  }
  return o.str();
}

}  // namespace hopl
