#include "hopl/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hopl/report.hpp"

namespace hopl {

namespace {

struct Loaded {
  std::string source;
  std::optional<Program> program;
  std::vector<Diagnostic> errors;
};

Loaded load(const std::string& path) {
  Loaded l;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    l.errors.push_back({{path, 1, 1, 0}, "cannot read file"});
    return l;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  l.source = buf.str();
  ParseOutcome parsed = parse_program(l.source, path);
  l.errors = std::move(parsed.errors);
  if (l.errors.empty()) l.program = std::move(parsed.program);
  return l;
}

int report_load_failure(const Loaded& l, const std::string& path, bool json, std::ostream& out, std::ostream& err) {
  err << format_diagnostics(l.errors);
  if (json) out << load_error_json(path, l.errors).dump(2) << "\n";
  return static_cast<int>(ExitCode::load_error);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order logic programs with run-time checked predicate properties", "hopl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string file;
  std::string goal;
  std::string semantics = "tight";
  std::string error_mode = "gather-all";
  std::string report = "text";
  std::string format = "text";
  std::size_t max_steps = EngineLimits{}.max_steps;
  std::size_t max_depth = EngineLimits{}.max_depth;
  std::size_t max_solutions = 0;
  std::size_t prop_budget = kDefaultPropBudget;
  bool trace = false;
  bool no_occurs_check = false;
  bool ignore_wrapper_predprops = false;

  CLI::App* run = app.add_subcommand("run", "Run a goal under a checking semantics");
  run->add_option("FILE", file, "Program (.hopl)")->required();
  run->add_option("--goal", goal, "Goal conjunction to solve")->required();
  run->add_option("--semantics", semantics, "off | fo | tight | loose")
      ->check(CLI::IsMember({"off", "fo", "tight", "loose"}))
      ->capture_default_str();
  run->add_option("--error-mode", error_mode, "fail-fast | gather-all")
      ->check(CLI::IsMember({"fail-fast", "gather-all"}))
      ->capture_default_str();
  run->add_option("--max-steps", max_steps, "Resolution step limit")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--max-depth", max_depth, "Call depth limit")->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--max-solutions", max_solutions, "Stop after N answers (default: all)")->check(CLI::PositiveNumber);
  run->add_option("--prop-budget", prop_budget, "Step budget per property evaluation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--report", report, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  run->add_flag("--trace", trace, "Print the call/exit/fail/redo event stream on stderr");
  run->add_flag("--no-occurs-check", no_occurs_check, "Unify without the occurs check");
  run->add_flag("--ignore-wrapper-predprops", ignore_wrapper_predprops,
                "Under tight, attach wrapper predprops like ordinary ones");

  CLI::App* check = app.add_subcommand("check", "Parse and validate a program");
  check->add_option("FILE", file, "Program (.hopl)")->required();

  CLI::App* list = app.add_subcommand("list", "List assertions and predprops");
  list->add_option("FILE", file, "Program (.hopl)")->required();
  list->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  if (check->parsed()) {
    Loaded l = load(file);
    if (!l.program) return report_load_failure(l, file, false, out, err);
    out << file << ": ok (" << l.program->clauses.size() << " clauses, " << l.program->assertions.size()
        << " assertions, " << l.program->predprops.size() << " predprops)\n";
    return static_cast<int>(ExitCode::ok);
  }

  if (list->parsed()) {
    Loaded l = load(file);
    if (!l.program) return report_load_failure(l, file, format == "json", out, err);
    if (format == "json")
      out << list_json(*l.program).dump(2) << "\n";
    else
      out << list_text(*l.program);
    return static_cast<int>(ExitCode::ok);
  }

  const bool json = report == "json";
  Loaded l = load(file);
  if (!l.program) return report_load_failure(l, file, json, out, err);

  Query query;
  try {
    query = parse_query(goal, l.program->next_var);
  } catch (const ParseError& e) {
    err << "--goal: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }

  CheckConfig cfg;
  cfg.semantics = *parse_semantics(semantics);
  cfg.error_mode = *parse_error_mode(error_mode);
  cfg.prop_budget = prop_budget;
  cfg.respect_wrapper_predprops = !ignore_wrapper_predprops;
  EngineLimits limits;
  limits.max_steps = max_steps;
  limits.max_depth = max_depth;
  if (max_solutions > 0) limits.max_solutions = max_solutions;
  limits.occurs_check = !no_occurs_check;

  EventSink sink;
  if (trace) sink = [&err](const DerivationEvent& e) { err << format_event(e) << "\n"; };
  Report r = run_checked(*l.program, query, cfg, limits, sink);
  r.goal = goal;

  if (json)
    out << to_json(r).dump(2) << "\n";
  else
    out << to_text(r, l.source);
  if (!r.inconclusives.empty()) err << "warning: " << r.inconclusives.size() << " inconclusive check(s)\n";
  return static_cast<int>(exit_code(r));
}

}  // namespace hopl
