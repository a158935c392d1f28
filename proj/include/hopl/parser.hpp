#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopl/program.hpp"
#include "hopl/term.hpp"

namespace hopl {

struct Diagnostic {
  SourceSpan span;
  std::string message;
};

struct ParseOutcome {
  std::optional<Program> program;
  std::vector<Diagnostic> errors;

  bool ok() const { return program.has_value() && errors.empty(); }
};

/// Parses and validates a `.hopl` source text. Recovers at every clause
/// terminator, so all independent clause-level errors are reported.
ParseOutcome parse_program(std::string_view text, const std::string& origin = "<input>");

/// Raised by parse_term / parse_query.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& what)
      : std::runtime_error(what), span_(std::move(span)) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// A top-level conjunction of goals plus its named variables in first-occurrence order.
struct Query {
  std::vector<Goal> goals;
  std::vector<std::pair<std::string, Term>> variables;
  VarId next_var = 1;
};

/// Parses one term. Variable ids are drawn starting at `first_var`.
Term parse_term(std::string_view text, VarId first_var = 1);

/// Parses a comma-separated goal conjunction, e.g. `p(X), X = b`.
/// Variable ids start at `first_var`, which should be past the program's ids.
Query parse_query(std::string_view text, VarId first_var = 1);

/// Canonical printing; parse_term(print_term(t)) is a variant of t.
std::string print_term(const Term& t);
/// Prints unbound variables as _G0, _G1, ... by first occurrence, so that
/// equal-up-to-renaming terms print identically.
std::string print_term_canonical(const Term& t);
std::string print_goal(const Goal& g);
std::string print_clause(const Clause& c);
std::string print_assertion(const Assertion& a);
std::string print_predprop(const PredProp& p);
/// Prints a whole program back to `.hopl` syntax.
std::string print_program(const Program& p);

/// True if `name` can be written unquoted as an atom.
bool is_plain_atom(std::string_view name);

namespace detail {
/// Parses clauses only (no validation); used for the builtin prelude.
Program parse_unchecked(std::string_view text, const std::string& origin);
}  // namespace detail

}  // namespace hopl
