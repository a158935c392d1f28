#pragma once

#include <string>
#include <vector>

#include "hopl/report.hpp"

namespace hopl {

/// One annotated program: `<name>.hopl` plus its `<name>.expect.json` sidecar.
struct CorpusCase {
  std::string name;
  std::string path;
  std::string source;
  std::string goal;
  Json expect;
  std::vector<std::string> tags;
  bool observes_wrapper_identity = false;

  bool has_tag(const std::string& t) const;
};

/// Loads every case in `dir`, sorted by name. Throws std::runtime_error on a
/// missing sidecar or malformed JSON.
std::vector<CorpusCase> load_corpus(const std::string& dir);

inline constexpr Semantics kAllSemantics[] = {Semantics::off, Semantics::fo, Semantics::tight, Semantics::loose};
inline constexpr ErrorMode kAllModes[] = {ErrorMode::gather_all, ErrorMode::fail_fast};

struct CellRun {
  Semantics semantics = Semantics::off;
  ErrorMode mode = ErrorMode::gather_all;
  Report report;
  Json json;                               // to_json(report)
  std::vector<std::string> mismatches;     // against the sidecar expectation
};

struct CaseRun {
  const CorpusCase* c = nullptr;
  std::vector<Diagnostic> load_errors;
  std::vector<CellRun> cells;  // 8 cells, semantics-major

  const CellRun& cell(Semantics s, ErrorMode m) const;
  bool matches() const;
};

/// Runs all eight cells of `c` and diffs them against the expectations.
CaseRun run_case(const CorpusCase& c, const EngineLimits& limits = {});

/// Projection of a report compared against a sidecar cell: exit_code, outcome,
/// answers (texts), violations and inconclusive arrays.
Json cell_projection(const Json& report);

/// Structural partial diff: every key present in `expected` must match in
/// `actual`; arrays must have equal length and match elementwise.
std::vector<std::string> partial_diff(const Json& expected, const Json& actual, const std::string& path = "$");

}  // namespace hopl
