#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hopl/parser.hpp"
#include "hopl/rtcheck.hpp"

namespace hopl {

enum class ExitCode : int { ok = 0, violations = 1, load_error = 2, limit = 3, usage = 4 };

/// Violations win over an abnormal engine end; inconclusive checks alone exit 0.
ExitCode exit_code(const Report& r);

using Json = nlohmann::ordered_json;

Json to_json(const SourceSpan& s);
Json to_json(const Violation& v);
Json to_json(const Inconclusive& i);
Json to_json(const Report& r);
/// Report emitted in place of a run report when the program does not load.
Json load_error_json(const std::string& file, const std::vector<Diagnostic>& errors);

/// Human-readable report; violations are grouped by assertion with a source excerpt.
std::string to_text(const Report& r, const std::string& source);

/// `file:line:col: message` lines.
std::string format_diagnostics(const std::vector<Diagnostic>& errors);

/// Source line under `span` with carets below the spanned columns.
std::string excerpt(const std::string& source, const SourceSpan& span);

Json list_json(const Program& p);
std::string list_text(const Program& p);

}  // namespace hopl
