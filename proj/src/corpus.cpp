#include "hopl/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hopl {

namespace fs = std::filesystem;

bool CorpusCase::has_tag(const std::string& t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<CorpusCase> load_corpus(const std::string& dir) {
  std::vector<CorpusCase> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".hopl") continue;
    CorpusCase c;
    c.name = entry.path().stem().string();
    c.path = entry.path().string();
    c.source = slurp(entry.path());
    fs::path sidecar = entry.path();
    sidecar.replace_extension(".expect.json");
    try {
      c.expect = Json::parse(slurp(sidecar));
    } catch (const Json::parse_error& e) {
      throw std::runtime_error(sidecar.string() + ": " + e.what());
    }
    c.goal = c.expect.at("goal").get<std::string>();
    if (c.expect.contains("tags")) c.tags = c.expect["tags"].get<std::vector<std::string>>();
    c.observes_wrapper_identity = c.expect.value("observes_wrapper_identity", false);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const CorpusCase& a, const CorpusCase& b) { return a.name < b.name; });
  return out;
}

const CellRun& CaseRun::cell(Semantics s, ErrorMode m) const {
  for (const CellRun& r : cells)
    if (r.semantics == s && r.mode == m) return r;
  throw std::out_of_range("no such cell");
}

bool CaseRun::matches() const {
  if (!load_errors.empty()) return false;
  return std::all_of(cells.begin(), cells.end(), [](const CellRun& r) { return r.mismatches.empty(); });
}

Json cell_projection(const Json& report) {
  Json p;
  p["exit_code"] = report.at("exit_code");
  p["outcome"] = report.at("engine_outcome").at("status");
  p["answers"] = Json::array();
  for (const Json& a : report.at("answers")) p["answers"].push_back(a.at("text"));
  p["violations"] = report.at("violations");
  p["inconclusive"] = report.at("inconclusive");
  return p;
}

std::vector<std::string> partial_diff(const Json& expected, const Json& actual, const std::string& path) {
  std::vector<std::string> out;
  if (expected.is_object()) {
    if (!actual.is_object()) return {path + ": expected an object, got " + actual.dump()};
    for (const auto& [k, v] : expected.items()) {
      if (!actual.contains(k)) {
        out.push_back(path + "." + k + ": missing");
        continue;
      }
      auto sub = partial_diff(v, actual.at(k), path + "." + k);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (expected.is_array()) {
    if (!actual.is_array()) return {path + ": expected an array, got " + actual.dump()};
    if (expected.size() != actual.size())
      return {path + ": expected " + std::to_string(expected.size()) + " elements, got " +
              std::to_string(actual.size()) + " " + actual.dump()};
    for (std::size_t i = 0; i < expected.size(); ++i) {
      auto sub = partial_diff(expected[i], actual[i], path + "[" + std::to_string(i) + "]");
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (expected != actual) out.push_back(path + ": expected " + expected.dump() + ", got " + actual.dump());
  return out;
}

CaseRun run_case(const CorpusCase& c, const EngineLimits& limits) {
  CaseRun run;
  run.c = &c;
  ParseOutcome parsed = parse_program(c.source, c.path);
  if (!parsed.ok()) {
    run.load_errors = parsed.errors;
    return run;
  }
  const Program& p = *parsed.program;
  for (Semantics s : kAllSemantics) {
    for (ErrorMode m : kAllModes) {
      CheckConfig cfg;
      cfg.semantics = s;
      cfg.error_mode = m;
      CellRun cell;
      cell.semantics = s;
      cell.mode = m;
      cell.report = run_checked(p, c.goal, cfg, limits);
      cell.json = to_json(cell.report);
      const Json* cells = c.expect.contains("cells") ? &c.expect["cells"] : nullptr;
      const std::string sk = to_string(s), mk = to_string(m);
      if (cells == nullptr || !cells->contains(sk) || !(*cells)[sk].contains(mk))
        cell.mismatches.push_back("no expectation for " + sk + "/" + mk);
      else
        cell.mismatches = partial_diff((*cells)[sk][mk], cell_projection(cell.json), sk + "/" + mk);
      run.cells.push_back(std::move(cell));
    }
  }
  return run;
}

}  // namespace hopl
