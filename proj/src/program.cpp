#include "hopl/program.hpp"

#include <algorithm>
#include <unordered_map>

#include "hopl/parser.hpp"

namespace hopl {

std::string to_string(AssertionStatus s) {
  switch (s) {
    case AssertionStatus::check:
      return "check";
    case AssertionStatus::trust:
      return "trust";
    case AssertionStatus::true_:
      return "true";
  }
  return "?";
}

std::string to_string(AssertionOrigin::Kind k) {
  switch (k) {
    case AssertionOrigin::Kind::user:
      return "user";
    case AssertionOrigin::Kind::predprop:
      return "predprop";
    case AssertionOrigin::Kind::wrapper:
      return "wrapper";
  }
  return "?";
}

Program::Program(const Program& other)
    : origin(other.origin),
      source(other.source),
      clauses(other.clauses),
      index(other.index),
      assertions(other.assertions),
      predprops(other.predprops),
      next_var(other.next_var) {
  rebuild_groups();
}

Program& Program::operator=(const Program& other) {
  if (this != &other) {
    Program copy(other);
    *this = std::move(copy);
  }
  return *this;
}

const PredProp* Program::find_predprop(const std::string& name) const {
  auto it = predprops.find(name);
  return it == predprops.end() ? nullptr : &it->second;
}

void Program::add_clause(Clause c) {
  index[c.head.key()].push_back(clauses.size());
  for (const Goal& g : c.body) {
    const Term& t = g.kind == Goal::Kind::literal ? g.term : g.callee;
    for (VarId v : variables_of(t)) next_var = std::max(next_var, v + 1);
  }
  for (VarId v : variables_of(c.head)) next_var = std::max(next_var, v + 1);
  clauses.push_back(std::move(c));
}

void Program::rebuild_groups() {
  groups.clear();
  predprop_groups.clear();
  for (const Assertion& a : assertions)
    if (a.status == AssertionStatus::check) groups[a.head.key()].assertions.push_back(&a);
  for (const auto& [name, pp] : predprops) {
    AssertionGroup& g = predprop_groups[name];
    for (const Assertion& a : pp.anon_assertions)
      if (a.status == AssertionStatus::check) g.assertions.push_back(&a);
  }
}

bool is_native_builtin(const PredKey& k) {
  if (k.arity == 0) return k.name == "true";
  if (k.arity == 2) return k.name == "=";
  if (k.arity == 1)
    return k.name == "int" || k.name == "atm" || k.name == "var" || k.name == "nonvar" ||
           k.name == "ground" || k.name == "callable";
  return false;
}

bool is_builtin(const PredKey& k) {
  return is_native_builtin(k) || (k.name == "list" && k.arity == 1) || (k.name == "member" && k.arity == 2);
}

bool is_builtin_prop(const PredKey& k) { return is_builtin(k) && !(k.name == "=" && k.arity == 2); }

const Program& prelude() {
  static const Program p = detail::parse_unchecked(
      "list([]).\n"
      "list([_|T]) :- list(T).\n"
      "member(X, [X|_]).\n"
      "member(X, [_|T]) :- member(X, T).\n",
      "<prelude>");
  return p;
}

namespace {
struct Renamer {
  VarCounter& counter;
  std::vector<std::pair<VarId, Term>> map;

  Term operator()(const Term& t) {
    switch (t.kind()) {
      case TermKind::var: {
        for (const auto& [from, to] : map)
          if (from == t.var_id()) return to;
        Term fresh = Term::var(counter.fresh());
        map.emplace_back(t.var_id(), fresh);
        return fresh;
      }
      case TermKind::structure:
      case TermKind::pred_ref: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args()) args.push_back((*this)(a));
        return t.is_struct() ? Term::structure(t.name(), std::move(args))
                             : Term::pred_ref(t.name(), t.arity(), std::move(args));
      }
      default:
        return t;
    }
  }
};
}  // namespace

Clause rename_apart(const Clause& c, VarCounter& counter) {
  Renamer r{counter, {}};
  Clause out;
  out.span = c.span;
  out.head = is_ground(c.head) ? c.head : r(c.head);
  out.body.reserve(c.body.size());
  for (const Goal& g : c.body) {
    if (g.kind == Goal::Kind::literal) {
      out.body.push_back(Goal::literal(r(g.term)));
    } else {
      std::vector<Term> extra;
      for (const Term& x : g.extra) extra.push_back(r(x));
      Term callee = r(g.callee);
      out.body.push_back(Goal::ho_call(callee, std::move(extra)));
    }
  }
  return out;
}

}  // namespace hopl
