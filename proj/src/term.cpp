#include "hopl/term.hpp"

#include <algorithm>
#include <unordered_map>

#include "hopl/unify.hpp"

namespace hopl {

namespace {
const std::string kEmpty;
const Term kNoArgs[1] = {};
}  // namespace

Term Term::var(VarId id, std::string name) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::var;
  n->id = id;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::atom(std::string name) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::atom;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::integer(std::int64_t value) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::integer;
  n->value = value;
  return Term(std::move(n));
}

Term Term::structure(std::string functor, std::vector<Term> args) {
  if (args.empty()) return atom(std::move(functor));
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::structure;
  n->name = std::move(functor);
  n->arity = args.size();
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::pred_ref(std::string name, std::size_t arity, std::vector<Term> closed) {
  if (closed.size() >= arity)
    throw std::invalid_argument("pred_ref " + name + "/" + std::to_string(arity) +
                                " must leave at least one argument open");
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::pred_ref;
  n->name = std::move(name);
  n->arity = arity;
  n->args = std::move(closed);
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_ ? node_->name : kEmpty; }
VarId Term::var_id() const { return node_->id; }
std::int64_t Term::int_value() const { return node_->value; }
std::span<const Term> Term::args() const {
  if (!node_) return {kNoArgs, 0};
  return {node_->args.data(), node_->args.size()};
}
std::size_t Term::arity() const { return node_->arity; }

PredKey Term::key() const {
  switch (kind()) {
    case TermKind::atom:
      return {name(), 0};
    case TermKind::structure:
    case TermKind::pred_ref:
      return {name(), arity()};
    default:
      return {};
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (!a.valid() || !b.valid()) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::var:
      return a.var_id() == b.var_id();
    case TermKind::atom:
      return a.name() == b.name();
    case TermKind::integer:
      return a.int_value() == b.int_value();
    case TermKind::structure:
    case TermKind::pred_ref: {
      if (a.name() != b.name() || a.arity() != b.arity() || a.args().size() != b.args().size())
        return false;
      return std::equal(a.args().begin(), a.args().end(), b.args().begin());
    }
  }
  return false;
}

void collect_variables(const Term& t, std::vector<VarId>& out) {
  switch (t.kind()) {
    case TermKind::var:
      if (std::find(out.begin(), out.end(), t.var_id()) == out.end()) out.push_back(t.var_id());
      break;
    case TermKind::structure:
    case TermKind::pred_ref:
      for (const Term& a : t.args()) collect_variables(a, out);
      break;
    default:
      break;
  }
}

std::vector<VarId> variables_of(const Term& t) {
  std::vector<VarId> out;
  collect_variables(t, out);
  return out;
}

bool is_ground(const Term& t) {
  switch (t.kind()) {
    case TermKind::var:
      return false;
    case TermKind::structure:
    case TermKind::pred_ref:
      return std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return is_ground(a); });
    default:
      return true;
  }
}

bool occurs_in(VarId v, const Term& t) {
  switch (t.kind()) {
    case TermKind::var:
      return t.var_id() == v;
    case TermKind::structure:
    case TermKind::pred_ref:
      return std::any_of(t.args().begin(), t.args().end(),
                         [v](const Term& a) { return occurs_in(v, a); });
    default:
      return false;
  }
}

std::string to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::instantiation:
      return "instantiation";
    case ErrorKind::arity:
      return "arity";
    case ErrorKind::type:
      return "type";
    case ErrorKind::existence:
      return "existence";
    case ErrorKind::cyclic_term:
      return "cyclic_term";
  }
  return "unknown";
}

Term apply_subst(const Term& t, const Substitution& s) { return resolve_in(s, t); }

Substitution normalize(const Substitution& s) {
  Substitution out;
  for (const auto& [v, t] : s.bindings()) out.bind(v, resolve_in(s, t));
  return out;
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s,
                                  bool occurs_check) {
  Substitution work = s;
  if (!unify_in(work, a, b, occurs_check)) return std::nullopt;
  try {
    return normalize(work);
  } catch (const CyclicTermError&) {
    // Only reachable with the occurs check off; the caller sees the raw binding.
    return work;
  }
}

Term saturate(const Term& callee, std::span<const Term> extra) {
  switch (callee.kind()) {
    case TermKind::var:
      throw ResolutionError(ErrorKind::instantiation, "higher-order callee is unbound");
    case TermKind::atom:
      return Term::structure(callee.name(), std::vector<Term>(extra.begin(), extra.end()));
    case TermKind::pred_ref: {
      std::vector<Term> args(callee.args().begin(), callee.args().end());
      args.insert(args.end(), extra.begin(), extra.end());
      if (args.size() > callee.arity())
        throw ResolutionError(ErrorKind::arity,
                              "over-application of " + callee.name() + "/" +
                                  std::to_string(callee.arity()) + " with " +
                                  std::to_string(args.size()) + " arguments");
      if (args.size() == callee.arity()) return Term::structure(callee.name(), std::move(args));
      return Term::pred_ref(callee.name(), callee.arity(), std::move(args));
    }
    default:
      throw ResolutionError(ErrorKind::type, "higher-order callee is not an atom or pred_ref");
  }
}

namespace {
bool variant_rec(const Term& a, const Term& b, std::unordered_map<VarId, VarId>& fwd,
                 std::unordered_map<VarId, VarId>& back) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::var: {
      auto [fi, fnew] = fwd.emplace(a.var_id(), b.var_id());
      auto [bi, bnew] = back.emplace(b.var_id(), a.var_id());
      return fi->second == b.var_id() && bi->second == a.var_id();
    }
    case TermKind::atom:
      return a.name() == b.name();
    case TermKind::integer:
      return a.int_value() == b.int_value();
    case TermKind::structure:
    case TermKind::pred_ref: {
      if (a.name() != b.name() || a.arity() != b.arity() || a.args().size() != b.args().size())
        return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!variant_rec(a.args()[i], b.args()[i], fwd, back)) return false;
      return true;
    }
  }
  return false;
}
}  // namespace

bool is_variant(const Term& a, const Term& b) {
  std::unordered_map<VarId, VarId> fwd, back;
  return variant_rec(a, b, fwd, back);
}

}  // namespace hopl
