#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopl {

using VarId = std::uint64_t;

enum class TermKind { var, atom, integer, structure, pred_ref };

/// Predicate identity: name and arity.
struct PredKey {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const PredKey&) const = default;
  bool operator==(const PredKey&) const = default;

  std::string str() const { return name + "/" + std::to_string(arity); }
};

class Term;

namespace detail {
struct TermNode;
}

/// Immutable, shared term handle.
///
/// A pred_ref is a higher-order datum: a reference to predicate `name/arity`
/// with some leading arguments already supplied (`closed_args`). At least
/// one argument always remains open.
class Term {
 public:
  Term() = default;

  static Term var(VarId id, std::string name = {});
  static Term atom(std::string name);
  static Term integer(std::int64_t value);
  /// Builds a structure; zero arguments yield an atom.
  static Term structure(std::string functor, std::vector<Term> args);
  /// Throws std::invalid_argument when closed.size() >= arity.
  static Term pred_ref(std::string name, std::size_t arity, std::vector<Term> closed);

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  bool is_var() const { return kind() == TermKind::var; }
  bool is_atom() const { return kind() == TermKind::atom; }
  bool is_int() const { return kind() == TermKind::integer; }
  bool is_struct() const { return kind() == TermKind::structure; }
  bool is_pred_ref() const { return kind() == TermKind::pred_ref; }
  bool is_callable() const { return is_atom() || is_struct(); }

  /// Functor of a structure, name of an atom or pred_ref, display name of a var.
  const std::string& name() const;
  VarId var_id() const;
  std::int64_t int_value() const;
  /// Structure arguments or pred_ref closed arguments.
  std::span<const Term> args() const;
  /// Structure arity, or the full arity of the referenced predicate.
  std::size_t arity() const;

  /// Predicate key of a callable term (atom => name/0).
  PredKey key() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

namespace detail {
struct TermNode {
  TermKind kind;
  std::string name;
  VarId id = 0;
  std::int64_t value = 0;
  std::size_t arity = 0;
  std::vector<Term> args;
};
}  // namespace detail

/// Syntactic identity (variables compared by id).
bool operator==(const Term& a, const Term& b);

/// Collects the distinct variable ids of `t` in left-to-right first-occurrence order.
std::vector<VarId> variables_of(const Term& t);
void collect_variables(const Term& t, std::vector<VarId>& out);
bool is_ground(const Term& t);
bool occurs_in(VarId v, const Term& t);

/// Raised when a binding would make a term infinite and the caller needs a finite one.
class CyclicTermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Source of fresh variable ids; one per engine run.
class VarCounter {
 public:
  explicit VarCounter(VarId start = 1) : next_(start) {}
  VarId fresh() { return next_++; }
  VarId peek() const { return next_; }

 private:
  VarId next_;
};

}  // namespace hopl
