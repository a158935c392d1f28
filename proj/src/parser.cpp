#include "hopl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "hopl/assertions.hpp"

namespace hopl {

namespace {

enum class Tok {
  name,
  var,
  integer,
  qatom,
  lparen,
  rparen,
  lbrack,
  rbrack,
  lbrace,
  rbrace,
  comma,
  bar,
  end,
  tilde,
  eq,
  slash,
  neck,
  colon,
  arrow,
  eof,
  error
};

struct Token {
  Tok kind = Tok::eof;
  std::string text;
  std::int64_t value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;
  std::size_t length = 0;
  bool glued = false;  // no whitespace between this token and the previous one
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::eof:
      return "end of input";
    case Tok::end:
      return "'.'";
    case Tok::error:
      return t.text;
    default:
      return "'" + t.text + "'";
  }
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  bool glued = false;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (true) {
    // whitespace and % comments
    bool skipped = false;
    while (i < src.size()) {
      char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        skipped = true;
      } else if (c == '%') {
        while (i < src.size() && src[i] != '\n') advance(1);
        skipped = true;
      } else {
        break;
      }
    }
    if (skipped) glued = false;
    Token t;
    t.line = line;
    t.column = col;
    t.offset = i;
    t.glued = glued;
    glued = true;
    if (i >= src.size()) {
      t.kind = Tok::eof;
      out.push_back(t);
      return out;
    }
    char c = src[i];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance(1);
    };
    if (std::islower(static_cast<unsigned char>(c)) || c == '$') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::name;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::var;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.text = std::string(src.substr(i, j - i));
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      t.kind = ec == std::errc{} ? Tok::integer : Tok::error;
      if (t.kind == Tok::error) t.text = "integer literal out of range '" + t.text + "'";
      advance(j - i);
    } else if (c == '\'') {
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        if (src[j] == '\'') {
          if (j + 1 < src.size() && src[j + 1] == '\'') {
            text += '\'';
            j += 2;
            continue;
          }
          closed = true;
          ++j;
          break;
        }
        if (src[j] == '\\' && j + 1 < src.size()) {
          char e = src[j + 1];
          text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
          j += 2;
          continue;
        }
        if (src[j] == '\n') break;
        text += src[j++];
      }
      if (!closed) {
        t.kind = Tok::error;
        t.text = "unterminated quoted atom";
      } else {
        t.kind = Tok::qatom;
        t.text = text;
      }
      advance(j - i);
    } else if (c == ':' && i + 1 < src.size() && src[i + 1] == '-') {
      t.kind = Tok::neck;
      t.text = ":-";
      advance(2);
    } else if (c == '=' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = Tok::arrow;
      t.text = "=>";
      advance(2);
    } else if (c == '.') {
      bool at_end = i + 1 >= src.size() || std::isspace(static_cast<unsigned char>(src[i + 1])) ||
                    src[i + 1] == '%';
      if (at_end) {
        single(Tok::end);
      } else {
        t.kind = Tok::error;
        t.text = "unexpected '.' (a clause terminator must be followed by whitespace)";
        advance(1);
      }
    } else {
      switch (c) {
        case '(':
          single(Tok::lparen);
          break;
        case ')':
          single(Tok::rparen);
          break;
        case '[':
          single(Tok::lbrack);
          break;
        case ']':
          single(Tok::rbrack);
          break;
        case '{':
          single(Tok::lbrace);
          break;
        case '}':
          single(Tok::rbrace);
          break;
        case ',':
          single(Tok::comma);
          break;
        case '|':
          single(Tok::bar);
          break;
        case '~':
          single(Tok::tilde);
          break;
        case '=':
          single(Tok::eq);
          break;
        case '/':
          single(Tok::slash);
          break;
        case ':':
          single(Tok::colon);
          break;
        default:
          t.kind = Tok::error;
          t.text = std::string("unexpected character '") + c + "'";
          advance(1);
          break;
      }
    }
    t.length = i - t.offset;
    out.push_back(t);
  }
}

struct Failure {
  Diagnostic diag;
};

class Parser {
 public:
  Parser(std::string_view src, std::string origin, VarId first_var)
      : src_(src), origin_(std::move(origin)), toks_(lex(src)), counter_(first_var) {}

  // --- program level -------------------------------------------------------

  void parse_items(Program& prog, std::vector<Diagnostic>& errors, std::size_t& next_id) {
    while (peek().kind != Tok::eof) {
      std::size_t start = pos_;
      try {
        parse_item(prog, next_id);
      } catch (const Failure& f) {
        errors.push_back(f.diag);
        recover(start);
      }
      errors.insert(errors.end(), late_errors_.begin(), late_errors_.end());
      late_errors_.clear();
    }
  }

  // --- entry points for terms / queries ------------------------------------

  Term parse_single_term() {
    Term t = parse_arg();
    if (peek().kind == Tok::end) next();
    if (peek().kind != Tok::eof) fail(peek(), "unexpected " + describe(peek()) + " after term");
    return t;
  }

  Query parse_query_text() {
    Query q;
    std::vector<Term> items = parse_conj();
    if (peek().kind == Tok::end) next();
    if (peek().kind != Tok::eof) fail(peek(), "unexpected " + describe(peek()) + " after goal");
    for (const Term& t : items) q.goals.push_back(to_goal(t, span_of(toks_.front())));
    for (const auto& name : var_order_) q.variables.emplace_back(name, vars_.at(name));
    q.next_var = counter_.peek();
    return q;
  }

  VarId next_var() const { return counter_.peek(); }

 private:
  std::string_view src_;
  std::string origin_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  VarCounter counter_;
  std::map<std::string, Term> vars_;
  std::vector<std::string> var_order_;
  std::vector<Diagnostic> late_errors_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  SourceSpan span_of(const Token& t) const { return {origin_, t.line, t.column, t.length}; }
  SourceSpan span_between(const Token& first, const Token& last) const {
    SourceSpan s = span_of(first);
    s.length = last.offset + last.length - first.offset;
    return s;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    if (at.kind == Tok::error) throw Failure{{span_of(at), at.text}};
    throw Failure{{span_of(at), msg}};
  }

  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) {
      if (peek().kind == Tok::eof) fail(peek(), "missing clause terminator '.' before end of input");
      fail(peek(), "expected " + what + " but found " + describe(peek()));
    }
    return next();
  }

  void expect_keyword(const std::string& kw) {
    if (peek().kind != Tok::name || peek().text != kw)
      fail(peek(), "expected '" + kw + "' but found " + describe(peek()));
    next();
  }

  void recover(std::size_t start) {
    std::size_t fail_pos = pos_;
    int depth = 0;
    for (std::size_t k = start; k < toks_.size(); ++k) {
      Tok kind = toks_[k].kind;
      if (kind == Tok::eof) {
        pos_ = k;
        return;
      }
      if (kind == Tok::lbrace) ++depth;
      if (kind == Tok::rbrace) depth = std::max(0, depth - 1);
      if (kind == Tok::end && depth == 0 && k >= fail_pos) {
        pos_ = k + 1;
        return;
      }
    }
    pos_ = toks_.size() - 1;
  }

  void reset_scope() {
    vars_.clear();
    var_order_.clear();
  }

  // --- terms ---------------------------------------------------------------

  Term parse_arg() {
    Term lhs = parse_primary();
    if (peek().kind == Tok::eq) {
      next();
      Term rhs = parse_primary();
      return Term::structure("=", {lhs, rhs});
    }
    return lhs;
  }

  std::vector<Term> parse_args() {
    expect(Tok::lparen, "'('");
    std::vector<Term> args;
    if (peek().kind == Tok::rparen) fail(peek(), "empty argument list");
    args.push_back(parse_arg());
    while (peek().kind == Tok::comma) {
      next();
      args.push_back(parse_arg());
    }
    expect(Tok::rparen, "',' or ')'");
    return args;
  }

  Term make_var(const Token& t) {
    if (t.text == "_") return Term::var(counter_.fresh());
    auto it = vars_.find(t.text);
    if (it != vars_.end()) return it->second;
    Term v = Term::var(counter_.fresh(), t.text);
    vars_.emplace(t.text, v);
    var_order_.push_back(t.text);
    return v;
  }

  Term parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::var:
        next();
        return make_var(t);
      case Tok::integer:
        next();
        return Term::integer(t.value);
      case Tok::name:
      case Tok::qatom: {
        next();
        std::string name = t.text;
        std::vector<Term> args;
        if (peek().kind == Tok::lparen && peek().glued) args = parse_args();
        if (peek().kind == Tok::tilde) {
          const Token& tilde = next();
          const Token& n = expect(Tok::integer, "target arity after '~'");
          if (n.value < 1 || static_cast<std::size_t>(n.value) <= args.size())
            fail(tilde, "partial application " + name + "~" + std::to_string(n.value) +
                            " must leave at least one argument open");
          return Term::pred_ref(name, static_cast<std::size_t>(n.value), std::move(args));
        }
        return Term::structure(name, std::move(args));
      }
      case Tok::lbrack: {
        next();
        if (peek().kind == Tok::rbrack) {
          next();
          return Term::atom("[]");
        }
        std::vector<Term> items{parse_arg()};
        while (peek().kind == Tok::comma) {
          next();
          items.push_back(parse_arg());
        }
        Term tail = Term::atom("[]");
        if (peek().kind == Tok::bar) {
          next();
          tail = parse_arg();
        }
        expect(Tok::rbrack, "',', '|' or ']'");
        for (std::size_t k = items.size(); k-- > 0;) tail = Term::structure(".", {items[k], tail});
        return tail;
      }
      case Tok::lparen: {
        next();
        Term inner = parse_arg();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::eof:
        fail(t, "missing clause terminator '.' before end of input");
      default:
        fail(t, "expected a term but found " + describe(t));
    }
  }

  /// Comma conjunction; parenthesized sub-conjunctions are flattened.
  std::vector<Term> parse_conj() {
    std::vector<Term> out;
    auto item = [&](auto&& self) -> void {
      if (peek().kind == Tok::lparen) {
        next();
        std::vector<Term> inner;
        std::swap(inner, out);
        self(self);
        while (peek().kind == Tok::comma) {
          next();
          self(self);
        }
        expect(Tok::rparen, "',' or ')'");
        std::swap(inner, out);
        // A lone parenthesized term may continue as the left operand of '='.
        if (inner.size() == 1 && peek().kind == Tok::eq) {
          next();
          Term rhs = parse_primary();
          out.push_back(Term::structure("=", {inner.front(), rhs}));
          return;
        }
        out.insert(out.end(), inner.begin(), inner.end());
        return;
      }
      out.push_back(parse_arg());
    };
    item(item);
    while (peek().kind == Tok::comma) {
      next();
      item(item);
    }
    return out;
  }

  Goal to_goal(const Term& t, const SourceSpan& where) const {
    switch (t.kind()) {
      case TermKind::var:
        return Goal::ho_call(t, {});
      case TermKind::atom:
        if (t.name() == "call") throw Failure{{where, "call/0 is not a goal"}};
        return Goal::literal(t);
      case TermKind::structure:
        if (t.name() == "call") {
          std::vector<Term> extra(t.args().begin() + 1, t.args().end());
          return Goal::ho_call(t.args()[0], std::move(extra));
        }
        return Goal::literal(t);
      case TermKind::integer:
        throw Failure{{where, "an integer is not a goal"}};
      case TermKind::pred_ref:
        throw Failure{{where, "a partial application is not a goal; use call/N"}};
    }
    throw Failure{{where, "not a goal"}};
  }

  // --- items ---------------------------------------------------------------

  void parse_item(Program& prog, std::size_t& next_id) {
    reset_scope();
    if (peek().kind == Tok::neck) {
      parse_directive(prog, next_id);
      return;
    }
    const Token& first = peek();
    Term head = parse_primary();
    if (!head.is_callable()) fail(first, "clause head must be an atom or a compound term");
    if (peek().kind == Tok::eq) fail(peek(), "'=' cannot appear in a clause head");
    Clause c;
    c.head = head;
    if (peek().kind == Tok::neck) {
      next();
      SourceSpan body_span = span_of(peek());
      for (const Term& g : parse_conj()) c.body.push_back(to_goal(g, body_span));
    }
    const Token& last = expect(Tok::end, "',' or '.'");
    c.span = span_between(first, last);
    prog.clauses.push_back(std::move(c));
  }

  void parse_directive(Program& prog, std::size_t& next_id) {
    const Token& neck = next();
    const Token& kw = peek();
    if (kw.kind != Tok::name) fail(kw, "expected a directive name but found " + describe(kw));
    if (kw.text == "predprop") {
      next();
      parse_predprop(prog, neck, next_id);
      return;
    }
    AssertionStatus status;
    if (kw.text == "check")
      status = AssertionStatus::check;
    else if (kw.text == "trust")
      status = AssertionStatus::trust;
    else if (kw.text == "true")
      status = AssertionStatus::true_;
    else
      fail(kw, "unknown directive '" + kw.text + "'");
    next();
    expect_keyword("pred");
    Assertion a = parse_assertion_body(/*anon_arity=*/std::nullopt);
    const Token& last = expect(Tok::end, "':', '=>' or '.'");
    a.status = status;
    a.id = next_id++;
    a.span = span_between(neck, last);
    a.origin = {AssertionOrigin::Kind::user, {}};
    prog.assertions.push_back(std::move(a));
  }

  Assertion parse_assertion_body(std::optional<std::size_t> anon_arity) {
    Assertion a;
    const Token& ht = peek();
    if (anon_arity) {
      if (ht.kind != Tok::var || ht.text != "_")
        fail(ht, "predprop assertion head must be '_(X1,...,XK)'");
      next();
      std::vector<Term> args;
      if (peek().kind == Tok::lparen && peek().glued) args = parse_args();
      if (args.size() != *anon_arity)
        fail(ht, "predprop assertion head has arity " + std::to_string(args.size()) +
                     " but the predprop describes arity " + std::to_string(*anon_arity));
      a.head = Term::structure("_", std::move(args));
    } else {
      a.head = parse_primary();
      if (!a.head.is_callable()) fail(ht, "assertion head must be an atom or a compound term");
    }
    std::set<VarId> seen;
    for (const Term& arg : a.head.args()) {
      if (!arg.is_var() || !seen.insert(arg.var_id()).second)
        fail(ht, "assertion head arguments must be pairwise distinct variables");
    }
    auto literals = [&]() {
      std::vector<PropLiteral> out;
      const Token& at = peek();
      for (const Term& t : parse_conj()) {
        if (!t.is_callable()) fail(at, "property literal must be an atom or a compound term");
        out.push_back(PropLiteral{t, PropFlavor::state_prop});
      }
      return out;
    };
    if (peek().kind == Tok::colon) {
      next();
      a.pre = literals();
    }
    if (peek().kind == Tok::arrow) {
      next();
      a.post = literals();
    }
    return a;
  }

  void parse_predprop(Program& prog, const Token& neck, std::size_t& next_id) {
    PredProp pp;
    if (peek().kind == Tok::name && peek().text == "wrapper" && peek(1).kind == Tok::name) {
      next();
      pp.is_wrapper = true;
    }
    const Token& name = peek();
    if (name.kind != Tok::name) fail(name, "expected a predprop name but found " + describe(name));
    next();
    pp.name = name.text;
    expect(Tok::slash, "'/'");
    const Token& ar = expect(Tok::integer, "predprop arity");
    if (ar.value != 1) fail(ar, "a predprop takes exactly one argument (write " + pp.name + "/1)");
    expect_keyword("on");
    const Token& k = expect(Tok::integer, "described arity");
    if (k.value < 1) fail(k, "described arity must be at least 1");
    pp.described_arity = static_cast<std::size_t>(k.value);
    expect(Tok::lbrace, "'{'");
    AssertionOrigin origin{pp.is_wrapper ? AssertionOrigin::Kind::wrapper : AssertionOrigin::Kind::predprop,
                           pp.name};
    do {
      reset_scope();
      const Token& first = peek();
      expect_keyword("pred");
      Assertion a = parse_assertion_body(pp.described_arity);
      const Token& last = expect(Tok::end, "':', '=>' or '.'");
      a.status = AssertionStatus::check;
      a.id = next_id++;
      a.span = span_between(first, last);
      a.origin = origin;
      pp.anon_assertions.push_back(std::move(a));
    } while (peek().kind != Tok::rbrace && peek().kind != Tok::eof);
    expect(Tok::rbrace, "'}'");
    const Token& last = expect(Tok::end, "'.' after '}'");
    pp.span = span_between(neck, last);
    if (prog.predprops.count(pp.name)) {
      late_errors_.push_back({pp.span, "predprop '" + pp.name + "' is declared twice"});
      return;
    }
    prog.predprops.emplace(pp.name, std::move(pp));
  }
};

void classify_literals(const Program& prog, Assertion& a, std::vector<Diagnostic>& errors) {
  std::set<VarId> head_vars;
  for (const Term& arg : a.head.args()) head_vars.insert(arg.var_id());
  auto visit = [&](std::vector<PropLiteral>& lits) {
    for (PropLiteral& lit : lits) {
      PredKey k = lit.key();
      const PredProp* pp = k.arity == 1 ? prog.find_predprop(k.name) : nullptr;
      if (pp != nullptr) {
        lit.flavor = pp->is_wrapper ? PropFlavor::wrapper_predprop : PropFlavor::predprop;
        const Term& arg = lit.term.args()[0];
        if (!arg.is_var() || head_vars.count(arg.var_id()) == 0)
          errors.push_back({a.span, "predprop literal " + print_term(lit.term) +
                                        " must apply to a head argument variable"});
      } else if (is_builtin_prop(k) || prog.defines(k)) {
        lit.flavor = PropFlavor::state_prop;
      } else {
        errors.push_back({a.span, "undefined property or predprop '" + k.str() + "'"});
      }
    }
  };
  visit(a.pre);
  visit(a.post);
}

void validate(Program& prog, std::vector<Diagnostic>& errors) {
  for (const Clause& c : prog.clauses) {
    PredKey k = c.head.key();
    if (!k.name.empty() && k.name.front() == '$')
      errors.push_back({c.span, "predicate names starting with '$' are reserved: " + k.str()});
    else if (is_builtin(k) || k.name == "call")
      errors.push_back({c.span, "cannot redefine builtin predicate " + k.str()});
  }
  for (Assertion& a : prog.assertions) {
    PredKey k = a.head.key();
    if (!prog.defines(k) && !is_builtin(k))
      errors.push_back({a.span, "assertion on undefined predicate " + k.str()});
    classify_literals(prog, a, errors);
  }
  for (auto& [name, pp] : prog.predprops) {
    if (is_builtin_prop({name, 1}) || prog.defines({name, 1}))
      errors.push_back({pp.span, "predprop '" + name + "/1' clashes with a predicate of the same name"});
    for (Assertion& a : pp.anon_assertions) classify_literals(prog, a, errors);
  }
}

// --- printing ---------------------------------------------------------------

struct Printer {
  bool canonical = false;
  std::map<VarId, std::size_t> names;
  std::string out;

  void atom_name(const std::string& n) {
    if (n == "[]" || is_plain_atom(n)) {
      out += n;
      return;
    }
    out += '\'';
    for (char c : n) {
      if (c == '\'')
        out += "''";
      else if (c == '\\')
        out += "\\\\";
      else if (c == '\n')
        out += "\\n";
      else
        out += c;
    }
    out += '\'';
  }

  void var(const Term& t) {
    if (canonical) {
      auto [it, fresh] = names.emplace(t.var_id(), names.size());
      out += "_G" + std::to_string(it->second);
      return;
    }
    if (!t.name().empty() && t.name() != "_")
      out += t.name();
    else
      out += "_G" + std::to_string(t.var_id());
  }

  void args(std::span<const Term> as) {
    out += '(';
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (i) out += ',';
      term(as[i]);
    }
    out += ')';
  }

  void term(const Term& t) {
    switch (t.kind()) {
      case TermKind::var:
        var(t);
        return;
      case TermKind::atom:
        atom_name(t.name());
        return;
      case TermKind::integer:
        out += std::to_string(t.int_value());
        return;
      case TermKind::pred_ref:
        atom_name(t.name());
        if (!t.args().empty()) args(t.args());
        out += "~" + std::to_string(t.arity());
        return;
      case TermKind::structure:
        break;
    }
    if (t.name() == "=" && t.arity() == 2) {
      operand(t.args()[0]);
      out += " = ";
      operand(t.args()[1]);
      return;
    }
    if (t.name() == "." && t.arity() == 2) {
      out += '[';
      Term cur = t;
      bool first = true;
      while (cur.is_struct() && cur.name() == "." && cur.arity() == 2) {
        if (!first) out += ',';
        first = false;
        term(cur.args()[0]);
        cur = cur.args()[1];
      }
      if (!(cur.is_atom() && cur.name() == "[]")) {
        out += '|';
        term(cur);
      }
      out += ']';
      return;
    }
    atom_name(t.name());
    args(t.args());
  }

  void operand(const Term& t) {
    bool paren = t.is_struct() && t.name() == "=" && t.arity() == 2;
    if (paren) out += '(';
    term(t);
    if (paren) out += ')';
  }
};

std::string print_literals(const std::vector<PropLiteral>& lits) {
  std::string s;
  if (lits.size() > 1) s += '(';
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) s += ", ";
    s += print_term(lits[i].term);
  }
  if (lits.size() > 1) s += ')';
  return s;
}

std::string print_assertion_core(const Assertion& a) {
  std::string s;
  if (a.origin.kind == AssertionOrigin::Kind::user) {
    s += print_term(a.head);
  } else {
    Printer p;
    p.out = "_";
    p.args(a.head.args());
    s += p.out;
  }
  if (!a.pre.empty()) s += " : " + print_literals(a.pre);
  if (!a.post.empty()) s += " => " + print_literals(a.post);
  return s;
}

}  // namespace

bool is_plain_atom(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), ident_char);
}

std::string print_term(const Term& t) {
  Printer p;
  p.term(t);
  return p.out;
}

std::string print_term_canonical(const Term& t) {
  Printer p;
  p.canonical = true;
  p.term(t);
  return p.out;
}

std::string print_goal(const Goal& g) {
  if (g.kind == Goal::Kind::literal) return print_term(g.term);
  std::vector<Term> args{g.callee};
  args.insert(args.end(), g.extra.begin(), g.extra.end());
  return print_term(Term::structure("call", std::move(args)));
}

std::string print_clause(const Clause& c) {
  std::string s = print_term(c.head);
  if (!c.body.empty()) {
    s += " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) s += ", ";
      s += print_goal(c.body[i]);
    }
  }
  return s + ".";
}

std::string print_assertion(const Assertion& a) {
  if (a.origin.kind != AssertionOrigin::Kind::user) return "pred " + print_assertion_core(a) + ".";
  return ":- " + to_string(a.status) + " pred " + print_assertion_core(a) + ".";
}

std::string print_predprop(const PredProp& p) {
  std::string s = ":- predprop ";
  if (p.is_wrapper) s += "wrapper ";
  s += p.name + "/1 on " + std::to_string(p.described_arity) + " {\n";
  for (const Assertion& a : p.anon_assertions) s += "  " + print_assertion(a) + "\n";
  return s + "}.";
}

std::string print_program(const Program& p) {
  struct Item {
    std::size_t line, column;
    std::string text;
  };
  std::vector<Item> items;
  for (const Clause& c : p.clauses) items.push_back({c.span.line, c.span.column, print_clause(c)});
  for (const Assertion& a : p.assertions)
    items.push_back({a.span.line, a.span.column, print_assertion(a)});
  for (const auto& [name, pp] : p.predprops)
    items.push_back({pp.span.line, pp.span.column, print_predprop(pp)});
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return std::tie(x.line, x.column) < std::tie(y.line, y.column);
  });
  std::string out;
  for (const Item& it : items) out += it.text + "\n";
  return out;
}

namespace detail {
Program parse_unchecked(std::string_view text, const std::string& origin) {
  Program prog;
  prog.origin = origin;
  prog.source = std::string(text);
  Parser parser(text, origin, 1);
  std::vector<Diagnostic> errors;
  std::size_t next_id = 1;
  parser.parse_items(prog, errors, next_id);
  if (!errors.empty()) throw std::logic_error("prelude failed to parse: " + errors.front().message);
  for (std::size_t i = 0; i < prog.clauses.size(); ++i)
    prog.index[prog.clauses[i].head.key()].push_back(i);
  prog.next_var = parser.next_var();
  return prog;
}
}  // namespace detail

ParseOutcome parse_program(std::string_view text, const std::string& origin) {
  ParseOutcome result;
  Program prog;
  prog.origin = origin;
  prog.source = std::string(text);
  // Ids of the prelude and of user programs never overlap.
  Parser parser(text, origin, prelude().next_var);
  std::size_t next_id = 1;
  parser.parse_items(prog, result.errors, next_id);
  for (std::size_t i = 0; i < prog.clauses.size(); ++i)
    prog.index[prog.clauses[i].head.key()].push_back(i);
  prog.next_var = parser.next_var();
  validate(prog, result.errors);
  if (!result.errors.empty()) return result;
  try {
    result.program = normalize_assertions(std::move(prog));
  } catch (const LoadError& e) {
    result.errors.insert(result.errors.end(), e.diagnostics().begin(), e.diagnostics().end());
  }
  return result;
}

Term parse_term(std::string_view text, VarId first_var) {
  Parser parser(text, "<term>", first_var);
  try {
    return parser.parse_single_term();
  } catch (const Failure& f) {
    throw ParseError(f.diag.span, f.diag.message);
  }
}

Query parse_query(std::string_view text, VarId first_var) {
  Parser parser(text, "<goal>", first_var);
  try {
    return parser.parse_query_text();
  } catch (const Failure& f) {
    throw ParseError(f.diag.span, f.diag.message);
  }
}

}  // namespace hopl
