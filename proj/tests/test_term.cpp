#include <gtest/gtest.h>

#include "hopl/parser.hpp"
#include "hopl/program.hpp"
#include "hopl/unify.hpp"
#include "oracles/mm_unify.hpp"
#include "oracles/random_terms.hpp"

using namespace hopl;

namespace {

Term T(const std::string& s) { return parse_term(s); }

Term X() { return Term::var(1, "X"); }
Term Y() { return Term::var(2, "Y"); }

oracle::Bindings to_oracle(const Substitution& s) {
  oracle::Bindings b;
  for (const auto& [v, t] : s.bindings()) b.emplace(v, t);
  return b;
}

}  // namespace

TEST(Term, PredRefRejectsFullClosure) {
  EXPECT_THROW(Term::pred_ref("add", 2, {Term::integer(1), Term::integer(2)}), std::invalid_argument);
  EXPECT_NO_THROW(Term::pred_ref("add", 3, {Term::integer(1), Term::integer(2)}));
}

TEST(Term, StructureWithoutArgsIsAtom) {
  EXPECT_TRUE(Term::structure("a", {}).is_atom());
  EXPECT_EQ(Term::structure("f", {Term::atom("a")}).key(), (PredKey{"f", 1}));
}

TEST(Unify, TextbookMgu) {
  Term a = Term::structure("f", {X(), Term::atom("a")});
  Term b = Term::structure("f", {Term::atom("b"), Y()});
  auto s = unify(a, b);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->size(), 2u);
  EXPECT_EQ(*s->lookup(1), Term::atom("b"));
  EXPECT_EQ(*s->lookup(2), Term::atom("a"));
}

TEST(Unify, IdentityIsEmpty) {
  auto s = unify(X(), X());
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->empty());
}

TEST(Unify, OccursCheck) {
  Term fx = Term::structure("f", {X()});
  EXPECT_FALSE(unify(X(), fx));
  auto cyclic = unify(X(), fx, {}, false);
  ASSERT_TRUE(cyclic);
  EXPECT_THROW(apply_subst(X(), *cyclic), CyclicTermError);
}

TEST(Unify, PredRefsCompareClosedArgs) {
  EXPECT_TRUE(unify(T("add(1)~3"), T("add(X)~3")));
  EXPECT_FALSE(unify(T("add(1)~3"), T("add(2)~3")));
  EXPECT_FALSE(unify(T("add~3"), T("add(1)~3")));
  EXPECT_FALSE(unify(T("add~2"), T("add~3")));
}

TEST(ApplySubst, Examples) {
  EXPECT_EQ(apply_subst(Term::structure("f", {X()}), Substitution{{1, Term::atom("a")}}), T("f(a)"));
  EXPECT_EQ(apply_subst(Term::atom("a"), Substitution{{2, Term::atom("b")}}), Term::atom("a"));
  Substitution tri{{1, Term::structure("g", {Y()})}, {2, Term::atom("c")}};
  Term p = Term::structure("p", {X(), Y()});
  EXPECT_EQ(apply_subst(p, tri), T("p(g(c),c)"));
  EXPECT_EQ(apply_subst(p, normalize(tri)), T("p(g(c),c)"));
}

TEST(RenameApart, FreshAndDisjoint) {
  Clause c{T("p(X)"), {Goal::literal(T("q(X)"))}, {}};
  VarCounter counter(100);
  Clause r1 = rename_apart(c, counter);
  Clause r2 = rename_apart(c, counter);
  ASSERT_TRUE(r1.head.args()[0].is_var());
  EXPECT_EQ(r1.head.args()[0], r1.body[0].term.args()[0]);
  EXPECT_GE(r1.head.args()[0].var_id(), 100u);
  EXPECT_NE(r1.head.args()[0].var_id(), r2.head.args()[0].var_id());
  EXPECT_TRUE(is_variant(r1.head, c.head));

  Clause g{T("p(a)"), {Goal::literal(T("q(b)"))}, {}};
  Clause rg = rename_apart(g, counter);
  EXPECT_EQ(rg.head, g.head);
  EXPECT_EQ(rg.body, g.body);
}

TEST(Saturate, Examples) {
  std::vector<Term> abo{T("a"), T("b"), T("O")};
  EXPECT_EQ(print_term(saturate(T("sort_pair"), abo)), "sort_pair(a,b,O)");
  std::vector<Term> two{Term::integer(2), T("Z")};
  EXPECT_EQ(print_term(saturate(T("add(1)~3"), two)), "add(1,2,Z)");
  std::vector<Term> one{Term::integer(2)};
  EXPECT_EQ(print_term(saturate(T("add(1)~3"), one)), "add(1,2)~3");
}

TEST(Saturate, Errors) {
  std::vector<Term> three{Term::integer(2), Term::integer(3), T("Z")};
  try {
    saturate(T("add(1)~3"), three);
    FAIL() << "over-application accepted";
  } catch (const ResolutionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::arity);
  }
  try {
    saturate(X(), three);
    FAIL() << "unbound callee accepted";
  } catch (const ResolutionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::instantiation);
  }
  EXPECT_THROW(saturate(Term::integer(3), three), ResolutionError);
}

TEST(Saturate, AssociativeOverBatches) {
  oracle::TermGen gen(7);
  for (int i = 0; i < 300; ++i) {
    std::size_t arity = 1 + gen.pick(4);
    std::size_t closed = gen.pick(arity);
    std::vector<Term> cl;
    for (std::size_t k = 0; k < closed; ++k) cl.push_back(gen.term(2));
    Term callee = gen.coin(0.2) ? Term::atom("p") : Term::pred_ref("p", arity, cl);
    std::size_t n1 = gen.pick(3), n2 = 1 + gen.pick(3);
    std::vector<Term> xs, ys, all;
    for (std::size_t k = 0; k < n1; ++k) xs.push_back(gen.term(2));
    for (std::size_t k = 0; k < n2; ++k) ys.push_back(gen.term(2));
    all = xs;
    all.insert(all.end(), ys.begin(), ys.end());
    std::optional<Term> joined, stepped;
    try {
      joined = saturate(callee, all);
    } catch (const ResolutionError&) {
    }
    try {
      Term mid = saturate(callee, xs);
      if (mid.is_pred_ref() || n1 == 0) stepped = saturate(mid, ys);
    } catch (const ResolutionError&) {
    }
    if (joined && stepped) EXPECT_EQ(*joined, *stepped) << print_term(callee);
  }
}

class UnifyProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(UnifyProperties, AgreesWithEquationSolver) {
  oracle::TermGen gen(GetParam());
  gen.var_pool = 5;
  int unified = 0;
  for (int i = 0; i < 250; ++i) {
    Term a = gen.term(5);
    Term b = gen.coin(0.7) ? gen.perturb(a, 5) : gen.term(5);
    auto s = unify(a, b);
    auto o = oracle::mm_unify(a, b);
    ASSERT_EQ(s.has_value(), o.has_value()) << print_term(a) << " = " << print_term(b);
    auto r = unify(b, a);
    ASSERT_EQ(s.has_value(), r.has_value());
    if (!s) continue;
    ++unified;
    // Both inputs become equal, under ours and under the oracle's bindings.
    Term sa = apply_subst(a, *s);
    EXPECT_EQ(sa, apply_subst(b, *s));
    EXPECT_EQ(oracle::substitute(a, to_oracle(*s)), oracle::substitute(b, to_oracle(*s)));
    // Idempotence.
    Term probe = gen.term(4);
    EXPECT_EQ(apply_subst(sa, *s), sa);
    EXPECT_EQ(apply_subst(apply_subst(probe, *s), *s), apply_subst(probe, *s));
    for (const auto& [v, t] : s->bindings())
      for (const auto& [w, u] : s->bindings()) EXPECT_FALSE(oracle::contains_var(u, v));
    // Most general: same instance as the oracle's, up to renaming; symmetric likewise.
    EXPECT_TRUE(is_variant(sa, oracle::substitute(a, *o)));
    EXPECT_TRUE(is_variant(sa, apply_subst(a, *r)));
  }
  EXPECT_GT(unified, 50);
}

TEST_P(UnifyProperties, OccursCheckRejectsEveryProperSuperterm) {
  oracle::TermGen gen(GetParam() + 1000);
  for (int i = 0; i < 250; ++i) {
    Term v = gen.var();
    Term t = Term::structure("f", {gen.term(3), v});
    if (gen.coin()) t = Term::structure("g", {gen.term(2), t});
    ASSERT_TRUE(oracle::contains_var(t, v.var_id()));
    EXPECT_FALSE(unify(v, t)) << print_term(t);
    EXPECT_FALSE(unify(t, v));
    EXPECT_FALSE(oracle::mm_unify(v, t));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, UnifyProperties, ::testing::Values(1u, 2u, 3u, 4u));
