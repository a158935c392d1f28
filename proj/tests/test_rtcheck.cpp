#include <gtest/gtest.h>

#include "hopl/corpus.hpp"
#include "hopl/rtcheck.hpp"

using namespace hopl;

namespace {

Program load(const std::string& text) {
  ParseOutcome r = parse_program(text);
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors[0].message);
  return r.ok() ? *r.program : Program{};
}

CheckConfig cfg(Semantics s, ErrorMode m = ErrorMode::gather_all) {
  CheckConfig c;
  c.semantics = s;
  c.error_mode = m;
  return c;
}

std::vector<std::string> texts(const std::vector<Answer>& as) {
  std::vector<std::string> out;
  for (const Answer& a : as) out.push_back(format_answer(a));
  return out;
}

const char* kSort =
    "order(lt).\norder(eq).\norder(gt).\n"
    ":- predprop comparator/1 on 3 {\n  pred _(X, Y, O) : (atm(X), atm(Y)) => order(O).\n}.\n"
    ":- check pred isort(L, P, S) : (list(L), comparator(P)) => list(S).\n"
    "isort([], _, []).\n"
    "isort([X|Xs], P, S) :- isort(Xs, P, S1), insert(X, S1, P, S).\n"
    "insert(X, [], _, [X]).\n"
    "insert(X, [Y|Ys], P, R) :- call(P, X, Y, O), place(O, X, Y, Ys, P, R).\n"
    "place(lt, X, Y, Ys, _, [X,Y|Ys]).\n"
    "place(eq, X, Y, Ys, _, [X,Y|Ys]).\n"
    "place(gt, X, Y, Ys, P, [Y|R]) :- insert(X, Ys, P, R).\n"
    "bcmp(a, b, lt).\nbcmp(b, a, bigger).\nbcmp(X, X, eq).\n"
    "gcmp(a, b, lt).\ngcmp(b, a, gt).\ngcmp(X, X, eq).\n";

std::vector<CorpusCase> corpus() { return load_corpus(HOPL_CORPUS_DIR); }

}  // namespace

TEST(Config, ParseNames) {
  EXPECT_EQ(parse_semantics("tight"), Semantics::tight);
  EXPECT_FALSE(parse_semantics("strict"));
  EXPECT_EQ(parse_error_mode("fail-fast"), ErrorMode::fail_fast);
  EXPECT_EQ(parse_error_mode("gather_all"), ErrorMode::gather_all);
  EXPECT_FALSE(parse_error_mode("first"));
}

TEST(Registry, AttachIsIdempotent) {
  TightRegistry reg;
  EXPECT_TRUE(reg.attach({"cmp", 3}, "comparator"));
  EXPECT_FALSE(reg.attach({"cmp", 3}, "comparator"));
  EXPECT_TRUE(reg.attach({"cmp", 3}, "other"));
  EXPECT_EQ(reg.size(), 2u);
  ASSERT_NE(reg.find({"cmp", 3}), nullptr);
  EXPECT_EQ(reg.find({"cmp", 2}), nullptr);
}

TEST(Semantics, OffIsUnchecked) {
  Program p = load(kSort);
  for (const char* g : {"isort([b,a], bcmp~3, S)", "isort([b,a], gcmp~3, S)", "isort(foo, 3, S)"}) {
    Report r = run_checked(p, g, cfg(Semantics::off));
    SolveResult bare = solve(p, g);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_EQ(texts(r.answers), texts(bare.answers));
    EXPECT_EQ(r.outcome, bare.outcome);
  }
}

TEST(Semantics, FoSeesOnlyCallable) {
  Program p = load(kSort);
  EXPECT_TRUE(run_checked(p, "isort([b,a], bcmp~3, S)", cfg(Semantics::fo)).violations.empty());
  Report bad = run_checked(p, "isort([b,a], 3, S)", cfg(Semantics::fo));
  // One per recursive isort call.
  ASSERT_EQ(bad.violations.size(), 3u);
  for (const Violation& v : bad.violations) EXPECT_EQ(v.kind, CheckKind::calls);
}

TEST(Semantics, TightAttachesToThePredicate) {
  Program p = load(kSort);
  Report r = run_checked(p, "isort([b,a], bcmp~3, S), bcmp(b, a, _)", cfg(Semantics::tight));
  ASSERT_EQ(r.attachments.size(), 1u);
  EXPECT_EQ(r.attachments[0].first, (PredKey{"bcmp", 3}));
  ASSERT_FALSE(r.violations.empty());
  for (const Violation& v : r.violations) {
    EXPECT_EQ(v.origin.kind, AssertionOrigin::Kind::predprop);
    EXPECT_EQ(v.origin.name, "comparator");
    EXPECT_EQ(v.check_site.kind, CheckSite::Kind::tight_registry);
    EXPECT_EQ(v.pred_key, (PredKey{"bcmp", 3}));
  }
  // The direct call after the sort is checked as well.
  EXPECT_EQ(r.violations.back().culprit, "bcmp(b,a,bigger)");
  EXPECT_TRUE(r.wrappers.empty());
}

TEST(Semantics, LooseWrapsTheArgument) {
  Program p = load(kSort);
  Report r = run_checked(p, "isort([b,a], bcmp~3, S), bcmp(b, a, _)", cfg(Semantics::loose));
  ASSERT_FALSE(r.wrappers.empty());
  EXPECT_EQ(r.wrappers[0].name, "$wrap_1");
  EXPECT_EQ(print_term(r.wrappers[0].wrapped), "bcmp~3");
  EXPECT_TRUE(r.attachments.empty());
  ASSERT_FALSE(r.violations.empty());
  for (const Violation& v : r.violations) {
    EXPECT_EQ(v.check_site.kind, CheckSite::Kind::wrapper);
    EXPECT_NE(v.culprit.find("bcmp("), std::string::npos) << v.culprit;
  }
  // The direct call is not inside the wrapper and is not checked.
  Report direct = run_checked(p, "bcmp(b, a, _)", cfg(Semantics::loose));
  EXPECT_TRUE(direct.violations.empty());
}

TEST(Semantics, TightInstantiationAndArity) {
  Program p = load(kSort);
  Report unbound = run_checked(p, "isort([a], P, S)", cfg(Semantics::tight));
  ASSERT_FALSE(unbound.violations.empty());
  EXPECT_EQ(unbound.violations[0].kind, CheckKind::calls);
  Report arity = run_checked(p, "isort([a], bcmp~2, S)", cfg(Semantics::tight));
  ASSERT_FALSE(arity.violations.empty());
  EXPECT_EQ(arity.violations[0].kind, CheckKind::calls);
}

TEST(Semantics, GoodComparatorIsCleanEverywhere) {
  Program p = load(kSort);
  std::vector<std::string> expected;
  for (Semantics s : kAllSemantics) {
    Report r = run_checked(p, "isort([b,a], gcmp~3, S)", cfg(s));
    EXPECT_TRUE(r.violations.empty()) << to_string(s);
    if (expected.empty()) expected = texts(r.answers);
    EXPECT_EQ(texts(r.answers), expected) << to_string(s);
  }
  EXPECT_EQ(expected, (std::vector<std::string>{"S = [a,b]"}));
}

TEST(ErrorModes, FailFastHaltsAtFirst) {
  Program p = load(":- check pred inc(X, Y) : int(X).\ninc(X, s(X)).\n");
  Report all = run_checked(p, "inc(a, X), inc(b, Y)", cfg(Semantics::tight));
  Report first = run_checked(p, "inc(a, X), inc(b, Y)", cfg(Semantics::tight, ErrorMode::fail_fast));
  ASSERT_EQ(all.violations.size(), 2u);
  EXPECT_EQ(all.violations[0].seq, 1u);
  EXPECT_EQ(all.violations[1].seq, 2u);
  EXPECT_EQ(all.violations[0].culprit, "inc(a,_G0)");
  ASSERT_EQ(first.violations.size(), 1u);
  EXPECT_EQ(first.outcome.status, EngineOutcome::Status::halted);
  EXPECT_EQ(to_json(first.violations[0]), to_json(all.violations[0]));
  // Gather-all continues as if the checks had passed.
  EXPECT_EQ(texts(all.answers), (std::vector<std::string>{"X = s(a), Y = s(b)"}));
}

TEST(Registry, GrowsMonotonicallyDuringARun) {
  for (const CorpusCase& c : corpus()) {
    ParseOutcome parsed = parse_program(c.source, c.path);
    ASSERT_TRUE(parsed.ok()) << c.name;
    const Program& p = *parsed.program;
    Query q = parse_query(c.goal, p.next_var);
    RunState run(std::max(q.next_var, p.next_var));
    Checker checker(p, cfg(Semantics::tight));
    std::size_t last = 0;
    bool shrank = false;
    Engine engine(p, EngineLimits{}, run, &checker, [&](const DerivationEvent&) {
      shrank = shrank || checker.registry().size() < last;
      last = checker.registry().size();
    });
    engine.start(q);
    while (engine.next()) {
    }
    EXPECT_FALSE(shrank) << c.name;
    EXPECT_GE(checker.registry().size(), last);
  }
}

// Structural invariants of every violation in every corpus run.
TEST(Violations, ProvenanceIsConsistent) {
  for (const CorpusCase& c : corpus()) {
    ParseOutcome parsed = parse_program(c.source, c.path);
    ASSERT_TRUE(parsed.ok());
    const Program& p = *parsed.program;
    std::vector<const Assertion*> all;
    for (const Assertion& a : p.assertions) all.push_back(&a);
    for (const auto& [n, pp] : p.predprops)
      for (const Assertion& a : pp.anon_assertions) all.push_back(&a);
    for (Semantics s : kAllSemantics) {
      Report r = run_checked(p, c.goal, cfg(s));
      std::size_t prev = 0;
      for (const Violation& v : r.violations) {
        EXPECT_GT(v.seq, prev);
        prev = v.seq;
        ASSERT_FALSE(v.assertion_ids.empty());
        EXPECT_EQ(v.assertion_id, v.assertion_ids.front());
        auto it = std::find_if(all.begin(), all.end(), [&](const Assertion* a) { return a->id == v.assertion_id; });
        ASSERT_NE(it, all.end()) << c.name;
        const Assertion& a = **it;
        EXPECT_EQ(a.span, v.span) << c.name;
        EXPECT_EQ(a.origin.kind == AssertionOrigin::Kind::user, v.origin.kind == AssertionOrigin::Kind::user);
        const bool via_wrapper = v.origin.kind == AssertionOrigin::Kind::wrapper ||
                                 (v.origin.kind == AssertionOrigin::Kind::predprop && s == Semantics::loose);
        EXPECT_EQ(v.check_site.kind == CheckSite::Kind::wrapper, via_wrapper) << c.name;
        EXPECT_EQ(v.check_site.kind == CheckSite::Kind::tight_registry,
                  v.origin.kind == AssertionOrigin::Kind::predprop && s == Semantics::tight)
            << c.name;
        EXPECT_EQ(v.kind == CheckKind::success, v.exit.has_value());
        // The culprit re-parses and matches the assertion head.
        Term culprit = parse_term(v.culprit);
        ASSERT_TRUE(culprit.is_callable()) << v.culprit;
        EXPECT_EQ(culprit.key(), v.pred_key);
        std::span<const Term> cargs = culprit.args();
        std::span<const Term> hargs = a.head.args();
        ASSERT_GE(cargs.size(), hargs.size());
        Term tail = Term::structure("t", {cargs.end() - hargs.size(), cargs.end()});
        Term head = Term::structure("t", {hargs.begin(), hargs.end()});
        EXPECT_TRUE(unify(tail, head).has_value()) << c.name << ": " << v.culprit;
      }
    }
  }
}

TEST(Violations, FailFastIsPrefixOfGatherAll) {
  for (const CorpusCase& c : corpus()) {
    ParseOutcome parsed = parse_program(c.source, c.path);
    ASSERT_TRUE(parsed.ok());
    for (Semantics s : kAllSemantics) {
      Report all = run_checked(*parsed.program, c.goal, cfg(s));
      Report first = run_checked(*parsed.program, c.goal, cfg(s, ErrorMode::fail_fast));
      if (all.violations.empty()) {
        EXPECT_TRUE(first.violations.empty());
        EXPECT_EQ(texts(first.answers), texts(all.answers)) << c.name;
        continue;
      }
      ASSERT_EQ(first.violations.size(), 1u) << c.name;
      EXPECT_EQ(to_json(first.violations[0]), to_json(all.violations[0])) << c.name << " " << to_string(s);
    }
  }
}
