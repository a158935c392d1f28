#include <gtest/gtest.h>

#include <random>

#include "hopl/assertions.hpp"

using namespace hopl;

namespace {

Program load(const std::string& text) {
  ParseOutcome r = parse_program(text);
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors[0].message);
  return r.ok() ? *r.program : Program{};
}

std::vector<Diagnostic> load_errors(const std::string& text) { return parse_program(text).errors; }

PropOutcome prop(const Program& p, const std::string& goal, std::size_t budget = kDefaultPropBudget) {
  RunState run(p.next_var + 1000);
  return eval_prop(p, parse_term(goal, p.next_var), budget, run);
}

std::vector<Term> args_of(const Program& p, const std::string& goal) {
  Term g = parse_term(goal, p.next_var);
  return {g.args().begin(), g.args().end()};
}

CheckResult calls(const Program& p, const PredKey& k, const std::string& goal) {
  RunState run(p.next_var + 1000);
  auto args = args_of(p, goal);
  return check_calls(p, p.groups.at(k), args, kDefaultPropBudget, run);
}

CheckResult success(const Program& p, const PredKey& k, const std::string& entry, const std::string& exit) {
  RunState run(p.next_var + 1000);
  auto in = args_of(p, entry);
  auto out = args_of(p, exit);
  return check_success(p, p.groups.at(k), in, out, kDefaultPropBudget, run);
}

}  // namespace

TEST(Normalize, SingleAssertionOneDisjunct) {
  Program p = load(
      ":- predprop int_transformer/1 on 2 { pred _(X, Y) : int(X) => int(Y). }.\n"
      ":- check pred map(L,P,R) : (list(L), int_transformer(P)) => list(R).\n"
      "map([], _, []).\n");
  ASSERT_EQ(p.groups.count({"map", 3}), 1u);
  EXPECT_EQ(p.groups.at({"map", 3}).assertions.size(), 1u);
  EXPECT_EQ(p.predprop_groups.at("int_transformer").assertions.size(), 1u);
}

TEST(Normalize, TwoAssertionsTwoDisjuncts) {
  Program p = load(":- check pred p(X) : int(X).\n:- check pred p(X) : atm(X).\np(_).\n");
  EXPECT_EQ(p.groups.at({"p", 1}).assertions.size(), 2u);
}

TEST(Normalize, TrustAndTrueAreNotGrouped) {
  Program p = load(":- trust pred p(X) : int(X).\n:- true pred p(X) : atm(X).\np(_).\n");
  EXPECT_EQ(p.assertions.size(), 2u);
  EXPECT_TRUE(p.groups.count({"p", 1}) == 0 || p.groups.at({"p", 1}).empty());
}

TEST(Normalize, Errors) {
  EXPECT_FALSE(load_errors(":- check pred p(X) => int(Z).\np(a).\n").empty());
  EXPECT_FALSE(load_errors(":- check pred p(X) : undefined_prop(X).\np(a).\n").empty());
  EXPECT_FALSE(load_errors(":- check pred p(X, X) : int(X).\np(a, a).\n").empty());
  EXPECT_FALSE(load_errors(":- predprop pp/1 on 2 { pred _(X) : int(X). }.\np(a).\n").empty());
  // Post variables reachable through the precondition are fine.
  EXPECT_TRUE(load_errors(":- check pred p(X) : member(Y, X) => int(Y).\np([1]).\n").empty());
}

TEST(EvalProp, BuiltinsAndUserProps) {
  Program p = load("loop(X) :- loop(X).\nsmall(1).\nsmall(2).\ncolor(red).\n");
  EXPECT_EQ(prop(p, "int(7)"), PropOutcome::holds());
  EXPECT_EQ(prop(p, "list(f(a))"), PropOutcome::fails());
  EXPECT_EQ(prop(p, "list([a,b])"), PropOutcome::holds());
  EXPECT_EQ(prop(p, "small(2)"), PropOutcome::holds());
  EXPECT_EQ(prop(p, "small(3)"), PropOutcome::fails());
  EXPECT_EQ(prop(p, "callable(foo~2)"), PropOutcome::holds());
  EXPECT_EQ(prop(p, "callable(3)"), PropOutcome::fails());
  EXPECT_EQ(prop(p, "loop(a)", 1000), PropOutcome::inconclusive(PropOutcome::Reason::budget));
  EXPECT_EQ(prop(p, "color(C)"), PropOutcome::inconclusive(PropOutcome::Reason::unbound_required));
  EXPECT_EQ(prop(p, "var(C)"), PropOutcome::holds());
}

TEST(CheckCalls, SingleAssertion) {
  Program p = load(":- check pred inc(X, Y) : int(X).\ninc(X, s(X)).\n");
  CheckResult bad = calls(p, {"inc", 2}, "inc(a, Z)");
  ASSERT_EQ(bad.violations.size(), 1u);
  EXPECT_EQ(bad.violations[0].kind, CheckKind::calls);
  EXPECT_EQ(bad.violations[0].assertions.size(), 1u);
  EXPECT_TRUE(calls(p, {"inc", 2}, "inc(3, Z)").passed());
}

TEST(CheckCalls, DisjunctiveTruthTable) {
  Program p = load(":- check pred p(X) : int(X).\n:- check pred p(X) : atm(X).\np(_).\n");
  EXPECT_TRUE(calls(p, {"p", 1}, "p(3)").passed());
  EXPECT_TRUE(calls(p, {"p", 1}, "p(foo)").passed());
  CheckResult bad = calls(p, {"p", 1}, "p([1])");
  ASSERT_EQ(bad.violations.size(), 1u);
  EXPECT_EQ(bad.violations[0].assertions.size(), 2u);
}

TEST(CheckCalls, InconclusiveIsNotAViolation) {
  Program p = load("loop(X) :- loop(X).\n:- check pred p(X) : loop(X).\np(_).\n");
  RunState run(p.next_var + 1000);
  auto args = args_of(p, "p(a)");
  CheckResult r = check_calls(p, p.groups.at({"p", 1}), args, 100, run);
  EXPECT_TRUE(r.violations.empty());
  ASSERT_EQ(r.inconclusives.size(), 1u);
  EXPECT_EQ(r.inconclusives[0].inconclusive_reason, PropOutcome::Reason::budget);
}

TEST(CheckCalls, EmptyGroupIsVacuouslyTrue) {
  Program p = load("p(_).\n");
  RunState run(p.next_var + 1000);
  auto args = args_of(p, "p(a)");
  EXPECT_TRUE(check_calls(p, AssertionGroup{}, args, kDefaultPropBudget, run).passed());
}

TEST(CheckSuccess, Conditional) {
  Program p = load(":- check pred dup(X, Y) : int(X) => int(Y).\ndup(_, a).\n");
  CheckResult bad = success(p, {"dup", 2}, "dup(3, Y)", "dup(3, a)");
  ASSERT_EQ(bad.violations.size(), 1u);
  EXPECT_EQ(bad.violations[0].kind, CheckKind::success);
  EXPECT_TRUE(success(p, {"dup", 2}, "dup(foo, Y)", "dup(foo, a)").passed());
  EXPECT_TRUE(success(p, {"dup", 2}, "dup(3, Y)", "dup(3, 4)").passed());
}

TEST(CheckSuccess, UsesRecordedPreOutcomes) {
  Program p = load(":- check pred dup(X, Y) : int(X) => int(Y).\ndup(_, a).\n");
  RunState run(p.next_var + 1000);
  auto in = args_of(p, "dup(foo, Y)");
  auto out = args_of(p, "dup(foo, a)");
  std::vector<PropOutcome::Kind> held{PropOutcome::Kind::holds};
  CheckResult r = check_success(p, p.groups.at({"dup", 2}), in, out, kDefaultPropBudget, run, callable_baseline, &held);
  EXPECT_EQ(r.violations.size(), 1u);
}

TEST(Baseline, PredpropReadAsCallable) {
  Program p = load(
      ":- predprop cmp/1 on 3 { pred _(X, Y, O) : int(X) => atm(O). }.\n"
      ":- check pred s(P) : cmp(P).\ns(_).\n");
  EXPECT_TRUE(calls(p, {"s", 1}, "s(foo~3)").passed());
  EXPECT_TRUE(calls(p, {"s", 1}, "s(foo)").passed());
  EXPECT_EQ(calls(p, {"s", 1}, "s(3)").violations.size(), 1u);
}

// Adding an assertion to a predicate can turn a calls violation into a pass,
// never a pass into a violation.
TEST(Properties, DisjunctMonotonicity) {
  const std::vector<std::string> props = {"int(X)", "atm(X)", "list(X)", "ground(X)", "nonvar(X)", "var(X)",
                                          "(nonvar(X), list(X))", "member(X, [a, 1])"};
  const std::vector<std::string> values = {"3", "foo", "[1]", "f(Z)", "Z", "[]", "g(a)", "1"};
  std::mt19937_64 rng(5);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  for (int round = 0; round < 200; ++round) {
    std::string decls;
    std::size_t n = 1 + pick(3);
    for (std::size_t i = 0; i < n; ++i) decls += ":- check pred p(X) : " + props[pick(props.size())] + ".\n";
    std::string extra = ":- check pred p(X) : " + props[pick(props.size())] + ".\n";
    Program small = load(decls + "p(_).\n");
    Program big = load(decls + extra + "p(_).\n");
    std::string goal = "p(" + values[pick(values.size())] + ")";
    bool before = calls(small, {"p", 1}, goal).passed();
    bool after = calls(big, {"p", 1}, goal).passed();
    EXPECT_TRUE(!before || after) << decls << extra << goal;
  }
}

TEST(Properties, PropEvaluationDoesNotBindCaller) {
  Program p = load("color(red).\n:- check pred q(X) : color(X).\nq(_).\n");
  RunState run(p.next_var + 1000);
  auto args = args_of(p, "q(C)");
  Term before = args[0];
  check_calls(p, p.groups.at({"q", 1}), args, kDefaultPropBudget, run);
  EXPECT_EQ(args[0], before);
  EXPECT_TRUE(args[0].is_var());
}
