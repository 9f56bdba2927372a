#include <gtest/gtest.h>

#include <random>

#include "rgt/rule.hpp"
#include "rgt/text.hpp"
#include "support/brute_force.hpp"
#include "support/properties.hpp"

namespace rgt {
namespace {

Rule parse_rule(const std::string& text) { return parse_program(text + "\nMain = skip\n").rules.at(0); }

Value list_value(Label label) { return Value(std::move(label)); }

TEST(Rule, ExpandsBidirectionalEdgesInOrientationOrder) {
  const Rule rule = parse_rule(R"(
rule r(i, j: int; x, y, z: list) {
  lhs { 1: x; 2: y; 3: z; 1 -- 3, j; 1 -> 2, 0; 1 -- 2, i }
  rhs { 1: x; 2: y; 3: z; 1 -- 2, i; 1 -- 3, j }
  interface = [1, 2, 3]
})");
  const RuleInstanceSet set = compile_rule(rule);
  ASSERT_EQ(set.bidirectional_edges, 2U);
  ASSERT_EQ(set.instances.size(), 4U);
  const std::vector<std::vector<bool>> expected{{false, false}, {false, true}, {true, false}, {true, true}};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& instance = set.instances[k];
    EXPECT_EQ(instance.reversed, expected[k]);
    const auto& first = instance.lhs_edges[0];
    const auto& last = instance.lhs_edges[2];
    EXPECT_EQ(first.source, expected[k][0] ? 2U : 0U);
    EXPECT_EQ(first.target, expected[k][0] ? 0U : 2U);
    EXPECT_EQ(last.source, expected[k][1] ? 1U : 0U);
    EXPECT_EQ(last.target, expected[k][1] ? 0U : 1U);
    EXPECT_EQ(instance.lhs_edges[1].source, 0U);  // directed edges never turn
  }
}

TEST(Rule, NoBidirectionalEdgesGiveOneInstance) {
  const Rule rule = parse_rule("rule r() { lhs { 1: empty } rhs { 1: empty } interface = [1] }");
  const RuleInstanceSet set = compile_rule(rule);
  EXPECT_EQ(set.instances.size(), 1U);
  EXPECT_TRUE(set.instances[0].reversed.empty());
}

TEST(Rule, PreservedEdgesPairByKindLabelAndMark) {
  const Rule rule = parse_rule(R"(
rule r(i, j: int; x, y: list) {
  lhs { 1: x; 2: y; 1 -> 2, j # dashed; 1 -- 2, i }
  rhs { 1: x; 2: y; 1 -- 2, i # dashed; 1 -> 2, j }
  interface = [1, 2]
})");
  const RuleInstanceSet set = compile_rule(rule);
  for (const auto& instance : set.instances) {
    ASSERT_EQ(instance.rhs_edges.size(), 2U);
    EXPECT_EQ(instance.rhs_edges[0].lhs, std::optional<std::size_t>(1));
    EXPECT_EQ(instance.rhs_edges[1].lhs, std::optional<std::size_t>(0));
    // A preserved bidirectional edge keeps the orientation it was matched in.
    EXPECT_EQ(instance.rhs_edges[0].source, instance.lhs_edges[1].source);
    EXPECT_EQ(instance.rhs_edges[0].target, instance.lhs_edges[1].target);
  }
}

TEST(Rule, IdenticalEdgesArePairedFirst) {
  const Rule rule = parse_rule(R"(
rule r() {
  lhs { 1: empty; 2: empty; 1 -> 2, 1; 1 -> 2, 2 }
  rhs { 1: empty; 2: empty; 1 -> 2, 2; 1 -> 2, 5 }
  interface = [1, 2]
})");
  const RuleInstance instance = compile_rule(rule).instances.at(0);
  EXPECT_EQ(instance.rhs_edges[0].lhs, std::optional<std::size_t>(1));
  EXPECT_EQ(instance.rhs_edges[1].lhs, std::optional<std::size_t>(0));
}

TEST(Rule, DeletedNodesAndKeptLabels) {
  const Rule rule = parse_rule(R"(
rule r(x: list) {
  lhs { 1: x; 2: empty; 3: 7 }
  rhs { 1: x; 3: 8 }
  interface = [1, 3]
})");
  const RuleInstance instance = compile_rule(rule).instances.at(0);
  EXPECT_EQ(instance.deleted_nodes, std::vector<std::size_t>{1});
  EXPECT_TRUE(instance.rhs_nodes[0].keeps_label);
  EXPECT_FALSE(instance.rhs_nodes[1].keeps_label);
}

TEST(Rule, SearchPlanCoversEveryElementOnce) {
  const Rule rule = parse_rule(R"(
rule r(x: list) {
  lhs { 1: x (R); 2: empty; 3: empty; 4: empty; 1 -> 2, empty; 3 -> 2, empty; 2 -> 2, empty; 1 -> 2, 1 }
  rhs { 1: x (R); 2: empty; 3: empty; 4: empty; 1 -> 2, empty; 3 -> 2, empty; 2 -> 2, empty; 1 -> 2, 1 }
  interface = [1, 2, 3, 4]
})");
  const RuleInstanceSet set = compile_rule(rule);
  const auto& instance = set.instances.at(0);
  const auto& plan = instance.plan;
  // Each node is bound once, by a node step or as the far end of an edge step.
  std::vector<int> nodes(4, 0);
  std::vector<int> edges(4, 0);
  for (const auto& step : plan) {
    switch (step.kind) {
      case SearchStep::Kind::root_node:
      case SearchStep::Kind::any_node:
        ++nodes.at(step.index);
        break;
      case SearchStep::Kind::edge_out:
        ++edges.at(step.index);
        ++nodes.at(instance.lhs_edges.at(step.index).target);
        break;
      case SearchStep::Kind::edge_in:
        ++edges.at(step.index);
        ++nodes.at(instance.lhs_edges.at(step.index).source);
        break;
      case SearchStep::Kind::edge_between:
      case SearchStep::Kind::loop:
        ++edges.at(step.index);
        break;
    }
  }
  EXPECT_EQ(nodes, std::vector<int>(4, 1));
  EXPECT_EQ(edges, std::vector<int>(4, 1));
  ASSERT_FALSE(plan.empty());
  EXPECT_EQ(plan.front().kind, SearchStep::Kind::root_node);
  EXPECT_EQ(plan.front().index, 0U);
  EXPECT_EQ(plan.back().kind, SearchStep::Kind::any_node);  // the isolated node comes last
  EXPECT_EQ(plan.back().index, 3U);
}

TEST(Rule, MalformedRulesAreRejected) {
  const std::vector<std::string> bad{
      // unbound right-hand variable
      "rule r(x, y: list) { lhs { 1: x } rhs { 1: y } interface = [1] }",
      // two list variables in one pattern
      "rule r(x, y: list) { lhs { 1: x:y } rhs { 1: x:y } interface = [1] }",
      // arithmetic on the left
      "rule r(i: int) { lhs { 1: i + 1 } rhs { 1: i } interface = [1] }",
      // parallel bidirectional edges
      "rule r() { lhs { 1: empty; 2: empty; 1 -- 2, empty; 2 -- 1, empty } rhs { } interface = [] }",
      // duplicate parameter
      "rule r(x: list; x: list) { lhs { 1: x } rhs { 1: x } interface = [1] }",
      // node listed twice in the interface
      "rule r() { lhs { 1: empty; 2: empty } rhs { 1: empty } interface = [1, 1] }",
      // any mark on a created node
      "rule r() { lhs { } rhs { 1: empty # any } interface = [] }",
      // list variable in arithmetic
      "rule r(x: list) { lhs { 1: x } rhs { 1: x + 1 } interface = [1] }",
      // a new bidirectional edge
      "rule r() { lhs { 1: empty; 2: empty } rhs { 1: empty; 2: empty; 1 -- 2, empty } interface = [1, 2] }",
  };
  for (const auto& text : bad) {
    EXPECT_ANY_THROW(compile_rule(parse_rule(text))) << text;
  }
}

TEST(Rule, RuleErrorsCarryTheRuleName) {
  Rule rule;
  rule.name = "broken";
  rule.lhs.nodes.push_back({"1", {VarRef{3, VarType::list}}, NodeMark::none, false});
  try {
    compile_rule(rule);
    FAIL() << "expected a RuleError";
  } catch (const RuleError& error) {
    EXPECT_NE(std::string(error.what()).find("broken"), std::string::npos);
  }
}

TEST(Labels, MatchBindsAndChecksConsistency) {
  const LabelExpr pattern{VarRef{0, VarType::integer}, VarRef{1, VarType::list}, Atom(std::int64_t{9})};
  Bindings b(2);
  const Label label{4, 5, 6, 9};
  ASSERT_TRUE(match_label(pattern, label, b));
  EXPECT_EQ(b.value(0), Value(std::int64_t{4}));
  EXPECT_EQ(b.value(1), list_value({5, 6}));

  Bindings fixed(2);
  fixed.bind(1, list_value({5}));
  EXPECT_FALSE(match_label(pattern, label, fixed));
  EXPECT_FALSE(fixed.is_bound(0));  // left as it was

  Bindings strings(2);
  const Label with_string{Atom(std::string("a")), 9};
  EXPECT_FALSE(match_label(pattern, with_string, strings));  // an int variable needs an int
}

TEST(Labels, BindingsRollBack) {
  Bindings b(3);
  b.bind(0, std::int64_t{1});
  const auto mark = b.checkpoint();
  b.bind(1, std::int64_t{2});
  b.bind(2, list_value({}));
  b.rollback(mark);
  EXPECT_TRUE(b.is_bound(0));
  EXPECT_FALSE(b.is_bound(1));
  EXPECT_FALSE(b.is_bound(2));
  EXPECT_THROW(b.value(1), EvalError);
  EXPECT_THROW(b.bind(0, std::int64_t{3}), EvalError);
}

TEST(Labels, EvaluationAndOverflow) {
  Bindings b(2);
  b.bind(0, std::int64_t{6});
  b.bind(1, list_value({1, 2}));
  const LabelExpr expr{IntExpr::binary(IntExpr::Kind::multiply, IntExpr::var(0), IntExpr::literal(7)),
                       VarRef{1, VarType::list}, IntExpr::negated(IntExpr::var(0))};
  EXPECT_EQ(eval(expr, b), (Label{42, 1, 2, -6}));

  Bindings big(1);
  big.bind(0, std::numeric_limits<std::int64_t>::max());
  EXPECT_THROW(eval(IntExpr::binary(IntExpr::Kind::add, IntExpr::var(0), IntExpr::literal(1)), big), EvalError);
  EXPECT_THROW(eval(IntExpr::negated(IntExpr::literal(std::numeric_limits<std::int64_t>::min())), big),
               EvalError);

  const Condition c = Condition::all({Condition::compare(CompareOp::less, IntExpr::var(0), IntExpr::literal(7)),
                                      Condition::negate(Condition::compare(CompareOp::equal, IntExpr::var(0),
                                                                           IntExpr::literal(5)))});
  EXPECT_TRUE(eval(c, b));
  EXPECT_FALSE(eval(Condition::any({Condition::compare(CompareOp::greater, IntExpr::var(0), IntExpr::literal(6))}), b));
}

// match_label against an enumerator that tries every split of the label.
TEST(Labels, MatchAgreesWithExhaustiveSplits) {
  std::mt19937_64 rng(7);
  const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const auto atom = [&]() -> Atom { return pick(4) == 0 ? Atom(std::string("s")) : Atom(std::int64_t(pick(3))); };
  std::size_t disagreements = 0;
  for (int c = 0; c < 5000; ++c) {
    LabelExpr pattern;
    bool list_used = false;
    const std::size_t length = pick(4);
    for (std::size_t k = 0; k < length; ++k) {
      switch (pick(4)) {
        case 0: pattern.push_back(atom()); break;
        case 1: pattern.push_back(VarRef{0, VarType::integer}); break;
        case 2: pattern.push_back(VarRef{1, VarType::integer}); break;
        default:
          if (list_used) {
            pattern.push_back(atom());
          } else {
            pattern.push_back(VarRef{2, VarType::list});
            list_used = true;
          }
      }
    }
    Label label;
    const std::size_t label_length = pick(5);
    for (std::size_t k = 0; k < label_length; ++k) label.push_back(atom());

    testing::Assignment base;
    Bindings bindings(3);
    if (pick(3) == 0) {
      base[0] = std::int64_t(pick(3));
      bindings.bind(0, base[0]);
    }
    const auto oracle = testing::enumerate_label_matches(pattern, label, base);
    const bool matched = match_label(pattern, label, bindings);
    if (matched != !oracle.empty()) {
      ++disagreements;
      continue;
    }
    // Patterns have at most one list variable, so a match is unique.
    if (matched && (oracle.size() != 1 || !testing::same_assignment(bindings, oracle.front()))) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0U);
}

TEST(RuleProperties, BidirectionalExpansion) {
  const auto report = testing::check_bidirectional_expansion(202, 1000);
  EXPECT_TRUE(report.ok()) << report.counterexamples.front();
}

}  // namespace
}  // namespace rgt
