#include <gtest/gtest.h>

#include "rgt/interpreter.hpp"
#include "rgt/text.hpp"
#include "support/properties.hpp"
#include "support/reference.hpp"

namespace rgt {
namespace {

// Counter rules on a single node labelled with an integer.
constexpr const char* kRules = R"(
rule inc(i: int) { lhs { 1: i } rhs { 1: i + 1 } interface = [1] where i < 3 }
rule dec(i: int) { lhs { 1: i } rhs { 1: i - 1 } interface = [1] where i > 0 }
rule to_ten(i: int) { lhs { 1: i } rhs { 1: 10 } interface = [1] }
rule is_zero() { lhs { 1: 0 } rhs { 1: 0 } interface = [1] }
rule is_ten() { lhs { 1: 10 } rhs { 1: 10 } interface = [1] }
rule mark_red(i: int) { lhs { 1: i } rhs { 1: i # red } interface = [1] }
rule never() { lhs { 1: "never" } rhs { 1: "never" } interface = [1] }
)";

LoadedProgram load_text(const std::string& main) { return load(parse_program(std::string(kRules) + main)); }

HostGraph counter(std::int64_t value) {
  HostGraph g;
  g.add_node({value});
  return g;
}

std::int64_t value_of(const ExecResult& result) {
  return result.outcome.graph.label(NodeId{0}).at(0).as_int();
}

TEST(Interpreter, SequenceAndLoop) {
  const auto result = execute(load_text("Main = inc!; dec"), counter(0));
  EXPECT_EQ(result.outcome.status, Status::success);
  EXPECT_EQ(value_of(result), 2);
  EXPECT_EQ(result.stats.rule_applications, 4U);
  EXPECT_EQ(result.stats.steps, 4U);
  EXPECT_EQ(result.stats.per_rule.at("inc").applications, 3U);
  EXPECT_EQ(result.stats.per_rule.at("inc").attempts, 4U);
}

TEST(Interpreter, FailureReturnsTheInput) {
  const auto result = execute(load_text("Main = inc; never"), counter(0));
  EXPECT_EQ(result.outcome.status, Status::fail);
  EXPECT_EQ(value_of(result), 0);
}

TEST(Interpreter, RuleSetsTryRulesInOrder) {
  EXPECT_EQ(value_of(execute(load_text("Main = {never, to_ten, inc}"), counter(0))), 10);
  EXPECT_EQ(value_of(execute(load_text("Main = {never, inc, to_ten}"), counter(0))), 1);
  EXPECT_EQ(execute(load_text("Main = {never, is_ten}"), counter(0)).outcome.status, Status::fail);
}

TEST(Interpreter, IfAlwaysRestores) {
  EXPECT_EQ(value_of(execute(load_text("Main = if to_ten then inc else dec"), counter(1))), 2);
  EXPECT_EQ(value_of(execute(load_text("Main = if never then inc else dec"), counter(1))), 0);
}

TEST(Interpreter, TryKeepsSuccessAndRestoresFailure) {
  EXPECT_EQ(value_of(execute(load_text("Main = try inc then inc else dec"), counter(0))), 2);
  EXPECT_EQ(value_of(execute(load_text("Main = try (inc; never) then inc else dec"), counter(1))), 0);
  EXPECT_EQ(value_of(execute(load_text("Main = try inc"), counter(3))), 3);
  EXPECT_EQ(value_of(execute(load_text("Main = try dec else inc"), counter(0))), 1);
}

TEST(Interpreter, LoopRollsBackTheFailingIteration) {
  // Each iteration raises the counter, then the body fails at 3 before its
  // second step; the partial iteration is undone.
  const auto result = execute(load_text("Main = (inc; inc)!"), counter(0));
  EXPECT_EQ(result.outcome.status, Status::success);
  EXPECT_EQ(value_of(result), 2);
}

TEST(Interpreter, BreakKeepsTheCurrentIteration) {
  const auto result = execute(load_text("Main = (inc; if is_zero then skip else break)!"), counter(0));
  EXPECT_EQ(value_of(result), 1);
  const auto nested = execute(load_text("Main = (inc!; (dec; break)!; mark_red; break)!"), counter(0));
  EXPECT_EQ(value_of(nested), 2);
  EXPECT_EQ(nested.outcome.graph.mark(NodeId{0}), NodeMark::red);
}

TEST(Interpreter, ProceduresAreInlined) {
  EXPECT_EQ(value_of(execute(load_text("Main = Up; dec\nUp = inc; inc"), counter(0))), 1);
  const auto twice = execute(load_text("Main = Up; Up\nUp = inc; inc"), counter(0));
  EXPECT_EQ(twice.outcome.status, Status::fail);  // the fourth inc fails
  EXPECT_EQ(value_of(twice), 0);
}

TEST(Interpreter, StepLimitStopsAndReturnsTheInput) {
  ExecOptions options;
  options.step_limit = 2;
  const auto result = execute(load_text("Main = inc!"), counter(0), options);
  EXPECT_EQ(result.outcome.status, Status::limit);
  EXPECT_EQ(value_of(result), 0);
  EXPECT_EQ(result.stats.rule_applications, 2U);

  options.step_limit = 3;
  EXPECT_EQ(execute(load_text("Main = inc!"), counter(0), options).outcome.status, Status::success);
}

TEST(Interpreter, IdleLoopsCountAsSteps) {
  ExecOptions options;
  options.step_limit = 50;
  const auto result = execute(load_text("Main = skip!"), counter(0), options);
  EXPECT_EQ(result.outcome.status, Status::limit);
  EXPECT_EQ(result.stats.steps, 50U);
  const auto guarded = execute(load_text("Main = (if is_zero then break else skip)!"), counter(0), options);
  EXPECT_EQ(guarded.outcome.status, Status::success);
}

TEST(Interpreter, SeededRunsAreReproducible) {
  HostGraph g;
  for (int k = 0; k < 20; ++k) g.add_node({k % 4});
  const auto program = load_text("Main = {mark_red, dec}; {mark_red, dec}; mark_red");
  ExecOptions options;
  options.seed = 99;
  const auto a = execute(program, g, options);
  const auto b = execute(program, g, options);
  EXPECT_EQ(a.outcome.graph, b.outcome.graph);
  EXPECT_TRUE(a.stats.same_counts(b.stats));
}

TEST(Interpreter, ObserverSeesMarkedProcedures) {
  std::vector<std::pair<std::string, PhaseEvent>> events;
  ExecOptions options;
  options.markers = {"Up", "Down"};
  options.observer = [&](std::string_view name, PhaseEvent event, const HostGraph&) {
    events.emplace_back(std::string(name), event);
  };
  execute(load_text("Main = Up; try Down\nUp = inc\nDown = never"), counter(0), options);
  const std::vector<std::pair<std::string, PhaseEvent>> expected{
      {"Up", PhaseEvent::entry}, {"Up", PhaseEvent::exit}, {"Down", PhaseEvent::entry}, {"Down", PhaseEvent::fail}};
  EXPECT_EQ(events, expected);
}

TEST(Interpreter, TracedRunSummarisesPhases) {
  const auto traced = execute_traced(load_text("Main = Up\nUp = inc; mark_red"), counter(0), {"Up"});
  ASSERT_EQ(traced.trace.size(), 2U);
  EXPECT_EQ(traced.trace[0].event, PhaseEvent::entry);
  EXPECT_EQ(traced.trace[1].summary.node_marks[static_cast<std::size_t>(NodeMark::red)], 1U);
}

TEST(Interpreter, LoadErrors) {
  const std::vector<std::string> bad{
      "Main = missing",
      "Main = {inc, Other}\nOther = inc",
      "Main = break",
      "Main = (if break then skip else skip)!",
      "Main = A\nA = B\nB = A",
      "Other = inc",
      "Main = inc\nMain = dec",
      "Main = inc\ninc = dec",
  };
  for (const auto& text : bad) {
    EXPECT_THROW(load_text(text), LoadError) << text;
  }
}

TEST(InterpreterProperties, IfPurity) {
  const auto report = testing::check_if_purity(401, 1000);
  EXPECT_TRUE(report.ok()) << report.counterexamples.front();
}

TEST(InterpreterProperties, LoopRollback) {
  const auto report = testing::check_loop_rollback(402, 1000);
  EXPECT_TRUE(report.ok()) << report.counterexamples.front();
}

TEST(InterpreterProperties, AgreesWithReference) {
  const auto report = testing::check_against_reference(403, 1000);
  EXPECT_TRUE(report.ok()) << report.counterexamples.front();
}

}  // namespace
}  // namespace rgt
