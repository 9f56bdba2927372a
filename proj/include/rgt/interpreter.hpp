#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rgt/graph.hpp"
#include "rgt/rule.hpp"

namespace rgt {

struct Command {
  enum class Kind : std::uint8_t {
    rule_set,       // names: rules tried in order
    call,           // names[0]: a rule or a procedure
    sequence,       // children run in order
    if_then_else,   // children: condition, then, else
    try_then_else,  // children: condition, then, else
    loop,           // children[0] repeated as long as possible
    break_loop,
    skip,
  };
  Kind kind = Kind::skip;
  std::vector<std::string> names;
  std::vector<Command> children;

  static Command rule_set(std::vector<std::string> rules);
  static Command call(std::string name);
  static Command sequence(std::vector<Command> steps);
  static Command if_then_else(Command condition, Command then_branch, Command else_branch);
  static Command try_then_else(Command condition, Command then_branch, Command else_branch);
  static Command loop(Command body);
  static Command break_loop();
  static Command skip();

  bool operator==(const Command&) const = default;
};

struct Procedure {
  std::string name;
  Command body;
  bool operator==(const Procedure&) const = default;
};

struct Program {
  std::vector<Rule> rules;
  std::vector<Procedure> procedures;  // one of them is Main
  bool operator==(const Program&) const = default;
};

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A validated program: rules compiled, names resolved, procedures inlined.
class LoadedProgram {
 public:
  struct Node {
    enum class Kind : std::uint8_t { rule_set, procedure, sequence, if_then_else, try_then_else, loop, break_loop, skip };
    Kind kind = Kind::skip;
    std::vector<std::size_t> rules;  // rule_set
    std::string procedure;           // procedure: name of the inlined body
    std::vector<Node> children;
  };

  const std::vector<RuleInstanceSet>& rules() const { return rules_; }
  const Node& main() const { return main_; }
  std::optional<std::size_t> rule_index(std::string_view name) const;

 private:
  friend LoadedProgram load(const Program& program);
  std::vector<RuleInstanceSet> rules_;
  Node main_;
};

// Throws LoadError (or RuleError for a malformed rule).
LoadedProgram load(const Program& program);

enum class Status : std::uint8_t { success, fail, limit };

std::string_view to_string(Status status);

struct Outcome {
  Status status = Status::success;
  // The result on success; the unchanged input otherwise.
  HostGraph graph;
};

struct RuleCounters {
  std::uint64_t attempts = 0;
  std::uint64_t applications = 0;
  bool operator==(const RuleCounters&) const = default;
};

struct ExecStats {
  std::uint64_t rule_applications = 0;
  std::uint64_t match_attempts = 0;
  std::uint64_t steps = 0;
  std::map<std::string, RuleCounters> per_rule;
  double wall_time_s = 0;

  // Counters only; wall time is not compared.
  bool same_counts(const ExecStats& other) const {
    return rule_applications == other.rule_applications &&
           match_attempts == other.match_attempts && steps == other.steps &&
           per_rule == other.per_rule;
  }
};

enum class PhaseEvent : std::uint8_t { entry, exit, fail };

std::string_view to_string(PhaseEvent event);

using PhaseObserver =
    std::function<void(std::string_view procedure, PhaseEvent event, const HostGraph& graph)>;

inline constexpr std::uint64_t kDefaultStepLimit = 10'000'000;

struct ExecOptions {
  // Shuffles rule, instance and candidate order when set.
  std::optional<std::uint64_t> seed;
  // Rule applications allowed, plus loop iterations that applied nothing.
  std::uint64_t step_limit = kDefaultStepLimit;
  // Procedures reported to the observer.
  std::vector<std::string> markers;
  PhaseObserver observer;
};

struct ExecResult {
  Outcome outcome;
  ExecStats stats;
};

ExecResult execute(const LoadedProgram& program, const HostGraph& input,
                   const ExecOptions& options = {});

struct GraphSummary {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t roots = 0;
  std::array<std::size_t, kNodeMarkCount> node_marks{};
  std::array<std::size_t, kEdgeMarkCount> edge_marks{};
  // Label of the first unmarked root, if any.
  std::optional<Label> cursor_label;
};

GraphSummary summarize(const HostGraph& graph);

struct TraceEntry {
  std::string procedure;
  PhaseEvent event;
  GraphSummary summary;
};

struct TracedResult {
  Outcome outcome;
  ExecStats stats;
  std::vector<TraceEntry> trace;
};

TracedResult execute_traced(const LoadedProgram& program, const HostGraph& input,
                            const std::vector<std::string>& markers, ExecOptions options = {});

}  // namespace rgt
