#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rgt/graph.hpp"

namespace rgt {

enum class VarType : std::uint8_t { integer, list };

struct Variable {
  std::string name;
  VarType type = VarType::list;
  bool operator==(const Variable&) const = default;
};

struct VarRef {
  std::size_t index = 0;
  VarType type = VarType::list;
  bool operator==(const VarRef&) const = default;
};

// Integer arithmetic over literals and integer variables.
struct IntExpr {
  enum class Kind : std::uint8_t { literal, variable, add, subtract, multiply, negate };
  Kind kind = Kind::literal;
  std::int64_t value = 0;
  std::size_t variable = 0;
  std::vector<IntExpr> operands;

  static IntExpr literal(std::int64_t value);
  static IntExpr var(std::size_t index);
  static IntExpr binary(Kind kind, IntExpr lhs, IntExpr rhs);
  static IntExpr negated(IntExpr operand);

  bool operator==(const IntExpr&) const = default;
};

// One position of a label pattern or label expression. Patterns only use
// atoms and variables; arithmetic is for right-hand sides.
using LabelItem = std::variant<Atom, VarRef, IntExpr>;
using LabelExpr = std::vector<LabelItem>;

enum class CompareOp : std::uint8_t { less, less_equal, equal, not_equal, greater_equal, greater };

struct Condition {
  enum class Kind : std::uint8_t { compare, all, any, negate };
  Kind kind = Kind::compare;
  CompareOp op = CompareOp::equal;
  IntExpr lhs;
  IntExpr rhs;
  std::vector<Condition> operands;

  static Condition compare(CompareOp op, IntExpr lhs, IntExpr rhs);
  static Condition all(std::vector<Condition> operands);
  static Condition any(std::vector<Condition> operands);
  static Condition negate(Condition operand);

  bool operator==(const Condition&) const = default;
};

struct RuleNode {
  std::string name;
  LabelExpr label;
  std::optional<NodeMark> mark = NodeMark::none;  // nullopt matches any mark
  bool root = false;
  bool operator==(const RuleNode&) const = default;
};

struct RuleEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  bool bidirectional = false;
  LabelExpr label;
  EdgeMark mark = EdgeMark::none;
  bool operator==(const RuleEdge&) const = default;
};

struct RuleGraph {
  std::vector<RuleNode> nodes;
  std::vector<RuleEdge> edges;
  bool operator==(const RuleGraph&) const = default;
};

struct Rule {
  std::string name;
  std::vector<Variable> params;
  RuleGraph lhs;
  RuleGraph rhs;
  // Preserved nodes as (lhs index, rhs index).
  std::vector<std::pair<std::size_t, std::size_t>> interface;
  std::optional<Condition> condition;
  bool operator==(const Rule&) const = default;
};

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Value = std::variant<std::int64_t, Label>;

// Variable assignment with a trail, so partial bindings made during a search
// can be undone cheaply.
class Bindings {
 public:
  explicit Bindings(std::size_t variables = 0) : values_(variables) { trail_.reserve(variables); }

  std::size_t size() const { return values_.size(); }
  // Unbinds everything and resizes, keeping the allocated storage.
  void reset(std::size_t variables);
  bool is_bound(std::size_t variable) const { return values_.at(variable).has_value(); }
  const Value& value(std::size_t variable) const;
  void bind(std::size_t variable, Value value);

  std::size_t checkpoint() const { return trail_.size(); }
  void rollback(std::size_t checkpoint);

  bool operator==(const Bindings& other) const { return values_ == other.values_; }

 private:
  std::vector<std::optional<Value>> values_;
  std::vector<std::size_t> trail_;
};

// Matches a pattern against a label, extending the bindings. On failure the
// bindings are left as they were. A pattern holds at most one list variable.
bool match_label(const LabelExpr& pattern, std::span<const Atom> label, Bindings& bindings);

std::int64_t eval(const IntExpr& expr, const Bindings& bindings);
Label eval(const LabelExpr& expr, const Bindings& bindings);
bool eval(const Condition& condition, const Bindings& bindings);

// One step of the precomputed search order for a left-hand side.
struct SearchStep {
  enum class Kind : std::uint8_t {
    root_node,     // node from the root registry
    any_node,      // node from a scan of all nodes
    edge_out,      // edge leaving an already matched source
    edge_in,       // edge entering an already matched target
    edge_between,  // edge between two matched nodes
    loop,          // loop on a matched node
  };
  Kind kind;
  std::size_t index;  // lhs node or lhs edge
};

struct PatternNode {
  LabelExpr label;
  std::optional<NodeMark> mark;
  bool root = false;
  std::optional<std::size_t> rhs;
};

struct PatternEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  LabelExpr label;
  EdgeMark mark = EdgeMark::none;
  std::optional<std::size_t> rhs;
};

struct ResultNode {
  LabelExpr label;
  std::optional<NodeMark> mark;  // nullopt keeps the matched mark
  bool root = false;
  std::optional<std::size_t> lhs;
  bool keeps_label = false;
};

struct ResultEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  LabelExpr label;
  EdgeMark mark = EdgeMark::none;
  std::optional<std::size_t> lhs;
  bool keeps_label = false;
};

// A rule with every bidirectional edge fixed to one orientation.
struct RuleInstance {
  std::string rule_name;
  std::vector<Variable> variables;
  std::vector<PatternNode> lhs_nodes;
  std::vector<PatternEdge> lhs_edges;
  std::vector<ResultNode> rhs_nodes;
  std::vector<ResultEdge> rhs_edges;
  std::optional<Condition> condition;
  // Per bidirectional lhs edge in declaration order: true when reversed.
  std::vector<bool> reversed;
  std::vector<SearchStep> plan;
  // Lhs nodes that the rule deletes.
  std::vector<std::size_t> deleted_nodes;
};

struct RuleInstanceSet {
  std::string name;
  std::size_t bidirectional_edges = 0;
  std::vector<RuleInstance> instances;
};

// Validates a rule and expands it into 2^b directed instances, ordered
// lexicographically by orientation choice (as written before reversed).
RuleInstanceSet compile_rule(const Rule& rule);

}  // namespace rgt
