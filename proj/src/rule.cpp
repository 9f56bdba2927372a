#include "rgt/rule.hpp"

#include <algorithm>
#include <set>

namespace rgt {

IntExpr IntExpr::literal(std::int64_t value) {
  IntExpr expr;
  expr.kind = Kind::literal;
  expr.value = value;
  return expr;
}

IntExpr IntExpr::var(std::size_t index) {
  IntExpr expr;
  expr.kind = Kind::variable;
  expr.variable = index;
  return expr;
}

IntExpr IntExpr::binary(Kind kind, IntExpr lhs, IntExpr rhs) {
  IntExpr expr;
  expr.kind = kind;
  expr.operands.push_back(std::move(lhs));
  expr.operands.push_back(std::move(rhs));
  return expr;
}

IntExpr IntExpr::negated(IntExpr operand) {
  IntExpr expr;
  expr.kind = Kind::negate;
  expr.operands.push_back(std::move(operand));
  return expr;
}

Condition Condition::compare(CompareOp op, IntExpr lhs, IntExpr rhs) {
  Condition c;
  c.kind = Kind::compare;
  c.op = op;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

Condition Condition::all(std::vector<Condition> operands) {
  Condition c;
  c.kind = Kind::all;
  c.operands = std::move(operands);
  return c;
}

Condition Condition::any(std::vector<Condition> operands) {
  Condition c;
  c.kind = Kind::any;
  c.operands = std::move(operands);
  return c;
}

Condition Condition::negate(Condition operand) {
  Condition c;
  c.kind = Kind::negate;
  c.operands.push_back(std::move(operand));
  return c;
}

const Value& Bindings::value(std::size_t variable) const {
  const auto& slot = values_.at(variable);
  if (!slot) throw EvalError("variable " + std::to_string(variable) + " is unbound");
  return *slot;
}

void Bindings::bind(std::size_t variable, Value value) {
  auto& slot = values_.at(variable);
  if (slot) throw EvalError("variable " + std::to_string(variable) + " is already bound");
  slot = std::move(value);
  trail_.push_back(variable);
}

void Bindings::reset(std::size_t variables) {
  values_.assign(variables, std::nullopt);
  trail_.clear();
  trail_.reserve(variables);
}

void Bindings::rollback(std::size_t checkpoint) {
  while (trail_.size() > checkpoint) {
    values_[trail_.back()].reset();
    trail_.pop_back();
  }
}

namespace {

bool match_item(const LabelItem& item, const Atom& atom, Bindings& bindings) {
  if (const auto* literal = std::get_if<Atom>(&item)) return *literal == atom;
  const auto* ref = std::get_if<VarRef>(&item);
  if (ref == nullptr) throw EvalError("arithmetic is not allowed in a label pattern");
  if (ref->type == VarType::integer) {
    if (!atom.is_int()) return false;
    if (bindings.is_bound(ref->index)) {
      return std::get<std::int64_t>(bindings.value(ref->index)) == atom.as_int();
    }
    bindings.bind(ref->index, atom.as_int());
    return true;
  }
  // A list variable in a fixed position matches exactly one atom.
  if (bindings.is_bound(ref->index)) {
    const auto& bound = std::get<Label>(bindings.value(ref->index));
    return bound.size() == 1 && bound.front() == atom;
  }
  bindings.bind(ref->index, Label{atom});
  return true;
}

bool is_list_var(const LabelItem& item) {
  const auto* ref = std::get_if<VarRef>(&item);
  return ref != nullptr && ref->type == VarType::list;
}

bool match_fixed(const LabelExpr& pattern, std::size_t from, std::size_t to,
                 std::span<const Atom> label, std::size_t offset, Bindings& bindings) {
  for (std::size_t i = from; i < to; ++i) {
    if (!match_item(pattern[i], label[offset + i - from], bindings)) return false;
  }
  return true;
}

bool checked(bool overflow) {
  if (overflow) throw EvalError("integer overflow");
  return true;
}

}  // namespace

bool match_label(const LabelExpr& pattern, std::span<const Atom> label, Bindings& bindings) {
  std::optional<std::size_t> list_position;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (!is_list_var(pattern[i])) continue;
    if (list_position) throw EvalError("label pattern has more than one list variable");
    list_position = i;
  }

  const std::size_t mark = bindings.checkpoint();
  bool ok = false;
  if (!list_position) {
    ok = pattern.size() == label.size() && match_fixed(pattern, 0, pattern.size(), label, 0, bindings);
  } else if (label.size() + 1 >= pattern.size()) {
    const std::size_t prefix = *list_position;
    const std::size_t suffix = pattern.size() - prefix - 1;
    const std::size_t middle = label.size() - prefix - suffix;
    ok = match_fixed(pattern, 0, prefix, label, 0, bindings) &&
         match_fixed(pattern, prefix + 1, pattern.size(), label, prefix + middle, bindings);
    if (ok) {
      const auto& ref = std::get<VarRef>(pattern[prefix]);
      const auto span = label.subspan(prefix, middle);
      if (bindings.is_bound(ref.index)) {
        const auto& bound = std::get<Label>(bindings.value(ref.index));
        ok = std::equal(bound.begin(), bound.end(), span.begin(), span.end());
      } else {
        bindings.bind(ref.index, Label(span.begin(), span.end()));
      }
    }
  }
  if (!ok) bindings.rollback(mark);
  return ok;
}

std::int64_t eval(const IntExpr& expr, const Bindings& bindings) {
  std::int64_t result = 0;
  switch (expr.kind) {
    case IntExpr::Kind::literal:
      return expr.value;
    case IntExpr::Kind::variable: {
      const auto& value = bindings.value(expr.variable);
      if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
      throw EvalError("list variable used in arithmetic");
    }
    case IntExpr::Kind::add:
      checked(__builtin_add_overflow(eval(expr.operands[0], bindings),
                                     eval(expr.operands[1], bindings), &result));
      return result;
    case IntExpr::Kind::subtract:
      checked(__builtin_sub_overflow(eval(expr.operands[0], bindings),
                                     eval(expr.operands[1], bindings), &result));
      return result;
    case IntExpr::Kind::multiply:
      checked(__builtin_mul_overflow(eval(expr.operands[0], bindings),
                                     eval(expr.operands[1], bindings), &result));
      return result;
    case IntExpr::Kind::negate:
      checked(__builtin_sub_overflow(std::int64_t{0}, eval(expr.operands[0], bindings), &result));
      return result;
  }
  throw EvalError("bad integer expression");
}

Label eval(const LabelExpr& expr, const Bindings& bindings) {
  Label label;
  for (const auto& item : expr) {
    if (const auto* atom = std::get_if<Atom>(&item)) {
      label.push_back(*atom);
    } else if (const auto* ref = std::get_if<VarRef>(&item)) {
      const auto& value = bindings.value(ref->index);
      if (const auto* i = std::get_if<std::int64_t>(&value)) {
        label.emplace_back(*i);
      } else {
        const auto& list = std::get<Label>(value);
        label.insert(label.end(), list.begin(), list.end());
      }
    } else {
      label.emplace_back(eval(std::get<IntExpr>(item), bindings));
    }
  }
  return label;
}

bool eval(const Condition& condition, const Bindings& bindings) {
  switch (condition.kind) {
    case Condition::Kind::compare: {
      const auto a = eval(condition.lhs, bindings);
      const auto b = eval(condition.rhs, bindings);
      switch (condition.op) {
        case CompareOp::less: return a < b;
        case CompareOp::less_equal: return a <= b;
        case CompareOp::equal: return a == b;
        case CompareOp::not_equal: return a != b;
        case CompareOp::greater_equal: return a >= b;
        case CompareOp::greater: return a > b;
      }
      break;
    }
    case Condition::Kind::all:
      return std::all_of(condition.operands.begin(), condition.operands.end(),
                         [&](const Condition& c) { return eval(c, bindings); });
    case Condition::Kind::any:
      return std::any_of(condition.operands.begin(), condition.operands.end(),
                         [&](const Condition& c) { return eval(c, bindings); });
    case Condition::Kind::negate:
      return !eval(condition.operands.front(), bindings);
  }
  throw EvalError("bad condition");
}

namespace {

constexpr std::size_t kMaxBidirectional = 16;

struct RuleChecker {
  const Rule& rule;
  std::set<std::size_t> lhs_vars;

  [[noreturn]] void fail(const std::string& message) const {
    throw RuleError("rule " + rule.name + ": " + message);
  }

  void check_ref(std::size_t index, VarType type) const {
    if (index >= rule.params.size()) fail("reference to an undeclared variable");
    if (rule.params[index].type != type) {
      fail("variable " + rule.params[index].name + " is used with the wrong type");
    }
  }

  void collect_int_vars(const IntExpr& expr, std::vector<std::size_t>& out) const {
    if (expr.kind == IntExpr::Kind::variable) out.push_back(expr.variable);
    for (const auto& operand : expr.operands) collect_int_vars(operand, out);
  }

  void check_pattern(const LabelExpr& pattern) {
    std::size_t lists = 0;
    for (const auto& item : pattern) {
      if (std::holds_alternative<IntExpr>(item)) fail("arithmetic in a left-hand side label");
      if (const auto* ref = std::get_if<VarRef>(&item)) {
        check_ref(ref->index, ref->type);
        if (ref->type == VarType::list) ++lists;
        lhs_vars.insert(ref->index);
      }
    }
    if (lists > 1) fail("a left-hand side label has more than one list variable");
  }

  void check_bound_int(const IntExpr& expr) const {
    std::vector<std::size_t> vars;
    collect_int_vars(expr, vars);
    for (auto v : vars) {
      check_ref(v, VarType::integer);
      if (!lhs_vars.count(v)) fail("variable " + rule.params[v].name + " is not bound by the left-hand side");
    }
  }

  void check_expression(const LabelExpr& expr) const {
    for (const auto& item : expr) {
      if (const auto* ref = std::get_if<VarRef>(&item)) {
        check_ref(ref->index, ref->type);
        if (!lhs_vars.count(ref->index)) {
          fail("variable " + rule.params[ref->index].name + " is not bound by the left-hand side");
        }
      } else if (const auto* arith = std::get_if<IntExpr>(&item)) {
        check_bound_int(*arith);
      }
    }
  }

  void check_condition(const Condition& condition) const {
    if (condition.kind == Condition::Kind::compare) {
      check_bound_int(condition.lhs);
      check_bound_int(condition.rhs);
    }
    for (const auto& operand : condition.operands) check_condition(operand);
  }

  void check_graph(const RuleGraph& graph, const char* side) const {
    std::set<std::string> names;
    for (const auto& node : graph.nodes) {
      if (!names.insert(node.name).second) {
        fail(std::string("duplicate node ") + node.name + " in " + side);
      }
    }
    for (const auto& edge : graph.edges) {
      if (edge.source >= graph.nodes.size() || edge.target >= graph.nodes.size()) {
        fail(std::string("edge endpoint out of range in ") + side);
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> bidirectional_pairs;
    for (const auto& edge : graph.edges) {
      if (!edge.bidirectional) continue;
      const auto key = std::minmax(edge.source, edge.target);
      if (!bidirectional_pairs.insert({key.first, key.second}).second) {
        fail(std::string("parallel bidirectional edges in ") + side);
      }
    }
  }
};

std::vector<SearchStep> build_plan(const std::vector<PatternNode>& nodes,
                                   const std::vector<PatternEdge>& edges) {
  std::vector<SearchStep> plan;
  std::vector<bool> node_done(nodes.size(), false);
  std::vector<bool> edge_done(edges.size(), false);
  std::size_t remaining = nodes.size() + edges.size();

  const auto selectivity = [&](std::size_t n) {
    if (!nodes[n].mark) return 2;
    return *nodes[n].mark == NodeMark::none ? 1 : 0;
  };
  std::optional<std::size_t> anchor;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (!nodes[n].root) continue;
    if (!anchor || selectivity(n) < selectivity(*anchor)) anchor = n;
  }
  if (anchor) {
    plan.push_back({SearchStep::Kind::root_node, *anchor});
    node_done[*anchor] = true;
    --remaining;
  }

  const auto take_edge = [&]() -> bool {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edge_done[e] || !node_done[edges[e].source] || !node_done[edges[e].target]) continue;
      const auto kind = edges[e].source == edges[e].target ? SearchStep::Kind::loop
                                                           : SearchStep::Kind::edge_between;
      plan.push_back({kind, e});
      edge_done[e] = true;
      --remaining;
      return true;
    }
    return false;
  };
  const auto take_node = [&](bool roots_only) -> bool {
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (node_done[n] || (roots_only && !nodes[n].root)) continue;
      plan.push_back({roots_only ? SearchStep::Kind::root_node : SearchStep::Kind::any_node, n});
      node_done[n] = true;
      --remaining;
      return true;
    }
    return false;
  };
  const auto take_frontier_edge = [&]() -> bool {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& edge = edges[e];
      if (edge_done[e] || node_done[edge.source] == node_done[edge.target]) continue;
      const bool from_source = node_done[edge.source];
      plan.push_back({from_source ? SearchStep::Kind::edge_out : SearchStep::Kind::edge_in, e});
      edge_done[e] = true;
      node_done[from_source ? edge.target : edge.source] = true;
      remaining -= 2;
      return true;
    }
    return false;
  };

  while (remaining > 0) {
    if (take_edge() || take_node(true) || take_frontier_edge() || take_node(false)) continue;
    break;
  }
  return plan;
}

}  // namespace

RuleInstanceSet compile_rule(const Rule& rule) {
  RuleChecker checker{rule, {}};
  {
    std::set<std::string> names;
    for (const auto& param : rule.params) {
      if (!names.insert(param.name).second) checker.fail("duplicate variable " + param.name);
    }
  }
  checker.check_graph(rule.lhs, "left-hand side");
  checker.check_graph(rule.rhs, "right-hand side");

  const std::size_t lhs_nodes = rule.lhs.nodes.size();
  const std::size_t rhs_nodes = rule.rhs.nodes.size();
  std::vector<std::optional<std::size_t>> lhs_to_rhs(lhs_nodes);
  std::vector<std::optional<std::size_t>> rhs_to_lhs(rhs_nodes);
  for (const auto& [l, r] : rule.interface) {
    if (l >= lhs_nodes || r >= rhs_nodes) checker.fail("interface names a missing node");
    if (lhs_to_rhs[l] || rhs_to_lhs[r]) checker.fail("node listed twice in the interface");
    lhs_to_rhs[l] = r;
    rhs_to_lhs[r] = l;
  }

  for (const auto& node : rule.lhs.nodes) checker.check_pattern(node.label);
  for (const auto& edge : rule.lhs.edges) checker.check_pattern(edge.label);
  for (const auto& node : rule.rhs.nodes) checker.check_expression(node.label);
  for (const auto& edge : rule.rhs.edges) checker.check_expression(edge.label);
  if (rule.condition) checker.check_condition(*rule.condition);

  for (std::size_t r = 0; r < rhs_nodes; ++r) {
    if (rule.rhs.nodes[r].mark) continue;
    if (!rhs_to_lhs[r] || rule.lhs.nodes[*rhs_to_lhs[r]].mark) {
      checker.fail("node " + rule.rhs.nodes[r].name +
                   " may only be marked any when its left-hand side node is marked any");
    }
  }

  // Pair right-hand edges with left-hand edges they preserve: same kind and
  // the same interface endpoints. Identical labels and marks are paired first.
  const auto& lhs_edges = rule.lhs.edges;
  const auto& rhs_edges = rule.rhs.edges;
  std::vector<std::optional<std::size_t>> rhs_edge_partner(rhs_edges.size());
  std::vector<bool> lhs_edge_paired(lhs_edges.size(), false);
  const auto compatible = [&](const RuleEdge& l, const RuleEdge& r) {
    if (l.bidirectional != r.bidirectional) return false;
    const auto ls = lhs_to_rhs[l.source];
    const auto lt = lhs_to_rhs[l.target];
    if (!ls || !lt) return false;
    if (*ls == r.source && *lt == r.target) return true;
    return l.bidirectional && *ls == r.target && *lt == r.source;
  };
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t r = 0; r < rhs_edges.size(); ++r) {
      if (rhs_edge_partner[r]) continue;
      for (std::size_t l = 0; l < lhs_edges.size(); ++l) {
        if (lhs_edge_paired[l] || !compatible(lhs_edges[l], rhs_edges[r])) continue;
        if (pass == 0 && (lhs_edges[l].label != rhs_edges[r].label ||
                          lhs_edges[l].mark != rhs_edges[r].mark)) {
          continue;
        }
        rhs_edge_partner[r] = l;
        lhs_edge_paired[l] = true;
        break;
      }
    }
  }
  for (std::size_t r = 0; r < rhs_edges.size(); ++r) {
    if (rhs_edges[r].bidirectional && !rhs_edge_partner[r]) {
      checker.fail("a right-hand side bidirectional edge must preserve a left-hand side one");
    }
  }

  std::vector<std::size_t> bidirectional;
  for (std::size_t l = 0; l < lhs_edges.size(); ++l) {
    if (lhs_edges[l].bidirectional) bidirectional.push_back(l);
  }
  if (bidirectional.size() > kMaxBidirectional) checker.fail("too many bidirectional edges");

  RuleInstanceSet result;
  result.name = rule.name;
  result.bidirectional_edges = bidirectional.size();
  const std::size_t count = std::size_t{1} << bidirectional.size();
  result.instances.reserve(count);

  for (std::size_t choice = 0; choice < count; ++choice) {
    RuleInstance instance;
    instance.rule_name = rule.name;
    instance.variables = rule.params;
    instance.condition = rule.condition;
    instance.reversed.assign(bidirectional.size(), false);
    for (std::size_t k = 0; k < bidirectional.size(); ++k) {
      instance.reversed[k] = (choice >> (bidirectional.size() - 1 - k)) & 1U;
    }

    for (std::size_t l = 0; l < lhs_nodes; ++l) {
      const auto& node = rule.lhs.nodes[l];
      instance.lhs_nodes.push_back({node.label, node.mark, node.root, lhs_to_rhs[l]});
      if (!lhs_to_rhs[l]) instance.deleted_nodes.push_back(l);
    }
    std::vector<bool> lhs_reversed(lhs_edges.size(), false);
    for (std::size_t k = 0; k < bidirectional.size(); ++k) {
      lhs_reversed[bidirectional[k]] = instance.reversed[k];
    }
    for (std::size_t l = 0; l < lhs_edges.size(); ++l) {
      const auto& edge = lhs_edges[l];
      PatternEdge pattern;
      pattern.source = lhs_reversed[l] ? edge.target : edge.source;
      pattern.target = lhs_reversed[l] ? edge.source : edge.target;
      pattern.label = edge.label;
      pattern.mark = edge.mark;
      instance.lhs_edges.push_back(std::move(pattern));
    }

    for (std::size_t r = 0; r < rhs_nodes; ++r) {
      const auto& node = rule.rhs.nodes[r];
      ResultNode result_node{node.label, node.mark, node.root, rhs_to_lhs[r], false};
      if (rhs_to_lhs[r]) result_node.keeps_label = node.label == rule.lhs.nodes[*rhs_to_lhs[r]].label;
      instance.rhs_nodes.push_back(std::move(result_node));
    }
    for (std::size_t r = 0; r < rhs_edges.size(); ++r) {
      const auto& edge = rhs_edges[r];
      ResultEdge result_edge;
      result_edge.label = edge.label;
      result_edge.mark = edge.mark;
      result_edge.lhs = rhs_edge_partner[r];
      if (const auto partner = rhs_edge_partner[r]) {
        // A preserved edge keeps the orientation of its left-hand side match.
        const auto& matched = instance.lhs_edges[*partner];
        result_edge.source = *lhs_to_rhs[matched.source];
        result_edge.target = *lhs_to_rhs[matched.target];
        result_edge.keeps_label = edge.label == lhs_edges[*partner].label;
        instance.lhs_edges[*partner].rhs = r;
      } else {
        result_edge.source = edge.source;
        result_edge.target = edge.target;
      }
      instance.rhs_edges.push_back(std::move(result_edge));
    }

    instance.plan = build_plan(instance.lhs_nodes, instance.lhs_edges);
    result.instances.push_back(std::move(instance));
  }
  return result;
}

}  // namespace rgt
