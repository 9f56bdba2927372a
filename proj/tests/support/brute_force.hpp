#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rgt/graph.hpp"
#include "rgt/matcher.hpp"
#include "rgt/rule.hpp"

namespace rgt::testing {

// Variable index to value. Kept apart from rgt::Bindings on purpose.
using Assignment = std::map<std::size_t, Value>;

// Every assignment extending `base` under which `pattern` spells `label`,
// found by trying every split of the label among the pattern items. Handles
// any number of list variables.
std::vector<Assignment> enumerate_label_matches(const LabelExpr& pattern, const Label& label,
                                                const Assignment& base = {});

std::optional<std::int64_t> oracle_eval(const IntExpr& expr, const Assignment& assignment);
// nullopt when an operand is unbound or arithmetic fails.
std::optional<bool> oracle_eval(const Condition& condition, const Assignment& assignment);

// Right-hand side label under an assignment; nullopt when something is
// unbound or arithmetic fails.
std::optional<Label> oracle_label(const LabelExpr& expr, const Assignment& assignment);

struct BruteMatch {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  Assignment assignment;
  auto operator<=>(const BruteMatch& other) const {
    if (auto c = nodes <=> other.nodes; c != 0) return c;
    return edges <=> other.edges;
  }
  bool operator==(const BruteMatch& other) const {
    return nodes == other.nodes && edges == other.edges;
  }
};

struct BruteOptions {
  bool check_dangling = true;
  bool check_condition = true;
};

// All matches of a rule's left-hand side, by exhaustive enumeration of
// injective node and edge maps. Bidirectional edges match either way round.
std::vector<BruteMatch> brute_force_matches(const Rule& rule, const HostGraph& host,
                                            const BruteOptions& options = {});

// Keeps the matches whose bidirectional edges run the way `instance` fixes.
std::vector<BruteMatch> matches_for_instance(const Rule& rule, const RuleInstance& instance,
                                             const HostGraph& host,
                                             const std::vector<BruteMatch>& matches);

// Compares an engine binding set with an oracle assignment.
bool same_assignment(const Bindings& bindings, const Assignment& assignment);

// Kruskal with its own union-find. Throws std::invalid_argument if the graph
// is disconnected.
std::int64_t kruskal_weight(const HostGraph& graph);

// Minimum over every (n-1)-subset of edges that spans the graph. Only for
// graphs with at most 16 edges.
std::int64_t exhaustive_mst_weight(const HostGraph& graph);

}  // namespace rgt::testing
