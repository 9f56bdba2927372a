#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "rgt/graph.hpp"
#include "rgt/rule.hpp"

namespace rgt {

struct Match {
  std::vector<NodeId> nodes;  // indexed by lhs node
  std::vector<EdgeId> edges;  // indexed by lhs edge
  Bindings bindings;
};

struct MatchStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t edges_visited = 0;
};

struct MatchOptions {
  // When set, candidates at every search level are tried in shuffled order.
  std::mt19937_64* shuffle = nullptr;
  MatchStats* stats = nullptr;
  // Storage reused for the search state across calls. Not for nested searches.
  Match* scratch = nullptr;
};

// First match in search order, honouring injectivity, marks, root flags,
// labels, the condition and the dangling condition.
std::optional<Match> find_match(const RuleInstance& rule, const HostGraph& graph,
                                const MatchOptions& options = {});

// Calls `visit` for every valid match until it returns false.
void for_each_match(const RuleInstance& rule, const HostGraph& graph,
                    const std::function<bool(const Match&)>& visit,
                    const MatchOptions& options = {});

// True when deleting the matched nodes would leave no dangling edges.
bool check_dangling(const RuleInstance& rule, const Match& match, const HostGraph& graph);

struct Application {
  std::vector<NodeId> nodes;  // indexed by rhs node
  std::vector<EdgeId> edges;  // indexed by rhs edge
};

// Rewrites the match in place. Preserved nodes and edges keep their ids.
Application apply(const RuleInstance& rule, const Match& match, HostGraph& graph);

}  // namespace rgt
