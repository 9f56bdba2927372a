#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgt/graph.hpp"

namespace rgt {

// The weight of an edge labelled with exactly one integer.
std::optional<std::int64_t> edge_weight(const HostGraph& graph, EdgeId edge);

struct OracleResult {
  std::int64_t total_weight = 0;
  std::vector<EdgeId> edges;
};

// Conventional Boruvka over an edge array with union-find. Loops are ignored.
// Throws std::invalid_argument when the graph is not connected or an edge
// has no integer weight.
OracleResult oracle_mst(const HostGraph& graph);

struct SpanningCheck {
  bool ok = false;
  std::int64_t total_weight = 0;
  std::vector<std::string> problems;
};

// Checks that `edges` are n-1 distinct input edges forming a spanning tree.
SpanningCheck verify_spanning_tree(const HostGraph& input, const std::vector<EdgeId>& edges);

}  // namespace rgt
