#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgt/graph.hpp"
#include "rgt/interpreter.hpp"

namespace rgt {

// Source text of the bundled minimum spanning tree program.
std::string_view mst_boruvka_source();
const Program& mst_boruvka_program();
const LoadedProgram& mst_boruvka_loaded();

struct MstOptions {
  std::optional<std::uint64_t> seed;
  std::uint64_t step_limit = kDefaultStepLimit;
};

struct MstResult {
  HostGraph graph;
  std::vector<EdgeId> mst_edges;  // blue input edges, ascending id
  std::int64_t total_weight = 0;
  NodeId cursor = kNoNode;
  ExecStats stats;
};

// Throws std::invalid_argument unless the graph is non-empty and connected,
// its nodes are unlabelled, unmarked and unrooted, and every edge is
// unmarked with a single integer label.
void check_mst_input(const HostGraph& input);

// Throws std::invalid_argument for bad input and std::runtime_error when the
// program fails or runs out of steps.
MstResult run_mst(const HostGraph& input, const MstOptions& options = {});

// Differences between a finished run and the expected final state; empty
// when the result is well formed.
std::vector<std::string> validate_end_state(const HostGraph& input, const HostGraph& result);

}  // namespace rgt
