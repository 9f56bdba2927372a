#pragma once

#include <cstdint>

#include "rgt/graph.hpp"
#include "rgt/interpreter.hpp"

namespace rgt::testing {

struct ReferenceResult {
  Status status = Status::success;
  HostGraph graph;
  std::uint64_t applications = 0;
  std::uint64_t steps = 0;
};

// Straightforward interpreter over the unresolved command tree. Every
// branch works on its own copy of the graph; nothing is undone in place.
// Rules are tried in listed order, instances in compiled order, and each
// instance takes the engine's first match. Steps are counted like the
// engine does: one per application, one per loop iteration that applied
// nothing.
ReferenceResult reference_execute(const Program& program, const HostGraph& input,
                                  std::uint64_t step_limit = kDefaultStepLimit);

// Equal as graphs and also in adjacency and root registry order.
bool structurally_identical(const HostGraph& a, const HostGraph& b);

}  // namespace rgt::testing
