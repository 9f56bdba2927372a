#include "rgt/mst.hpp"

#include <queue>
#include <stdexcept>

#include "rgt/oracle.hpp"
#include "rgt/text.hpp"

namespace rgt {

namespace detail {
extern const char kMstBoruvkaSource[];
}

std::string_view mst_boruvka_source() { return detail::kMstBoruvkaSource; }

const Program& mst_boruvka_program() {
  static const Program program = parse_program(mst_boruvka_source());
  return program;
}

const LoadedProgram& mst_boruvka_loaded() {
  static const LoadedProgram loaded = load(mst_boruvka_program());
  return loaded;
}

namespace {

bool connected(const HostGraph& graph) {
  const auto nodes = graph.node_ids();
  if (nodes.empty()) return false;
  std::vector<bool> seen(graph.node_capacity(), false);
  std::queue<NodeId> pending;
  pending.push(nodes.front());
  seen[index_of(nodes.front())] = true;
  std::size_t reached = 1;
  while (!pending.empty()) {
    const NodeId v = pending.front();
    pending.pop();
    for (EdgeId e : graph.incident_edges(v, Direction::either)) {
      const NodeId w = graph.source(e) == v ? graph.target(e) : graph.source(e);
      if (seen[index_of(w)]) continue;
      seen[index_of(w)] = true;
      ++reached;
      pending.push(w);
    }
  }
  return reached == nodes.size();
}

}  // namespace

void check_mst_input(const HostGraph& input) {
  if (input.node_count() == 0) throw std::invalid_argument("input graph has no nodes");
  for (NodeId v : input.node_ids()) {
    if (!input.label(v).empty() || input.mark(v) != NodeMark::none || input.is_root(v)) {
      throw std::invalid_argument("input nodes must be unlabelled, unmarked and unrooted");
    }
  }
  for (EdgeId e : input.edge_ids()) {
    if (input.mark(e) != EdgeMark::none || !edge_weight(input, e)) {
      throw std::invalid_argument("input edges must be unmarked with one integer label");
    }
  }
  if (!connected(input)) throw std::invalid_argument("input graph is not connected");
}

MstResult run_mst(const HostGraph& input, const MstOptions& options) {
  check_mst_input(input);
  ExecOptions exec;
  exec.seed = options.seed;
  exec.step_limit = options.step_limit;
  auto run = execute(mst_boruvka_loaded(), input, exec);
  if (run.outcome.status != Status::success) {
    throw std::runtime_error("program ended with status " + std::string(to_string(run.outcome.status)));
  }

  MstResult result;
  result.graph = std::move(run.outcome.graph);
  result.stats = std::move(run.stats);
  for (EdgeId e : input.edge_ids()) {
    if (result.graph.contains(e) && result.graph.mark(e) == EdgeMark::blue) {
      result.mst_edges.push_back(e);
      result.total_weight += edge_weight(result.graph, e).value_or(0);
    }
  }
  for (NodeId v : result.graph.roots(NodeMark::none)) {
    result.cursor = v;
    break;
  }
  return result;
}

std::vector<std::string> validate_end_state(const HostGraph& input, const HostGraph& result) {
  std::vector<std::string> violations;
  const auto fail = [&](std::string message) { violations.push_back(std::move(message)); };

  if (result.node_count() != input.node_count() + 1) fail("node count: expected input plus one cursor");
  if (result.edge_count() != input.edge_count() + 1) fail("edge count: expected input plus one cursor edge");

  for (NodeId v : input.node_ids()) {
    if (!result.contains(v)) {
      fail("input node " + std::to_string(index_of(v)) + " missing");
      continue;
    }
    if (result.label(v) != input.label(v)) fail("input node " + std::to_string(index_of(v)) + " relabelled");
    if (result.mark(v) != NodeMark::red) fail("input node " + std::to_string(index_of(v)) + " not red");
  }
  std::vector<EdgeId> blue;
  for (EdgeId e : input.edge_ids()) {
    if (!result.contains(e)) {
      fail("input edge " + std::to_string(index_of(e)) + " missing");
      continue;
    }
    if (result.source(e) != input.source(e) || result.target(e) != input.target(e)) {
      fail("input edge " + std::to_string(index_of(e)) + " moved");
    }
    if (result.label(e) != input.label(e)) fail("input edge " + std::to_string(index_of(e)) + " relabelled");
    if (result.mark(e) == EdgeMark::blue) {
      blue.push_back(e);
    } else if (result.mark(e) != EdgeMark::none) {
      fail("input edge " + std::to_string(index_of(e)) + " marked " + std::string(to_string(result.mark(e))));
    }
  }

  for (NodeId v : result.node_ids()) {
    const auto mark = result.mark(v);
    if (mark == NodeMark::green) fail("green mark present on a node");
    if (mark == NodeMark::grey) fail("grey mark present on a node");
    if (mark == NodeMark::blue) fail("blue mark present on a node");
  }
  for (EdgeId e : result.edge_ids()) {
    const auto mark = result.mark(e);
    if (mark == EdgeMark::green) fail("green mark present on an edge");
    if (mark == EdgeMark::dashed) fail("dashed mark present on an edge");
    const auto& label = result.label(e);
    if (label.size() >= 2 && label.back().is_int() && label.back().as_int() == 0) {
      fail("edge label carries a trailing 0 marker");
    }
  }

  if (result.root_count() != 1) {
    fail("root count: expected exactly one root, found " + std::to_string(result.root_count()));
  }
  std::optional<NodeId> cursor;
  for (NodeId v : result.roots(NodeMark::none)) cursor = v;
  if (!cursor || input.contains(*cursor)) {
    fail("cursor: no unmarked root outside the input");
  } else {
    if (result.label(*cursor) != Label{1}) fail("cursor: label is " + to_string(result.label(*cursor)) + ", expected 1");
    const auto edges = result.incident_edges(*cursor, Direction::either);
    if (edges.size() != 1 || result.source(edges.front()) != *cursor ||
        result.mark(edges.front()) != EdgeMark::red || !result.label(edges.front()).empty() ||
        !input.contains(result.target(edges.front()))) {
      fail("cursor: expected a single unlabelled red edge to an input node");
    }
  }

  const auto tree = verify_spanning_tree(input, blue);
  for (const auto& problem : tree.problems) fail("blue edges: " + problem);
  return violations;
}

}  // namespace rgt
