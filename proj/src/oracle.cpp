#include "rgt/oracle.hpp"

#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace rgt {

namespace {

// Weighted union, no path compression.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }
  bool same(std::size_t a, std::size_t b) const { return find(a) == find(b); }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct WeightedEdge {
  std::size_t v;
  std::size_t w;
  std::int64_t weight;
  EdgeId id;
};

std::unordered_map<std::uint32_t, std::size_t> dense_ids(const HostGraph& graph) {
  std::unordered_map<std::uint32_t, std::size_t> dense;
  for (NodeId v : graph.node_ids()) dense.emplace(index_of(v), dense.size());
  return dense;
}

}  // namespace

std::optional<std::int64_t> edge_weight(const HostGraph& graph, EdgeId edge) {
  const auto& label = graph.label(edge);
  if (label.size() != 1 || !label.front().is_int()) return std::nullopt;
  return label.front().as_int();
}

OracleResult oracle_mst(const HostGraph& graph) {
  const auto dense = dense_ids(graph);
  const std::size_t n = dense.size();
  std::vector<WeightedEdge> edges;
  for (EdgeId e : graph.edge_ids()) {
    const auto weight = edge_weight(graph, e);
    if (!weight) throw std::invalid_argument("edge without an integer weight");
    const auto v = dense.at(index_of(graph.source(e)));
    const auto w = dense.at(index_of(graph.target(e)));
    if (v != w) edges.push_back({v, w, *weight, e});
  }

  // Each pass finds the lightest edge leaving every component, keeping only
  // edges that still join two components for the next pass.
  constexpr auto kMaxWeight = std::numeric_limits<std::int64_t>::max();
  const WeightedEdge none{n, n, kMaxWeight, kNoEdge};
  UnionFind components(n);
  std::vector<WeightedEdge> nearest(n, none);
  OracleResult result;
  std::size_t unions = 0;
  for (std::size_t count = edges.size(); count != 0;) {
    std::fill(nearest.begin(), nearest.end(), none);
    std::size_t kept = 0;
    for (std::size_t e = 0; e < count; ++e) {
      const auto i = components.find(edges[e].v);
      const auto j = components.find(edges[e].w);
      if (i == j) continue;
      if (edges[e].weight < nearest[i].weight) nearest[i] = edges[e];
      if (edges[e].weight < nearest[j].weight) nearest[j] = edges[e];
      edges[kept++] = edges[e];
    }
    for (std::size_t c = 0; c < n; ++c) {
      const auto& chosen = nearest[c];
      if (chosen.v != n && !components.same(chosen.v, chosen.w)) {
        components.unite(chosen.v, chosen.w);
        result.edges.push_back(chosen.id);
        result.total_weight += chosen.weight;
        ++unions;
      }
    }
    count = kept;
  }
  if (n > 0 && unions + 1 != n) throw std::invalid_argument("graph is not connected");
  return result;
}

SpanningCheck verify_spanning_tree(const HostGraph& input, const std::vector<EdgeId>& edges) {
  SpanningCheck check;
  const auto dense = dense_ids(input);
  const std::size_t n = dense.size();
  if (n == 0) {
    check.problems.push_back("input graph has no nodes");
    return check;
  }
  if (edges.size() + 1 != n) {
    check.problems.push_back("expected " + std::to_string(n - 1) + " tree edges, found " +
                             std::to_string(edges.size()));
  }
  UnionFind components(n);
  std::set<std::uint32_t> seen;
  for (EdgeId e : edges) {
    if (!input.contains(e)) {
      check.problems.push_back("edge " + std::to_string(index_of(e)) + " is not an input edge");
      continue;
    }
    if (!seen.insert(index_of(e)).second) {
      check.problems.push_back("edge " + std::to_string(index_of(e)) + " listed twice");
      continue;
    }
    const auto weight = edge_weight(input, e);
    if (!weight) {
      check.problems.push_back("edge " + std::to_string(index_of(e)) + " has no integer weight");
    } else {
      check.total_weight += *weight;
    }
    if (!components.unite(dense.at(index_of(input.source(e))), dense.at(index_of(input.target(e))))) {
      check.problems.push_back("edge " + std::to_string(index_of(e)) + " closes a cycle");
    }
  }
  for (std::size_t v = 1; v < n; ++v) {
    if (!components.same(0, v)) {
      check.problems.push_back("tree edges do not connect every node");
      break;
    }
  }
  check.ok = check.problems.empty();
  return check;
}

}  // namespace rgt
