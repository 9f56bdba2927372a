#include "rgt/matcher.hpp"

#include <algorithm>

namespace rgt {

namespace {

class Search {
 public:
  Search(const RuleInstance& rule, const HostGraph& graph, const MatchOptions& options,
         const std::function<bool(const Match&)>& visit)
      : rule_(rule),
        graph_(graph),
        options_(options),
        visit_(visit),
        state_(options.scratch != nullptr ? *options.scratch : own_),
        nodes_(state_.nodes),
        edges_(state_.edges),
        bindings_(state_.bindings) {
    nodes_.assign(rule.lhs_nodes.size(), kNoNode);
    edges_.assign(rule.lhs_edges.size(), kNoEdge);
    bindings_.reset(rule.variables.size());
  }

  void run() { step(0); }

 private:
  // Returns true when the search should stop.
  bool step(std::size_t depth) {
    if (depth == rule_.plan.size()) return complete();
    const auto& s = rule_.plan[depth];
    switch (s.kind) {
      case SearchStep::Kind::root_node: {
        const auto& pattern = rule_.lhs_nodes[s.index];
        if (pattern.mark) {
          return each(graph_.roots(*pattern.mark), [&](NodeId v) { return try_node(depth, s.index, v); });
        }
        for (std::size_t m = 0; m < kNodeMarkCount; ++m) {
          if (each(graph_.roots(static_cast<NodeMark>(m)),
                   [&](NodeId v) { return try_node(depth, s.index, v); })) {
            return true;
          }
        }
        return false;
      }
      case SearchStep::Kind::any_node:
        return each(graph_.node_ids(), [&](NodeId v) { return try_node(depth, s.index, v); });
      case SearchStep::Kind::edge_out: {
        const NodeId from = nodes_[rule_.lhs_edges[s.index].source];
        return each(graph_.out_edges(from), [&](EdgeId e) { return try_edge(depth, s.index, e); });
      }
      case SearchStep::Kind::edge_in: {
        const NodeId to = nodes_[rule_.lhs_edges[s.index].target];
        return each(graph_.in_edges(to), [&](EdgeId e) { return try_edge(depth, s.index, e); });
      }
      case SearchStep::Kind::edge_between: {
        const auto& pattern = rule_.lhs_edges[s.index];
        const NodeId from = nodes_[pattern.source];
        const NodeId to = nodes_[pattern.target];
        if (graph_.out_degree(from) <= graph_.in_degree(to)) {
          return each(graph_.out_edges(from), [&](EdgeId e) { return try_edge(depth, s.index, e); });
        }
        return each(graph_.in_edges(to), [&](EdgeId e) { return try_edge(depth, s.index, e); });
      }
      case SearchStep::Kind::loop: {
        const NodeId at = nodes_[rule_.lhs_edges[s.index].source];
        return each(graph_.loops(at), [&](EdgeId e) { return try_edge(depth, s.index, e); });
      }
    }
    return false;
  }

  template <class Range, class F>
  bool each(const Range& range, F&& f) {
    if (options_.shuffle == nullptr) {
      for (auto candidate : range) {
        if (f(candidate)) return true;
      }
      return false;
    }
    std::vector<std::decay_t<decltype(*range.begin())>> candidates(range.begin(), range.end());
    std::shuffle(candidates.begin(), candidates.end(), *options_.shuffle);
    for (auto candidate : candidates) {
      if (f(candidate)) return true;
    }
    return false;
  }

  bool node_fits(std::size_t lhs, NodeId v) {
    if (options_.stats) ++options_.stats->nodes_visited;
    const auto& pattern = rule_.lhs_nodes[lhs];
    if (pattern.root && !graph_.is_root(v)) return false;
    if (pattern.mark && *pattern.mark != graph_.mark(v)) return false;
    for (NodeId used : nodes_) {
      if (used == v) return false;
    }
    return true;
  }

  bool try_node(std::size_t depth, std::size_t lhs, NodeId v) {
    if (!node_fits(lhs, v)) return false;
    const auto mark = bindings_.checkpoint();
    if (!match_label(rule_.lhs_nodes[lhs].label, graph_.label(v), bindings_)) return false;
    nodes_[lhs] = v;
    const bool stop = step(depth + 1);
    nodes_[lhs] = kNoNode;
    bindings_.rollback(mark);
    return stop;
  }

  bool try_edge(std::size_t depth, std::size_t lhs, EdgeId e) {
    if (options_.stats) ++options_.stats->edges_visited;
    const auto& pattern = rule_.lhs_edges[lhs];
    if (pattern.mark != graph_.mark(e)) return false;
    const NodeId source = graph_.source(e);
    const NodeId target = graph_.target(e);
    if (nodes_[pattern.source] != kNoNode && nodes_[pattern.source] != source) return false;
    if (nodes_[pattern.target] != kNoNode && nodes_[pattern.target] != target) return false;
    for (EdgeId used : edges_) {
      if (used == e) return false;
    }

    // At most one endpoint is new; bind it together with the edge.
    std::optional<std::size_t> fresh;
    NodeId fresh_node = kNoNode;
    if (nodes_[pattern.source] == kNoNode) {
      fresh = pattern.source;
      fresh_node = source;
    } else if (nodes_[pattern.target] == kNoNode) {
      fresh = pattern.target;
      fresh_node = target;
    }
    const auto mark = bindings_.checkpoint();
    if (fresh) {
      if (!node_fits(*fresh, fresh_node) ||
          !match_label(rule_.lhs_nodes[*fresh].label, graph_.label(fresh_node), bindings_)) {
        bindings_.rollback(mark);
        return false;
      }
      nodes_[*fresh] = fresh_node;
    }
    bool stop = false;
    if (match_label(pattern.label, graph_.label(e), bindings_)) {
      edges_[lhs] = e;
      stop = step(depth + 1);
      edges_[lhs] = kNoEdge;
    }
    if (fresh) nodes_[*fresh] = kNoNode;
    bindings_.rollback(mark);
    return stop;
  }

  bool complete() {
    if (rule_.condition && !eval(*rule_.condition, bindings_)) return false;
    if (!check_dangling(rule_, state_, graph_)) return false;
    return !visit_(state_);
  }

  const RuleInstance& rule_;
  const HostGraph& graph_;
  const MatchOptions& options_;
  const std::function<bool(const Match&)>& visit_;
  Match own_;
  Match& state_;
  std::vector<NodeId>& nodes_;
  std::vector<EdgeId>& edges_;
  Bindings& bindings_;
};

}  // namespace

void for_each_match(const RuleInstance& rule, const HostGraph& graph,
                    const std::function<bool(const Match&)>& visit, const MatchOptions& options) {
  Search(rule, graph, options, visit).run();
}

std::optional<Match> find_match(const RuleInstance& rule, const HostGraph& graph,
                                const MatchOptions& options) {
  std::optional<Match> found;
  for_each_match(
      rule, graph,
      [&](const Match& match) {
        found = match;
        return false;
      },
      options);
  return found;
}

bool check_dangling(const RuleInstance& rule, const Match& match, const HostGraph& graph) {
  for (std::size_t lhs : rule.deleted_nodes) {
    std::size_t covered = 0;
    for (const auto& edge : rule.lhs_edges) {
      if (edge.source == lhs) ++covered;
      if (edge.target == lhs) ++covered;
    }
    if (graph.degree(match.nodes[lhs]) != covered) return false;
  }
  return true;
}

Application apply(const RuleInstance& rule, const Match& match, HostGraph& graph) {
  std::vector<Label> node_labels(rule.rhs_nodes.size());
  std::vector<Label> edge_labels(rule.rhs_edges.size());
  for (std::size_t r = 0; r < rule.rhs_nodes.size(); ++r) {
    if (!rule.rhs_nodes[r].keeps_label) node_labels[r] = eval(rule.rhs_nodes[r].label, match.bindings);
  }
  for (std::size_t r = 0; r < rule.rhs_edges.size(); ++r) {
    if (!rule.rhs_edges[r].keeps_label) edge_labels[r] = eval(rule.rhs_edges[r].label, match.bindings);
  }

  for (std::size_t l = 0; l < rule.lhs_edges.size(); ++l) {
    if (!rule.lhs_edges[l].rhs) graph.remove_edge(match.edges[l]);
  }
  for (std::size_t l : rule.deleted_nodes) graph.remove_node(match.nodes[l]);

  Application result;
  result.nodes.resize(rule.rhs_nodes.size(), kNoNode);
  result.edges.resize(rule.rhs_edges.size(), kNoEdge);
  for (std::size_t r = 0; r < rule.rhs_nodes.size(); ++r) {
    const auto& node = rule.rhs_nodes[r];
    if (!node.lhs) {
      result.nodes[r] = graph.add_node(std::move(node_labels[r]), *node.mark, node.root);
      continue;
    }
    const NodeId v = match.nodes[*node.lhs];
    result.nodes[r] = v;
    if (!node.keeps_label) graph.set_label(v, std::move(node_labels[r]));
    if (node.mark) graph.set_mark(v, *node.mark);
    // A non-root on both sides leaves the host root flag alone.
    if (node.root) {
      graph.set_root(v, true);
    } else if (rule.lhs_nodes[*node.lhs].root) {
      graph.set_root(v, false);
    }
  }
  for (std::size_t r = 0; r < rule.rhs_edges.size(); ++r) {
    const auto& edge = rule.rhs_edges[r];
    if (!edge.lhs) {
      result.edges[r] = graph.add_edge(result.nodes[edge.source], result.nodes[edge.target],
                                       std::move(edge_labels[r]), edge.mark);
      continue;
    }
    const EdgeId e = match.edges[*edge.lhs];
    result.edges[r] = e;
    if (!edge.keeps_label) graph.set_label(e, std::move(edge_labels[r]));
    graph.set_mark(e, edge.mark);
  }
  return result;
}

}  // namespace rgt
