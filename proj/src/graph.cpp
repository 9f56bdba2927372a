#include "rgt/graph.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace rgt {

namespace {

constexpr std::array<std::string_view, kNodeMarkCount> kNodeMarkNames = {"none", "red", "green",
                                                                         "blue", "grey"};
constexpr std::array<std::string_view, kEdgeMarkCount> kEdgeMarkNames = {"none", "red", "green",
                                                                         "blue", "dashed"};

void append_atom(std::string& out, const Atom& atom) {
  if (atom.is_int()) {
    out += std::to_string(atom.as_int());
    return;
  }
  out += '"';
  for (char c : atom.as_string()) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

// Intrusive doubly linked list helpers. `get` selects which link of a record
// is threaded through the list.
template <class Records, class List, class Get>
void list_append(List& list, Records& records, std::uint32_t id, Get get) {
  auto& link = get(records[id]);
  link.prev = list.tail;
  link.next = kNil;
  if (list.tail == kNil) {
    list.head = id;
  } else {
    get(records[list.tail]).next = id;
  }
  list.tail = id;
  ++list.count;
}

// Leaves the record's own link intact so that list_relink can put it back.
template <class Records, class List, class Get>
void list_unlink(List& list, Records& records, std::uint32_t id, Get get) {
  const auto& link = get(records[id]);
  if (link.prev == kNil) {
    list.head = link.next;
  } else {
    get(records[link.prev]).next = link.next;
  }
  if (link.next == kNil) {
    list.tail = link.prev;
  } else {
    get(records[link.next]).prev = link.prev;
  }
  --list.count;
}

template <class Records, class List, class Get>
void list_relink(List& list, Records& records, std::uint32_t id, Get get) {
  const auto& link = get(records[id]);
  if (link.prev == kNil) {
    list.head = id;
  } else {
    get(records[link.prev]).next = id;
  }
  if (link.next == kNil) {
    list.tail = id;
  } else {
    get(records[link.next]).prev = id;
  }
  ++list.count;
}

}  // namespace

std::string to_string(const Label& label) {
  if (label.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i > 0) out += ':';
    append_atom(out, label[i]);
  }
  return out;
}

std::string_view to_string(NodeMark mark) { return kNodeMarkNames[static_cast<std::size_t>(mark)]; }
std::string_view to_string(EdgeMark mark) { return kEdgeMarkNames[static_cast<std::size_t>(mark)]; }

std::optional<NodeMark> parse_node_mark(std::string_view text) {
  for (std::size_t i = 0; i < kNodeMarkNames.size(); ++i) {
    if (kNodeMarkNames[i] == text) return static_cast<NodeMark>(i);
  }
  return std::nullopt;
}

std::optional<EdgeMark> parse_edge_mark(std::string_view text) {
  for (std::size_t i = 0; i < kEdgeMarkNames.size(); ++i) {
    if (kEdgeMarkNames[i] == text) return static_cast<EdgeMark>(i);
  }
  return std::nullopt;
}

std::ostream& operator<<(std::ostream& out, NodeId id) { return out << 'v' << index_of(id); }
std::ostream& operator<<(std::ostream& out, EdgeId id) { return out << 'e' << index_of(id); }

const HostGraph::NodeRecord& HostGraph::node_at(NodeId node) const {
  if (!contains(node)) throw GraphError("unknown node " + std::to_string(index_of(node)));
  return nodes_[index_of(node)];
}

HostGraph::NodeRecord& HostGraph::node_at(NodeId node) {
  if (!contains(node)) throw GraphError("unknown node " + std::to_string(index_of(node)));
  return nodes_[index_of(node)];
}

const HostGraph::EdgeRecord& HostGraph::edge_at(EdgeId edge) const {
  if (!contains(edge)) throw GraphError("unknown edge " + std::to_string(index_of(edge)));
  return edges_[index_of(edge)];
}

HostGraph::EdgeRecord& HostGraph::edge_at(EdgeId edge) {
  if (!contains(edge)) throw GraphError("unknown edge " + std::to_string(index_of(edge)));
  return edges_[index_of(edge)];
}

HostGraph::ListHead& HostGraph::source_list(const EdgeRecord& edge) {
  auto& source = nodes_[index_of(edge.source)];
  return edge.source == edge.target ? source.loops : source.out;
}

namespace {
auto source_link = [](auto& edge) -> auto& { return edge.source_link; };
auto target_link = [](auto& edge) -> auto& { return edge.target_link; };
auto root_link = [](auto& node) -> auto& { return node.root_link; };
}  // namespace

void HostGraph::link_edge(std::uint32_t id) {
  auto& edge = edges_[id];
  list_append(source_list(edge), edges_, id, source_link);
  if (edge.source != edge.target) {
    list_append(nodes_[index_of(edge.target)].in, edges_, id, target_link);
  }
}

void HostGraph::unlink_edge(std::uint32_t id) {
  auto& edge = edges_[id];
  list_unlink(source_list(edge), edges_, id, source_link);
  if (edge.source != edge.target) {
    list_unlink(nodes_[index_of(edge.target)].in, edges_, id, target_link);
  }
}

void HostGraph::relink_edge(std::uint32_t id) {
  auto& edge = edges_[id];
  list_relink(source_list(edge), edges_, id, source_link);
  if (edge.source != edge.target) {
    list_relink(nodes_[index_of(edge.target)].in, edges_, id, target_link);
  }
}

void HostGraph::link_root(std::uint32_t id) {
  auto& bucket = root_buckets_[static_cast<std::size_t>(nodes_[id].mark)];
  list_append(bucket, nodes_, id, root_link);
  ++root_count_;
}

void HostGraph::unlink_root(std::uint32_t id) {
  auto& bucket = root_buckets_[static_cast<std::size_t>(nodes_[id].mark)];
  list_unlink(bucket, nodes_, id, root_link);
  --root_count_;
}

void HostGraph::relink_root(std::uint32_t id, Link at, NodeMark bucket_mark) {
  nodes_[id].root_link = at;
  auto& bucket = root_buckets_[static_cast<std::size_t>(bucket_mark)];
  list_relink(bucket, nodes_, id, root_link);
  ++root_count_;
}

NodeId HostGraph::add_node(Label label, NodeMark mark, bool root) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  if (id == kNil) throw GraphError("node id space exhausted");
  NodeRecord record;
  record.label = std::move(label);
  record.mark = mark;
  record.root = root;
  nodes_.push_back(std::move(record));
  if (root) link_root(id);
  ++live_nodes_;
  record_entry({Op::add_node, id});
  return NodeId{id};
}

EdgeId HostGraph::add_edge(NodeId source, NodeId target, Label label, EdgeMark mark) {
  if (!contains(source) || !contains(target)) throw GraphError("edge endpoint does not exist");
  const auto id = static_cast<std::uint32_t>(edges_.size());
  if (id == kNil) throw GraphError("edge id space exhausted");
  EdgeRecord record;
  record.label = std::move(label);
  record.source = source;
  record.target = target;
  record.mark = mark;
  edges_.push_back(std::move(record));
  link_edge(id);
  ++live_edges_;
  record_entry({Op::add_edge, id});
  return EdgeId{id};
}

void HostGraph::remove_node(NodeId node) {
  auto& record = node_at(node);
  if (record.out.count + record.in.count + record.loops.count != 0) {
    throw GraphError("cannot remove node " + std::to_string(index_of(node)) +
                     ": it still has incident edges");
  }
  const auto id = index_of(node);
  if (record.root) unlink_root(id);
  record.alive = false;
  --live_nodes_;
  record_entry({Op::remove_node, id});
}

void HostGraph::remove_edge(EdgeId edge) {
  auto& record = edge_at(edge);
  const auto id = index_of(edge);
  unlink_edge(id);
  record.alive = false;
  --live_edges_;
  record_entry({Op::remove_edge, id});
}

void HostGraph::set_label(NodeId node, Label label) {
  auto& record = node_at(node);
  if (journaling()) {
    journal_.push_back({Op::node_label, index_of(node)});
    label_journal_.push_back(std::move(record.label));
  }
  record.label = std::move(label);
}

void HostGraph::set_label(EdgeId edge, Label label) {
  auto& record = edge_at(edge);
  if (journaling()) {
    journal_.push_back({Op::edge_label, index_of(edge)});
    label_journal_.push_back(std::move(record.label));
  }
  record.label = std::move(label);
}

void HostGraph::set_mark(NodeId node, NodeMark mark) {
  auto& record = node_at(node);
  if (record.mark == mark) return;
  const auto id = index_of(node);
  JournalEntry entry{Op::node_mark, id, static_cast<std::uint8_t>(record.mark)};
  entry.old_root_link = record.root_link;
  if (record.root) unlink_root(id);
  record.mark = mark;
  if (record.root) link_root(id);
  record_entry(std::move(entry));
}

void HostGraph::set_mark(EdgeId edge, EdgeMark mark) {
  auto& record = edge_at(edge);
  if (record.mark == mark) return;
  record_entry({Op::edge_mark, index_of(edge), static_cast<std::uint8_t>(record.mark)});
  record.mark = mark;
}

void HostGraph::set_root(NodeId node, bool root) {
  auto& record = node_at(node);
  if (record.root == root) return;
  const auto id = index_of(node);
  JournalEntry entry{Op::node_root, id, 0, record.root};
  entry.old_root_link = record.root_link;
  if (root) {
    record.root = true;
    link_root(id);
  } else {
    unlink_root(id);
    record.root = false;
  }
  record_entry(std::move(entry));
}

std::size_t HostGraph::degree(NodeId node) const {
  const auto& record = node_at(node);
  return record.in.count + record.out.count + 2 * record.loops.count;
}

std::vector<EdgeId> HostGraph::incident_edges(NodeId node, Direction direction) const {
  std::vector<EdgeId> result;
  const auto append = [&](EdgeList list) { result.insert(result.end(), list.begin(), list.end()); };
  if (direction != Direction::in) {
    append(out_edges(node));
    append(loops(node));
  }
  if (direction != Direction::out) {
    append(in_edges(node));
    append(loops(node));
  }
  return result;
}

std::vector<NodeId> HostGraph::roots_by_mark(std::optional<NodeMark> mark) const {
  std::vector<NodeId> result;
  for (std::size_t m = 0; m < kNodeMarkCount; ++m) {
    if (mark && static_cast<std::size_t>(*mark) != m) continue;
    for (NodeId node : roots(static_cast<NodeMark>(m))) result.push_back(node);
  }
  return result;
}

std::vector<NodeId> HostGraph::node_ids() const {
  std::vector<NodeId> result;
  result.reserve(live_nodes_);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].alive) result.push_back(NodeId{i});
  }
  return result;
}

std::vector<EdgeId> HostGraph::edge_ids() const {
  std::vector<EdgeId> result;
  result.reserve(live_edges_);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].alive) result.push_back(EdgeId{i});
  }
  return result;
}

HostGraph::SnapshotToken HostGraph::snapshot() {
  const std::uint64_t serial = next_serial_++;
  snapshots_.push_back({journal_.size(), serial});
  return {snapshots_.size() - 1, serial};
}

void HostGraph::check_token(const SnapshotToken& token) const {
  if (token.depth_ >= snapshots_.size() || snapshots_[token.depth_].serial != token.serial_) {
    throw GraphError("snapshot token is no longer valid");
  }
}

void HostGraph::restore(SnapshotToken token) {
  check_token(token);
  const std::size_t position = snapshots_[token.depth_].journal_position;
  while (journal_.size() > position) {
    undo(journal_.back());
    journal_.pop_back();
  }
  snapshots_.resize(token.depth_);
  if (snapshots_.empty()) {
    journal_.clear();
    label_journal_.clear();
  }
}

void HostGraph::discard(SnapshotToken token) {
  check_token(token);
  if (token.depth_ + 1 != snapshots_.size()) {
    throw GraphError("only the innermost snapshot can be discarded");
  }
  snapshots_.pop_back();
  if (snapshots_.empty()) {
    journal_.clear();
    label_journal_.clear();
  }
}

void HostGraph::undo(const JournalEntry& entry) {
  const std::uint32_t id = entry.id;
  switch (entry.op) {
    // Undo runs in reverse order, so an added record is always the last one;
    // dropping it also rolls the id counter back.
    case Op::add_node: {
      if (id + 1 != nodes_.size()) throw GraphError("journal out of order");
      if (nodes_[id].root) unlink_root(id);
      nodes_.pop_back();
      --live_nodes_;
      break;
    }
    case Op::add_edge:
      if (id + 1 != edges_.size()) throw GraphError("journal out of order");
      unlink_edge(id);
      edges_.pop_back();
      --live_edges_;
      break;
    case Op::remove_node: {
      auto& record = nodes_[id];
      record.alive = true;
      ++live_nodes_;
      if (record.root) relink_root(id, record.root_link, record.mark);
      break;
    }
    case Op::remove_edge:
      edges_[id].alive = true;
      ++live_edges_;
      relink_edge(id);
      break;
    case Op::node_label:
      nodes_[id].label = std::move(label_journal_.back());
      label_journal_.pop_back();
      break;
    case Op::edge_label:
      edges_[id].label = std::move(label_journal_.back());
      label_journal_.pop_back();
      break;
    case Op::node_mark: {
      auto& record = nodes_[id];
      const auto old_mark = static_cast<NodeMark>(entry.old_mark);
      if (record.root) {
        unlink_root(id);
        relink_root(id, entry.old_root_link, old_mark);
      }
      record.mark = old_mark;
      break;
    }
    case Op::edge_mark:
      edges_[id].mark = static_cast<EdgeMark>(entry.old_mark);
      break;
    case Op::node_root: {
      auto& record = nodes_[id];
      if (entry.old_root) {
        record.root = true;
        relink_root(id, entry.old_root_link, record.mark);
      } else {
        unlink_root(id);
        record.root = false;
      }
      break;
    }
  }
}

std::vector<std::string> HostGraph::audit() const {
  std::vector<std::string> problems;
  const auto fail = [&](const std::string& message) { problems.push_back(message); };

  std::size_t live_nodes = 0;
  std::size_t live_edges = 0;
  std::size_t roots = 0;
  std::vector<std::uint32_t> out(nodes_.size()), in(nodes_.size()), loops(nodes_.size());
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].alive) continue;
    ++live_nodes;
    if (nodes_[i].root) ++roots;
  }
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& edge = edges_[i];
    if (!edge.alive) continue;
    ++live_edges;
    if (!contains(edge.source) || !contains(edge.target)) {
      fail("edge " + std::to_string(i) + " has a dead endpoint");
      continue;
    }
    if (edge.source == edge.target) {
      ++loops[index_of(edge.source)];
    } else {
      ++out[index_of(edge.source)];
      ++in[index_of(edge.target)];
    }
  }
  if (live_nodes != live_nodes_) fail("live node count mismatch");
  if (live_edges != live_edges_) fail("live edge count mismatch");
  if (roots != root_count_) fail("root count mismatch");

  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    if (!node.alive) continue;
    const auto walk = [&](const ListHead& list, bool target_side, std::uint32_t expected,
                          const char* name) {
      std::uint32_t seen = 0;
      std::uint32_t prev = kNil;
      for (std::uint32_t e = list.head; e != kNil && seen <= expected;) {
        const auto& edge = edges_[e];
        const Link& link = target_side ? edge.target_link : edge.source_link;
        if (!edge.alive) fail(std::string(name) + " list of node " + std::to_string(i) + " holds a dead edge");
        if (link.prev != prev) fail(std::string(name) + " list of node " + std::to_string(i) + " has a bad back link");
        const bool belongs = target_side ? index_of(edge.target) == i && edge.source != edge.target
                                         : index_of(edge.source) == i;
        if (!belongs) fail(std::string(name) + " list of node " + std::to_string(i) + " holds a foreign edge");
        ++seen;
        prev = e;
        e = link.next;
      }
      if (seen != expected || list.count != expected || list.tail != prev) {
        fail(std::string(name) + " list of node " + std::to_string(i) + " has the wrong length");
      }
    };
    walk(node.out, false, out[i], "out");
    walk(node.in, true, in[i], "in");
    walk(node.loops, false, loops[i], "loop");
  }

  std::size_t registered = 0;
  for (std::size_t m = 0; m < kNodeMarkCount; ++m) {
    std::uint32_t prev = kNil;
    std::uint32_t seen = 0;
    for (std::uint32_t v = root_buckets_[m].head; v != kNil && seen <= nodes_.size();) {
      const auto& node = nodes_[v];
      if (!node.alive || !node.root || static_cast<std::size_t>(node.mark) != m) {
        fail("root bucket " + std::string(kNodeMarkNames[m]) + " holds node " + std::to_string(v) +
             " wrongly");
      }
      if (node.root_link.prev != prev) fail("root bucket has a bad back link");
      prev = v;
      ++seen;
      v = node.root_link.next;
    }
    if (seen != root_buckets_[m].count || root_buckets_[m].tail != prev) {
      fail("root bucket " + std::string(kNodeMarkNames[m]) + " has the wrong length");
    }
    registered += seen;
  }
  if (registered != roots) fail("root registry does not cover every root");
  return problems;
}

bool operator==(const HostGraph& a, const HostGraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  const auto nodes = std::max(a.nodes_.size(), b.nodes_.size());
  for (std::uint32_t i = 0; i < nodes; ++i) {
    const NodeId id{i};
    if (a.contains(id) != b.contains(id)) return false;
    if (!a.contains(id)) continue;
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.label != y.label || x.mark != y.mark || x.root != y.root) return false;
  }
  const auto edges = std::max(a.edges_.size(), b.edges_.size());
  for (std::uint32_t i = 0; i < edges; ++i) {
    const EdgeId id{i};
    if (a.contains(id) != b.contains(id)) return false;
    if (!a.contains(id)) continue;
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.label != y.label || x.mark != y.mark || x.source != y.source || x.target != y.target) {
      return false;
    }
  }
  return true;
}

HostGraph build_graph(std::span<const NodeSpec> nodes, std::span<const EdgeSpec> edges) {
  HostGraph graph;
  for (const auto& node : nodes) graph.add_node(node.label, node.mark, node.root);
  for (const auto& edge : edges) {
    if (edge.source >= nodes.size() || edge.target >= nodes.size()) {
      throw std::out_of_range("edge endpoint " +
                              std::to_string(std::max(edge.source, edge.target)) +
                              " is not a node");
    }
    graph.add_edge(NodeId{static_cast<std::uint32_t>(edge.source)},
                   NodeId{static_cast<std::uint32_t>(edge.target)}, edge.label, edge.mark);
  }
  return graph;
}

}  // namespace rgt
