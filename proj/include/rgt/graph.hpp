#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rgt {

// A label entry: either an integer or a string.
class Atom {
 public:
  Atom(std::int64_t value) : value_(value) {}  // NOLINT: implicit on purpose
  explicit Atom(std::string value) : value_(std::move(value)) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_string() const { return !is_int(); }
  std::int64_t as_int() const { return std::get<std::int64_t>(value_); }
  const std::string& as_string() const { return std::get<std::string>(value_); }

  friend bool operator==(const Atom&, const Atom&) = default;

 private:
  std::variant<std::int64_t, std::string> value_;
};

using Label = std::vector<Atom>;

// Renders "empty" or colon separated atoms, strings quoted.
std::string to_string(const Label& label);

enum class NodeMark : std::uint8_t { none, red, green, blue, grey };
enum class EdgeMark : std::uint8_t { none, red, green, blue, dashed };

inline constexpr std::size_t kNodeMarkCount = 5;
inline constexpr std::size_t kEdgeMarkCount = 5;

std::string_view to_string(NodeMark mark);
std::string_view to_string(EdgeMark mark);
std::optional<NodeMark> parse_node_mark(std::string_view text);
std::optional<EdgeMark> parse_edge_mark(std::string_view text);

enum class NodeId : std::uint32_t {};
enum class EdgeId : std::uint32_t {};

inline constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();
inline constexpr NodeId kNoNode{kNil};
inline constexpr EdgeId kNoEdge{kNil};

constexpr std::uint32_t index_of(NodeId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index_of(EdgeId id) { return static_cast<std::uint32_t>(id); }

std::ostream& operator<<(std::ostream& out, NodeId id);
std::ostream& operator<<(std::ostream& out, EdgeId id);

enum class Direction { in, out, either };

class GraphError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class HostGraph;

// Forward range over one intrusive edge list of a node.
class EdgeList {
 public:
  class iterator {
   public:
    using value_type = EdgeId;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const HostGraph* graph, std::uint32_t edge, bool target_side)
        : graph_(graph), edge_(edge), target_side_(target_side) {}
    EdgeId operator*() const { return EdgeId{edge_}; }
    iterator& operator++();
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.edge_ == b.edge_; }

   private:
    const HostGraph* graph_ = nullptr;
    std::uint32_t edge_ = kNil;
    bool target_side_ = false;
  };

  EdgeList(const HostGraph* graph, std::uint32_t head, bool target_side)
      : graph_(graph), head_(head), target_side_(target_side) {}
  iterator begin() const { return {graph_, head_, target_side_}; }
  iterator end() const { return {graph_, kNil, target_side_}; }

 private:
  const HostGraph* graph_;
  std::uint32_t head_;
  bool target_side_;
};

// Forward range over the roots registered under one mark.
class RootList {
 public:
  class iterator {
   public:
    using value_type = NodeId;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const HostGraph* graph, std::uint32_t node) : graph_(graph), node_(node) {}
    NodeId operator*() const { return NodeId{node_}; }
    iterator& operator++();
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.node_ == b.node_; }

   private:
    const HostGraph* graph_ = nullptr;
    std::uint32_t node_ = kNil;
  };

  RootList(const HostGraph* graph, std::uint32_t head) : graph_(graph), head_(head) {}
  iterator begin() const { return {graph_, head_}; }
  iterator end() const { return {graph_, kNil}; }

 private:
  const HostGraph* graph_;
  std::uint32_t head_;
};

// Mutable labelled, marked, rooted directed multigraph.
//
// Removing an element never frees its id. Adjacency lists keep insertion
// order. Mutations are journaled while a snapshot is open, so restore() costs
// time proportional to the work done since the snapshot rather than to the
// graph size. restore() yields a graph equal to a copy taken at the snapshot,
// id counters included.
class HostGraph {
 public:
  class SnapshotToken {
   public:
    std::size_t depth() const { return depth_; }

   private:
    friend class HostGraph;
    SnapshotToken(std::size_t depth, std::uint64_t serial) : depth_(depth), serial_(serial) {}
    std::size_t depth_;
    std::uint64_t serial_;
  };

  NodeId add_node(Label label = {}, NodeMark mark = NodeMark::none, bool root = false);
  EdgeId add_edge(NodeId source, NodeId target, Label label = {}, EdgeMark mark = EdgeMark::none);
  // Throws GraphError unless the node is isolated.
  void remove_node(NodeId node);
  void remove_edge(EdgeId edge);

  void set_label(NodeId node, Label label);
  void set_label(EdgeId edge, Label label);
  void set_mark(NodeId node, NodeMark mark);
  void set_mark(EdgeId edge, EdgeMark mark);
  void set_root(NodeId node, bool root);

  bool contains(NodeId node) const {
    return index_of(node) < nodes_.size() && nodes_[index_of(node)].alive;
  }
  bool contains(EdgeId edge) const {
    return index_of(edge) < edges_.size() && edges_[index_of(edge)].alive;
  }

  std::size_t node_count() const { return live_nodes_; }
  std::size_t edge_count() const { return live_edges_; }
  // One past the largest id ever handed out.
  std::uint32_t node_capacity() const { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t edge_capacity() const { return static_cast<std::uint32_t>(edges_.size()); }

  const Label& label(NodeId node) const { return node_at(node).label; }
  NodeMark mark(NodeId node) const { return node_at(node).mark; }
  bool is_root(NodeId node) const { return node_at(node).root; }

  const Label& label(EdgeId edge) const { return edge_at(edge).label; }
  EdgeMark mark(EdgeId edge) const { return edge_at(edge).mark; }
  NodeId source(EdgeId edge) const { return edge_at(edge).source; }
  NodeId target(EdgeId edge) const { return edge_at(edge).target; }

  // Loops count twice.
  std::size_t degree(NodeId node) const;
  std::size_t in_degree(NodeId node) const { return node_at(node).in.count; }
  std::size_t out_degree(NodeId node) const { return node_at(node).out.count; }
  std::size_t loop_count(NodeId node) const { return node_at(node).loops.count; }

  // Non-loop edges leaving, non-loop edges entering, and loops, in insertion order.
  EdgeList out_edges(NodeId node) const { return {this, node_at(node).out.head, false}; }
  EdgeList in_edges(NodeId node) const { return {this, node_at(node).in.head, true}; }
  EdgeList loops(NodeId node) const { return {this, node_at(node).loops.head, false}; }

  // out: out-edges then loops; in: in-edges then loops; either: out then in,
  // so loops appear twice.
  std::vector<EdgeId> incident_edges(NodeId node, Direction direction) const;

  RootList roots(NodeMark mark) const {
    return {this, root_buckets_[static_cast<std::size_t>(mark)].head};
  }
  // Registry order: buckets in mark order, insertion order within a bucket.
  std::vector<NodeId> roots_by_mark(std::optional<NodeMark> mark) const;
  std::size_t root_count() const { return root_count_; }

  std::vector<NodeId> node_ids() const;
  std::vector<EdgeId> edge_ids() const;

  SnapshotToken snapshot();
  // Rolls back to the token and closes it and every snapshot opened after it.
  void restore(SnapshotToken token);
  // Closes the innermost snapshot and keeps all changes.
  void discard(SnapshotToken token);
  std::size_t snapshot_depth() const { return snapshots_.size(); }
  std::size_t journal_size() const { return journal_.size(); }

  // Consistency check of derived indexes; empty when healthy.
  std::vector<std::string> audit() const;

  // Same live ids with the same labels, marks, roots and endpoints.
  friend bool operator==(const HostGraph& a, const HostGraph& b);

 private:
  friend class EdgeList::iterator;
  friend class RootList::iterator;

  struct Link {
    std::uint32_t prev = kNil;
    std::uint32_t next = kNil;
  };
  struct ListHead {
    std::uint32_t head = kNil;
    std::uint32_t tail = kNil;
    std::uint32_t count = 0;
  };
  struct NodeRecord {
    Label label;
    NodeMark mark = NodeMark::none;
    bool root = false;
    bool alive = true;
    ListHead out;
    ListHead in;
    ListHead loops;
    Link root_link;
  };
  struct EdgeRecord {
    Label label;
    NodeId source;
    NodeId target;
    EdgeMark mark = EdgeMark::none;
    bool alive = true;
    Link source_link;  // in the source's out list, or its loop list
    Link target_link;  // in the target's in list; unused for loops
  };
  enum class Op : std::uint8_t {
    add_node,
    add_edge,
    remove_node,
    remove_edge,
    node_label,
    edge_label,
    node_mark,
    edge_mark,
    node_root,
  };
  struct JournalEntry {
    JournalEntry(Op op, std::uint32_t id, std::uint8_t old_mark = 0, bool old_root = false)
        : op(op), id(id), old_mark(old_mark), old_root(old_root) {}
    Op op;
    std::uint32_t id;
    std::uint8_t old_mark;
    bool old_root;
    Link old_root_link;
  };
  struct OpenSnapshot {
    std::size_t journal_position;
    std::uint64_t serial;
  };

  const NodeRecord& node_at(NodeId node) const;
  NodeRecord& node_at(NodeId node);
  const EdgeRecord& edge_at(EdgeId edge) const;
  EdgeRecord& edge_at(EdgeId edge);

  ListHead& source_list(const EdgeRecord& edge);
  void link_edge(std::uint32_t edge);
  void unlink_edge(std::uint32_t edge);
  void relink_edge(std::uint32_t edge);
  void link_root(std::uint32_t node);
  void unlink_root(std::uint32_t node);
  void relink_root(std::uint32_t node, Link at, NodeMark bucket);

  bool journaling() const { return !snapshots_.empty(); }
  void record_entry(JournalEntry entry) {
    if (journaling()) journal_.push_back(std::move(entry));
  }
  void undo(const JournalEntry& entry);
  void check_token(const SnapshotToken& token) const;

  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::array<ListHead, kNodeMarkCount> root_buckets_{};
  std::size_t live_nodes_ = 0;
  std::size_t live_edges_ = 0;
  std::size_t root_count_ = 0;

  std::vector<JournalEntry> journal_;
  std::vector<Label> label_journal_;  // old labels, in step with label entries
  std::vector<OpenSnapshot> snapshots_;
  std::uint64_t next_serial_ = 0;
};

inline EdgeList::iterator& EdgeList::iterator::operator++() {
  const auto& record = graph_->edges_[edge_];
  edge_ = target_side_ ? record.target_link.next : record.source_link.next;
  return *this;
}

inline RootList::iterator& RootList::iterator::operator++() {
  node_ = graph_->nodes_[node_].root_link.next;
  return *this;
}

struct NodeSpec {
  Label label;
  NodeMark mark = NodeMark::none;
  bool root = false;
};

struct EdgeSpec {
  std::size_t source;
  std::size_t target;
  Label label;
  EdgeMark mark = EdgeMark::none;
};

// Node i of the result has id i, edge j has id j. Throws std::out_of_range
// when an edge names a missing node.
HostGraph build_graph(std::span<const NodeSpec> nodes, std::span<const EdgeSpec> edges);

}  // namespace rgt
