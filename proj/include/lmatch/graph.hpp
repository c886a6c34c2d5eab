#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmatch {

/// External node identifier. Totally ordered; used for all tie-breaking.
using NodeId = std::uint64_t;
/// Dense position of a node inside one Graph, ordered like the NodeIds.
using NodeIndex = std::uint32_t;
/// Dense edge identifier, stable for the lifetime of a Graph.
using EdgeId = std::uint32_t;
using Weight = std::uint64_t;
using Color = std::uint64_t;

inline constexpr NodeIndex kNoNode = static_cast<NodeIndex>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Endpoints of an edge, stored so that id(u) < id(v).
struct Edge {
  NodeIndex u = kNoNode;
  NodeIndex v = kNoNode;

  NodeIndex other(NodeIndex w) const { return w == u ? v : u; }
  bool has(NodeIndex w) const { return w == u || w == v; }
  bool operator==(const Edge&) const = default;
};

struct Incidence {
  EdgeId edge;
  NodeIndex neighbor;
  bool operator==(const Incidence&) const = default;
};

/// Membership mask over the EdgeIds of one Graph. Induced subgraphs are
/// expressed as masks so EdgeIds never change along a pipeline.
class EdgeMask {
 public:
  EdgeMask() = default;
  explicit EdgeMask(std::size_t num_edges, bool value = false)
      : bits_(num_edges, value ? 1 : 0) {}

  static EdgeMask from_edges(std::size_t num_edges, std::span<const EdgeId> edges);

  std::size_t size() const { return bits_.size(); }
  bool test(EdgeId e) const { return bits_[e] != 0; }
  void set(EdgeId e, bool value = true) { bits_[e] = value ? 1 : 0; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<EdgeId> to_vector() const;

  bool operator==(const EdgeMask&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Immutable simple undirected graph.
///
/// Nodes are kept sorted by NodeId and edges sorted by their endpoint ids, so
/// two graphs built from the same node and edge sets are identical regardless
/// of insertion order.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `nodes` (must be distinct). `edges` refer to NodeIds.
  /// `weights`, when given, is aligned with `edges` as passed in.
  /// When `input_to_edge` is non-null it receives the EdgeId of each input edge.
  static Graph from_edges(std::vector<NodeId> nodes,
                          std::span<const std::pair<NodeId, NodeId>> edges,
                          std::optional<std::vector<Weight>> weights = std::nullopt,
                          std::vector<EdgeId>* input_to_edge = nullptr);

  /// Convenience: nodes are 0..n-1.
  static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                          std::optional<std::vector<Weight>> weights = std::nullopt,
                          std::vector<EdgeId>* input_to_edge = nullptr);

  std::size_t num_nodes() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  NodeId id(NodeIndex v) const { return ids_[v]; }
  std::span<const NodeId> ids() const { return ids_; }
  std::optional<NodeIndex> index_of(NodeId id) const;
  /// Throws InvalidArgument when `id` is not a node of this graph.
  NodeIndex require_index(NodeId id) const;

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::optional<EdgeId> find_edge(NodeIndex a, NodeIndex b) const;

  /// Incident edges of v in ascending EdgeId order.
  std::span<const Incidence> incident(NodeIndex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const { return max_degree_; }

  bool weighted() const { return weights_.has_value(); }
  Weight weight(EdgeId e) const { return weights_ ? (*weights_)[e] : 1; }
  const std::optional<std::vector<Weight>>& weights() const { return weights_; }

  bool has_b_values() const { return b_values_.has_value(); }
  std::uint32_t b(NodeIndex v) const { return b_values_ ? (*b_values_)[v] : 1; }
  const std::optional<std::vector<std::uint32_t>>& b_values() const { return b_values_; }

  const std::optional<std::vector<Color>>& coloring() const { return coloring_; }

  /// Copies with an attribute replaced; validated against the invariants.
  Graph with_weights(std::vector<Weight> weights_by_edge_id) const;
  Graph with_b_values(std::vector<std::uint32_t> b_by_index) const;
  Graph with_coloring(std::vector<Color> colors_by_index) const;
  Graph without_weights() const;

  bool operator==(const Graph&) const = default;

 private:
  void build_adjacency();

  std::vector<NodeId> ids_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> adjacency_;
  std::size_t max_degree_ = 0;
  std::optional<std::vector<Weight>> weights_;
  std::optional<std::vector<std::uint32_t>> b_values_;
  std::optional<std::vector<Color>> coloring_;
};

/// Degree of v counting only edges in `active`.
std::size_t active_degree(const Graph& g, const EdgeMask& active, NodeIndex v);
std::size_t active_max_degree(const Graph& g, const EdgeMask& active);

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
unsigned ceil_log2(std::uint64_t x);

// ---------------------------------------------------------------------------
// Structural transforms

struct TwoDecomposition {
  Graph decomposed;
  std::vector<NodeIndex> copy_of;          // decomposed node -> original node
  std::vector<std::uint32_t> copy_rank;    // k for the k-th copy of its original
  std::vector<EdgeId> to_decomposed;       // original edge -> decomposed edge (kNoEdge if inactive)
  std::vector<EdgeId> to_original;         // decomposed edge -> original edge
};

/// Splits every node into ceil(d/2) copies. Incident edges are paired in
/// ascending EdgeId order, two per copy; an odd leftover goes to the last copy.
TwoDecomposition two_decompose(const Graph& g);
TwoDecomposition two_decompose(const Graph& g, const EdgeMask& active);

enum class Side : std::uint8_t { Out = 0, In = 1 };

/// Per-edge direction, expressed as the tail endpoint.
struct Orientation {
  std::vector<NodeIndex> tail;

  NodeIndex head(const Graph& g, EdgeId e) const { return g.edge(e).other(tail[e]); }
  /// Low-id endpoint to high-id endpoint.
  static Orientation by_id(const Graph& g);
  /// Validates (from, to) pairs against the edges of g.
  static Orientation from_pairs(const Graph& g, std::span<const std::pair<NodeId, NodeId>> dirs);
};

struct BipartiteCover {
  Graph cover;                              // node 2i+side is copy (i, side)
  std::vector<NodeIndex> original;          // cover node -> original node
  std::vector<Side> side;                   // cover node -> side
  std::vector<EdgeId> to_cover;             // original edge -> cover edge (kNoEdge if inactive)
  std::vector<EdgeId> to_original;          // cover edge -> original edge

  NodeIndex node(NodeIndex v, Side s) const { return 2 * v + static_cast<NodeIndex>(s); }
};

/// In/out split: edge (u -> v) becomes {u_out, v_in}.
BipartiteCover bipartite_cover(const Graph& g);
BipartiteCover bipartite_cover(const Graph& g, const Orientation& orient);
BipartiteCover bipartite_cover(const Graph& g, const Orientation& orient, const EdgeMask& active);

struct PathCycleComponent {
  enum class Kind { Path, Cycle };
  Kind kind = Kind::Path;
  std::vector<NodeIndex> nodes;  // for a cycle, first node repeated at the end
  std::vector<EdgeId> edges;

  std::size_t length() const { return edges.size(); }
  bool is_cycle() const { return kind == Kind::Cycle; }
};

/// Path and cycle components of a graph with max degree <= 2, in canonical
/// order. Isolated nodes are not reported.
std::vector<PathCycleComponent> components(const Graph& g);
std::vector<PathCycleComponent> components(const Graph& g, const EdgeMask& active);

}  // namespace lmatch
