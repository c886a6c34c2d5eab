#include "lmatch/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <string>
#include <tuple>

namespace lmatch {

EdgeMask EdgeMask::from_edges(std::size_t num_edges, std::span<const EdgeId> edges) {
  EdgeMask mask(num_edges);
  for (EdgeId e : edges) {
    if (e >= num_edges) throw InvalidArgument("edge id out of range: " + std::to_string(e));
    mask.set(e);
  }
  return mask;
}

std::size_t EdgeMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<EdgeId> EdgeMask::to_vector() const {
  std::vector<EdgeId> out;
  for (std::size_t e = 0; e < bits_.size(); ++e)
    if (bits_[e]) out.push_back(static_cast<EdgeId>(e));
  return out;
}

unsigned ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(x - 1));
}

Graph Graph::from_edges(std::vector<NodeId> nodes,
                        std::span<const std::pair<NodeId, NodeId>> edges,
                        std::optional<std::vector<Weight>> weights,
                        std::vector<EdgeId>* input_to_edge) {
  Graph g;
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
    throw InvalidArgument("duplicate node id");
  g.ids_ = std::move(nodes);
  if (weights && weights->size() != edges.size())
    throw InvalidArgument("weights must be aligned with edges");

  struct Keyed {
    NodeIndex u, v;
    std::size_t input_pos;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [a, b] = edges[i];
    if (a == b) throw InvalidArgument("self-loop at node " + std::to_string(a));
    NodeIndex ia = g.require_index(a);
    NodeIndex ib = g.require_index(b);
    if (ia > ib) std::swap(ia, ib);
    keyed.push_back({ia, ib, i});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  for (std::size_t i = 1; i < keyed.size(); ++i) {
    if (keyed[i].u == keyed[i - 1].u && keyed[i].v == keyed[i - 1].v)
      throw InvalidArgument("parallel edge {" + std::to_string(g.ids_[keyed[i].u]) + "," +
                            std::to_string(g.ids_[keyed[i].v]) + "}");
  }
  g.edges_.reserve(keyed.size());
  for (const auto& k : keyed) g.edges_.push_back({k.u, k.v});
  if (weights) {
    std::vector<Weight> w(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) w[i] = (*weights)[keyed[i].input_pos];
    g.weights_ = std::move(w);
  }
  if (input_to_edge) {
    input_to_edge->assign(keyed.size(), kNoEdge);
    for (std::size_t i = 0; i < keyed.size(); ++i)
      (*input_to_edge)[keyed[i].input_pos] = static_cast<EdgeId>(i);
  }
  g.build_adjacency();
  return g;
}

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                        std::optional<std::vector<Weight>> weights,
                        std::vector<EdgeId>* input_to_edge) {
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  return from_edges(std::move(nodes), edges, std::move(weights), input_to_edge);
}

void Graph::build_adjacency() {
  const std::size_t n = ids_.size();
  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.assign(offsets_[n], Incidence{kNoEdge, kNoNode});
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are visited in EdgeId order, so each adjacency list ends up sorted.
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    adjacency_[fill[edges_[e].u]++] = {e, edges_[e].v};
    adjacency_[fill[edges_[e].v]++] = {e, edges_[e].u};
  }
  max_degree_ = n == 0 ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::optional<NodeIndex> Graph::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - ids_.begin());
}

NodeIndex Graph::require_index(NodeId id) const {
  auto idx = index_of(id);
  if (!idx) throw InvalidArgument("unknown node id " + std::to_string(id));
  return *idx;
}

std::optional<EdgeId> Graph::find_edge(NodeIndex a, NodeIndex b) const {
  if (degree(a) > degree(b)) std::swap(a, b);
  for (const Incidence& inc : incident(a))
    if (inc.neighbor == b) return inc.edge;
  return std::nullopt;
}

Graph Graph::with_weights(std::vector<Weight> weights_by_edge_id) const {
  if (weights_by_edge_id.size() != num_edges())
    throw InvalidArgument("weights must have one entry per edge");
  Graph g = *this;
  g.weights_ = std::move(weights_by_edge_id);
  return g;
}

Graph Graph::without_weights() const {
  Graph g = *this;
  g.weights_.reset();
  return g;
}

Graph Graph::with_b_values(std::vector<std::uint32_t> b_by_index) const {
  if (b_by_index.size() != num_nodes())
    throw InvalidArgument("b-values must have one entry per node");
  for (NodeIndex v = 0; v < num_nodes(); ++v) {
    if (b_by_index[v] < 1 || b_by_index[v] > std::max<std::size_t>(degree(v), 1))
      throw InvalidArgument("b-value of node " + std::to_string(id(v)) +
                            " must satisfy 1 <= b <= degree");
  }
  Graph g = *this;
  g.b_values_ = std::move(b_by_index);
  return g;
}

Graph Graph::with_coloring(std::vector<Color> colors_by_index) const {
  if (colors_by_index.size() != num_nodes())
    throw InvalidArgument("coloring must have one entry per node");
  for (const Edge& e : edges_)
    if (colors_by_index[e.u] == colors_by_index[e.v])
      throw InvalidArgument("coloring is not proper on edge {" + std::to_string(id(e.u)) + "," +
                            std::to_string(id(e.v)) + "}");
  Graph g = *this;
  g.coloring_ = std::move(colors_by_index);
  return g;
}

std::size_t active_degree(const Graph& g, const EdgeMask& active, NodeIndex v) {
  std::size_t d = 0;
  for (const Incidence& inc : g.incident(v)) d += active.test(inc.edge) ? 1 : 0;
  return d;
}

std::size_t active_max_degree(const Graph& g, const EdgeMask& active) {
  std::vector<std::size_t> deg(g.num_nodes(), 0);
  std::size_t best = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!active.test(e)) continue;
    best = std::max({best, ++deg[g.edge(e).u], ++deg[g.edge(e).v]});
  }
  return best;
}

// ---------------------------------------------------------------------------

TwoDecomposition two_decompose(const Graph& g) {
  return two_decompose(g, EdgeMask(g.num_edges(), true));
}

TwoDecomposition two_decompose(const Graph& g, const EdgeMask& active) {
  TwoDecomposition out;
  // Endpoint copy for each (edge, side): side 0 is edge.u, side 1 is edge.v.
  std::vector<std::array<NodeIndex, 2>> slot(g.num_edges(), {kNoNode, kNoNode});
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    std::uint32_t k = 0;
    std::size_t in_copy = 0;
    for (const Incidence& inc : g.incident(v)) {
      if (!active.test(inc.edge)) continue;
      if (in_copy == 0) {
        out.copy_of.push_back(v);
        out.copy_rank.push_back(k++);
      }
      const auto copy = static_cast<NodeIndex>(out.copy_of.size() - 1);
      slot[inc.edge][g.edge(inc.edge).u == v ? 0 : 1] = copy;
      in_copy = (in_copy + 1) % 2;
    }
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<EdgeId> order;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!active.test(e)) continue;
    edges.emplace_back(slot[e][0], slot[e][1]);
    order.push_back(e);
  }
  std::vector<EdgeId> placed;
  out.decomposed = Graph::from_edges(out.copy_of.size(), edges, std::nullopt, &placed);
  out.to_decomposed.assign(g.num_edges(), kNoEdge);
  out.to_original.assign(out.decomposed.num_edges(), kNoEdge);
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.to_decomposed[order[i]] = placed[i];
    out.to_original[placed[i]] = order[i];
  }
  return out;
}

Orientation Orientation::by_id(const Graph& g) {
  Orientation o;
  o.tail.reserve(g.num_edges());
  for (const Edge& e : g.edges()) o.tail.push_back(e.u);
  return o;
}

Orientation Orientation::from_pairs(const Graph& g, std::span<const std::pair<NodeId, NodeId>> dirs) {
  if (dirs.size() != g.num_edges())
    throw InvalidArgument("orientation must direct every edge exactly once");
  Orientation o;
  o.tail.assign(g.num_edges(), kNoNode);
  for (const auto& [from, to] : dirs) {
    const auto a = g.index_of(from), b = g.index_of(to);
    const auto e = (a && b) ? g.find_edge(*a, *b) : std::nullopt;
    if (!e)
      throw InvalidArgument("orientation (" + std::to_string(from) + "," + std::to_string(to) + ") is not an edge");
    if (o.tail[*e] != kNoNode) throw InvalidArgument("orientation directs edge " + std::to_string(*e) + " twice");
    o.tail[*e] = *a;
  }
  return o;
}

BipartiteCover bipartite_cover(const Graph& g) { return bipartite_cover(g, Orientation::by_id(g)); }

BipartiteCover bipartite_cover(const Graph& g, const Orientation& orient) {
  return bipartite_cover(g, orient, EdgeMask(g.num_edges(), true));
}

BipartiteCover bipartite_cover(const Graph& g, const Orientation& orient, const EdgeMask& active) {
  if (orient.tail.size() != g.num_edges())
    throw InvalidArgument("orientation size does not match the graph");
  BipartiteCover out;
  const std::size_t n = g.num_nodes();
  out.original.resize(2 * n);
  out.side.resize(2 * n);
  for (NodeIndex v = 0; v < n; ++v) {
    for (Side s : {Side::Out, Side::In}) {
      out.original[out.node(v, s)] = v;
      out.side[out.node(v, s)] = s;
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<EdgeId> order;
  std::optional<std::vector<Weight>> weights;
  if (g.weighted()) weights.emplace();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!active.test(e)) continue;
    const NodeIndex tail = orient.tail[e];
    if (!g.edge(e).has(tail)) throw InvalidArgument("orientation tail is not an endpoint");
    const NodeIndex head = g.edge(e).other(tail);
    edges.emplace_back(out.node(tail, Side::Out), out.node(head, Side::In));
    order.push_back(e);
    if (weights) weights->push_back(g.weight(e));
  }
  std::vector<EdgeId> placed;
  out.cover = Graph::from_edges(2 * n, edges, weights, &placed);
  out.to_cover.assign(g.num_edges(), kNoEdge);
  out.to_original.assign(out.cover.num_edges(), kNoEdge);
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.to_cover[order[i]] = placed[i];
    out.to_original[placed[i]] = order[i];
  }
  return out;
}

std::vector<PathCycleComponent> components(const Graph& g) {
  return components(g, EdgeMask(g.num_edges(), true));
}

std::vector<PathCycleComponent> components(const Graph& g, const EdgeMask& active) {
  const std::size_t n = g.num_nodes();
  std::vector<std::array<Incidence, 2>> nb(n);
  std::vector<std::uint8_t> deg(n, 0);
  for (NodeIndex v = 0; v < n; ++v) {
    for (const Incidence& inc : g.incident(v)) {
      if (!active.test(inc.edge)) continue;
      if (deg[v] == 2) throw InvalidArgument("components: node " + std::to_string(g.id(v)) +
                                             " has degree greater than 2");
      nb[v][deg[v]++] = inc;
    }
  }

  std::vector<std::uint8_t> seen(n, 0);
  std::vector<PathCycleComponent> out;
  auto walk = [&](NodeIndex start, Incidence first, PathCycleComponent& comp) {
    NodeIndex cur = start;
    Incidence step = first;
    comp.nodes.push_back(cur);
    seen[cur] = 1;
    while (true) {
      comp.edges.push_back(step.edge);
      const NodeIndex nxt = step.neighbor;
      comp.nodes.push_back(nxt);
      if (nxt == start) break;  // closed a cycle
      seen[nxt] = 1;
      if (deg[nxt] < 2) break;  // reached the far endpoint
      const Incidence& a = nb[nxt][0];
      step = a.edge == step.edge ? nb[nxt][1] : a;
      cur = nxt;
    }
  };

  // Paths from endpoints; ascending index makes the smaller-id endpoint first.
  for (NodeIndex v = 0; v < n; ++v) {
    if (deg[v] != 1 || seen[v]) continue;
    PathCycleComponent comp;
    comp.kind = PathCycleComponent::Kind::Path;
    walk(v, nb[v][0], comp);
    out.push_back(std::move(comp));
  }
  for (NodeIndex v = 0; v < n; ++v) {
    if (deg[v] != 2 || seen[v]) continue;
    PathCycleComponent comp;
    comp.kind = PathCycleComponent::Kind::Cycle;
    const Incidence first = nb[v][0].neighbor < nb[v][1].neighbor ? nb[v][0] : nb[v][1];
    walk(v, first, comp);
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end(), [](const PathCycleComponent& a, const PathCycleComponent& b) {
    return a.nodes.front() < b.nodes.front();
  });
  return out;
}

}  // namespace lmatch
