#pragma once

#include <cstdint>
#include <vector>

#include "lmatch/graph.hpp"
#include "lmatch/local_sim.hpp"

namespace lmatch {

/// Edge subset of a host graph, sorted by EdgeId.
struct EdgeSet {
  std::vector<EdgeId> edges;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
  EdgeMask mask(std::size_t num_edges) const { return EdgeMask::from_edges(num_edges, edges); }
  bool operator==(const EdgeSet&) const = default;
};

struct Matching : EdgeSet {};
struct BMatching : EdgeSet {};
struct EdgeDominatingSet : EdgeSet {};

/// Result of a simulated distributed computation together with its cost.
template <class T>
struct Traced {
  T value;
  sim::RoundTrace trace;
};

/// Sorted, duplicate-free edge list from a mask.
template <class S>
S edge_set_of(const EdgeMask& mask) {
  S s;
  s.edges = mask.to_vector();
  return s;
}

/// Sum of weights of the chosen edges.
std::uint64_t total_weight(const Graph& g, const EdgeSet& s);

}  // namespace lmatch
