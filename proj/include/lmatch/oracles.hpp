#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lmatch/fractional.hpp"
#include "lmatch/graph.hpp"
#include "lmatch/rational.hpp"
#include "lmatch/solution.hpp"

namespace lmatch {

/// Size limits per oracle class. Exhaustive oracles refuse larger instances.
struct OracleBudget {
  std::size_t exhaustive_max_edges = 24;
  std::size_t eds_max_edges = 20;
  std::size_t blossom_max_nodes = 100'000;
  std::size_t weighted_max_nodes = 40;
  std::uint64_t search_node_limit = 200'000'000;  // branch-and-bound visits
};

class OracleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct Optimum {
  std::uint64_t value = 0;
  EdgeSet witness;
};

/// Maximum cardinality matching (Edmonds' blossom algorithm from Boost.Graph).
Optimum max_matching_exact(const Graph& g, const OracleBudget& budget = {});
/// Same quantity by enumerating all edge subsets; |E| <= exhaustive_max_edges.
Optimum max_matching_exhaustive(const Graph& g, const OracleBudget& budget = {});

/// Maximum weight matching by branch and bound; n <= weighted_max_nodes.
Optimum max_weighted_matching_exact(const Graph& g, const OracleBudget& budget = {});
/// Boost.Graph weighted blossom, used as a second opinion.
Optimum max_weighted_matching_boost(const Graph& g);
/// Exhaustive enumeration; |E| <= exhaustive_max_edges.
Optimum max_weighted_matching_exhaustive(const Graph& g, const OracleBudget& budget = {});

/// Maximum b-matching by enumeration; |E| <= exhaustive_max_edges.
Optimum max_b_matching_exact(const Graph& g, const BValues& b, const OracleBudget& budget = {});

/// Minimum edge dominating set by enumeration; |E| <= eds_max_edges.
Optimum min_eds_exact(const Graph& g, const OracleBudget& budget = {});

/// Result of a validity check. On failure, `node` or `edges` point at the violation.
struct Check {
  bool ok = true;
  std::string reason;
  std::optional<NodeIndex> node;
  std::vector<EdgeId> edges;

  explicit operator bool() const { return ok; }
};

Check is_matching(const Graph& g, const EdgeSet& m);
Check is_b_matching(const Graph& g, const BValues& b, const EdgeSet& m);
/// A matching to which no edge of g can be added.
Check is_maximal(const Graph& g, const EdgeSet& m);
/// Every edge of g shares an endpoint with some chosen edge.
Check dominates(const Graph& g, const EdgeSet& d);
/// Fraction of edges of g sharing no endpoint with m (1 on a graph without edges is reported as 0).
Rational uncovered_edge_fraction(const Graph& g, const EdgeSet& m);
/// Node loads within capacity: 1, or b_v when b is given.
Check is_feasible_fractional(const Graph& g, const FractionalAssignment& x, const BValues* b = nullptr);

}  // namespace lmatch
