#include <gtest/gtest.h>

#include "lmatch/fractional.hpp"
#include "lmatch/generators.hpp"
#include "lmatch/oracles.hpp"

using namespace lmatch;

namespace {

Dyadic count(std::uint64_t k) { return Dyadic{k, 0}; }

bool all_tight(const Graph& g, const FractionalAssignment& x) {
  for (const Edge& e : g.edges())
    if (is_loose(node_load(g, x, e.u)) && is_loose(node_load(g, x, e.v))) return false;
  return true;
}

}  // namespace

TEST(Greedy, SingleEdge) {
  const Graph g = path_graph(2);
  const auto x = greedy_fractional_matching(g);
  EXPECT_EQ(x.value.level, 0u);
  EXPECT_EQ(x.value.value(0), count(1));
  EXPECT_EQ(x.value.total(), count(1));
}

TEST(Greedy, FourCycleAllHalf) {
  const Graph g = cycle_graph(4);
  const auto x = greedy_fractional_matching(g);
  EXPECT_EQ(x.value.level, 1u);
  for (EdgeId e = 0; e < 4; ++e) EXPECT_EQ(x.value.value(e), Dyadic::pow2_neg(1));
  EXPECT_EQ(x.value.total(), count(2));
}

TEST(Greedy, StarNoRaises) {
  const Graph g = star_graph(4);
  const auto x = greedy_fractional_matching(g);
  EXPECT_EQ(x.value.level, 2u);
  for (EdgeId e = 0; e < 4; ++e) EXPECT_EQ(x.value.value(e), Dyadic::pow2_neg(2));
  EXPECT_EQ(x.value.total(), count(1));
}

TEST(Greedy, EmptyGraphTakesNoRounds) {
  const Graph g = Graph::from_edges(3, std::span<const std::pair<NodeId, NodeId>>{});
  const auto x = greedy_fractional_matching(g);
  EXPECT_EQ(x.value.total(), count(0));
  EXPECT_EQ(x.trace.rounds_used, 0u);
}

TEST(Greedy, FeasibleTightAndQuarterOfOptimum) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Graph g = erdos_renyi_graph(30, 0.05 + 0.01 * static_cast<double>(seed % 10), seed);
    const auto x = greedy_fractional_matching(g);
    EXPECT_TRUE(is_feasible_fractional(g, x.value).ok) << seed;
    EXPECT_TRUE(all_tight(g, x.value)) << seed;
    const std::uint64_t opt = max_matching_exact(g).value;
    EXPECT_TRUE(x.value.total().at_least_times(Rational(1, 4), count(opt))) << seed;
    EXPECT_LE(x.trace.rounds_used, 2 * (ceil_log2(std::max<std::size_t>(g.max_degree(), 1)) + 2)) << seed;
  }
}

TEST(Greedy, LevelFollowsMaxDegree) {
  const Graph g = random_regular_graph(20, 100, 4);
  const auto x = greedy_fractional_matching(g);
  EXPECT_EQ(x.value.level, 5u);
  EXPECT_LE(x.value.max_exponent(), 5u);
}

TEST(GreedyB, SingleEdgeMatchesUnitCase) {
  const Graph g = path_graph(2);
  EXPECT_EQ(greedy_fractional_b_matching(g, {1, 1}).value, greedy_fractional_matching(g).value);
}

TEST(GreedyB, StarWithLargeCenter) {
  const Graph g = star_graph(4);
  BValues b(g.num_nodes(), 1);
  b[*g.index_of(0)] = 4;
  const auto x = greedy_fractional_b_matching(g, b);
  EXPECT_TRUE(is_feasible_fractional(g, x.value, &b).ok);
  const std::uint64_t opt = max_b_matching_exact(g, b).value;
  EXPECT_EQ(opt, 4u);
  EXPECT_TRUE(x.value.total().at_least_times(Rational(1, 4), count(opt)));
}

TEST(GreedyB, OutOfRangeRejected) {
  const Graph g = path_graph(3);
  EXPECT_THROW(greedy_fractional_b_matching(g, {1, 3, 1}), InvalidArgument);
  EXPECT_THROW(greedy_fractional_b_matching(g, {1, 0, 1}), InvalidArgument);
  EXPECT_THROW(greedy_fractional_b_matching(g, {1, 1}), InvalidArgument);
}

TEST(GreedyB, QuarterOfOptimumOnSmallGraphs) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Graph g = erdos_renyi_graph(9, 0.3, seed);
    if (g.num_edges() > 12) continue;
    BValues b(g.num_nodes());
    for (NodeIndex v = 0; v < g.num_nodes(); ++v)
      b[v] = static_cast<std::uint32_t>(std::max<std::size_t>(1, (g.degree(v) + seed) % (g.degree(v) + 1)));
    const auto x = greedy_fractional_b_matching(g, b);
    EXPECT_TRUE(is_feasible_fractional(g, x.value, &b).ok) << seed;
    const std::uint64_t opt = max_b_matching_exact(g, b).value;
    EXPECT_TRUE(x.value.total().at_least_times(Rational(1, 4), count(opt))) << seed;
  }
}
