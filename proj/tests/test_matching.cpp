#include <gtest/gtest.h>

#include "lmatch/generators.hpp"
#include "lmatch/matching.hpp"
#include "lmatch/oracles.hpp"

using namespace lmatch;

namespace {

using Edges = std::vector<std::pair<NodeId, NodeId>>;

Graph subgraph(const Graph& g, const EdgeMask& keep) {
  Edges e;
  for (EdgeId id = 0; id < g.num_edges(); ++id)
    if (keep.test(id)) e.emplace_back(g.id(g.edge(id).u), g.id(g.edge(id).v));
  return Graph::from_edges(std::vector<NodeId>(g.ids().begin(), g.ids().end()), e);
}

NodeIndex idx(const Graph& g, NodeId id) { return g.require_index(id); }

}  // namespace

TEST(ConstApproxBipartite, Examples) {
  EXPECT_EQ(const_approx_bipartite(path_graph(2), {0, 1}).value.size(), 1u);
  const Graph k = complete_bipartite_graph(8, 8);
  const auto m = const_approx_bipartite(k);
  EXPECT_TRUE(is_matching(k, m.value).ok);
  EXPECT_GE(m.value.size(), 1u);
  EXPECT_TRUE(scaled_at_least(Rational(434), m.value.size(), Rational(1), 8));
  const Graph empty = Graph::from_edges(4, Edges{});
  EXPECT_TRUE(const_approx_bipartite(empty, {0, 1, 0, 1}).value.empty());
}

TEST(ConstApproxBipartite, InvalidColoringRejected) {
  EXPECT_THROW(const_approx_bipartite(path_graph(3), {0, 0, 1}), InvalidArgument);
  EXPECT_THROW(const_approx_bipartite(path_graph(3), {0, 1}), InvalidArgument);
  EXPECT_THROW(const_approx_bipartite(path_graph(3)), InvalidArgument);
}

TEST(ConstApproxGeneral, Examples) {
  EXPECT_EQ(const_approx_general(cycle_graph(3)).value.size(), 1u);
  const Graph c = cycle_graph(100);
  const auto m = const_approx_general(c);
  EXPECT_TRUE(is_matching(c, m.value).ok);
  EXPECT_GE(m.value.size(), 1u);
  EXPECT_TRUE(const_approx_general(Graph::from_edges(1, Edges{})).value.empty());
}

TEST(ApproxMatching, SmallPathSaturates) {
  const Graph p = path_graph(5);
  EXPECT_EQ(approx_matching(p, Rational(1, 10)).value.size(), 2u);
}

TEST(ApproxMatching, EpsMustBePositive) {
  EXPECT_THROW(approx_matching(path_graph(3), Rational(0)), InvalidArgument);
}

TEST(ApproxMatching, RandomGraphsWithinBound) {
  const Rational eps(1, 10);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Graph g = erdos_renyi_graph(20 + seed, 0.1, seed);
    const auto m = approx_matching(g, eps);
    ASSERT_TRUE(is_matching(g, m.value).ok) << seed;
    const std::uint64_t opt = max_matching_exact(g).value;
    EXPECT_TRUE(scaled_at_least(Rational(2) + eps, m.value.size(), Rational(1), opt)) << seed;
    const Graph rest = subgraph(g, uncovered_edges(g, m.value));
    EXPECT_TRUE(scaled_at_least(eps, opt, Rational(1), max_matching_exact(rest).value)) << seed;
  }
}

TEST(MaximalMatching, Examples) {
  EXPECT_EQ(maximal_matching(cycle_graph(5)).value.size(), 2u);
  EXPECT_EQ(maximal_matching(star_graph(7)).value.size(), 1u);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = erdos_renyi_graph(50, 0.1, seed);
    EXPECT_TRUE(is_maximal(g, maximal_matching(g).value).ok) << seed;
  }
}

TEST(ConstApproxWeighted, HeavierClassWins) {
  const Graph g = Graph::from_edges(3, Edges{{0, 1}, {1, 2}}, std::vector<Weight>{1, 8});
  const auto m = const_approx_weighted(g);
  ASSERT_EQ(m.value.size(), 1u);
  EXPECT_EQ(g.weight(m.value.edges[0]), 8u);
}

TEST(ConstApproxWeighted, UniformWeightsLikeUnweighted) {
  const Graph g = random_regular_graph(3, 30, 5);
  std::vector<Weight> w(g.num_edges(), 5);
  const Graph gw = g.with_weights(w);
  EXPECT_EQ(const_approx_weighted(gw).value, approx_matching(g, Rational(1)).value);
}

TEST(ConstApproxWeighted, ZeroWeightRejected) {
  const Graph g = Graph::from_edges(2, Edges{{0, 1}}, std::vector<Weight>{0});
  EXPECT_THROW(const_approx_weighted(g), InvalidArgument);
}

TEST(ConstApproxWeighted, RandomWithinBound) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Graph g = with_random_weights(erdos_renyi_graph(30, 0.12, seed), 64, seed);
    const auto m = const_approx_weighted(g);
    ASSERT_TRUE(is_matching(g, m.value).ok);
    const std::uint64_t opt = max_weighted_matching_exact(g).value;
    EXPECT_TRUE(scaled_at_least(Rational(256), total_weight(g, m.value), Rational(1), opt)) << seed;
  }
}

TEST(AlmostMaximal, Examples) {
  const Graph e = path_graph(2);
  EXPECT_EQ(uncovered_edges(e, const_almost_maximal(e).value).count(), 0u);
  const Graph s = star_graph(9);
  EXPECT_EQ(uncovered_edges(s, const_almost_maximal(s).value).count(), 0u);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = erdos_renyi_graph(60, 0.1, seed);
    const auto m = const_almost_maximal(g);
    ASSERT_TRUE(is_matching(g, m.value).ok);
    EXPECT_TRUE(scaled_at_least(Rational(512), g.num_edges() - uncovered_edges(g, m.value).count(), Rational(1),
                                g.num_edges()))
        << seed;
  }
}

TEST(EpsMaximal, Examples) {
  const Graph s = star_graph(9);
  const auto m = eps_maximal_matching(s, Rational(1, 2));
  EXPECT_EQ(m.value.size(), 1u);
  EXPECT_EQ(uncovered_edge_fraction(s, m.value), Rational(0));
  const Graph g = erdos_renyi_graph(40, 0.15, 3);
  for (Rational eps : {Rational(1, 2), Rational(1, 10)})
    EXPECT_LE(uncovered_edge_fraction(g, eps_maximal_matching(g, eps).value), eps);
  const auto full = eps_maximal_matching(g, Rational(1, 40 * 40));
  EXPECT_TRUE(is_maximal(g, full.value).ok);
}

TEST(EpsMaximal, RangeRejected) {
  EXPECT_THROW(eps_maximal_matching(path_graph(3), Rational(0)), InvalidArgument);
  EXPECT_THROW(eps_maximal_matching(path_graph(3), Rational(1)), InvalidArgument);
}

TEST(BMatching, Examples) {
  const Graph c = cycle_graph(4);
  const BValues two(4, 2);
  const auto m = approx_b_matching(c, two, Rational(1, 2));
  EXPECT_TRUE(is_b_matching(c, two, m.value).ok);
  EXPECT_TRUE(scaled_at_least(Rational(5, 2), m.value.size(), Rational(1), 4));

  const Graph s = star_graph(6);
  BValues b(7, 1);
  b[idx(s, 0)] = 3;
  const auto ms = approx_b_matching(s, b, Rational(1, 2));
  EXPECT_TRUE(is_b_matching(s, b, ms.value).ok);
  EXPECT_TRUE(scaled_at_least(Rational(5, 2), ms.value.size(), Rational(1), 3));
}

TEST(BMatching, UnitCapacities) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = erdos_renyi_graph(12, 0.25, seed);
    const auto m = approx_b_matching(g, BValues(g.num_nodes(), 1), Rational(1));
    ASSERT_TRUE(is_matching(g, m.value).ok);
    EXPECT_TRUE(scaled_at_least(Rational(3), m.value.size(), Rational(1), max_matching_exact(g).value));
  }
}

TEST(BMatching, InvalidRejected) {
  EXPECT_THROW(approx_b_matching(path_graph(3), {1, 3, 1}, Rational(1)), InvalidArgument);
}

TEST(WeightedAugmentation, Examples) {
  const Graph e = Graph::from_edges(2, Edges{{0, 1}}, std::vector<Weight>{4});
  EXPECT_EQ(approx_weighted_matching(e, Rational(1, 2)).value.size(), 1u);
  const Graph p = Graph::from_edges(4, Edges{{0, 1}, {1, 2}, {2, 3}}, std::vector<Weight>{1, 3, 1});
  const auto m = approx_weighted_matching(p, Rational(1, 2));
  EXPECT_EQ(total_weight(p, m.value), 3u);
}

TEST(WeightedAugmentation, RandomWithinBound) {
  const Rational eps(1, 2);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Graph g = with_random_weights(erdos_renyi_graph(25, 0.15, seed), 64, seed);
    const auto m = approx_weighted_matching(g, eps);
    ASSERT_TRUE(is_matching(g, m.value).ok);
    const std::uint64_t opt = max_weighted_matching_exact(g).value;
    EXPECT_TRUE(scaled_at_least(Rational(2) + eps, total_weight(g, m.value), Rational(1), opt)) << seed;
  }
}

TEST(EdgeDominating, Examples) {
  const Graph e = path_graph(2);
  EXPECT_EQ(approx_edge_dominating_set(e, Rational(1)).value.size(), 1u);
  const Graph s = star_graph(5);
  EXPECT_EQ(approx_edge_dominating_set(s, Rational(1)).value.size(), 1u);
  EXPECT_THROW(approx_edge_dominating_set(s, Rational(0)), InvalidArgument);
}

TEST(EdgeDominating, RandomWithinBound) {
  const Rational eps(1, 2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = erdos_renyi_graph(14, 0.15, seed);
    if (g.num_edges() > 20) continue;
    const auto d = approx_edge_dominating_set(g, eps);
    EXPECT_TRUE(dominates(g, d.value).ok) << seed;
    EXPECT_TRUE(scaled_at_least(Rational(2) + eps, min_eds_exact(g).value, Rational(1), d.value.size())) << seed;
  }
}

TEST(Suite, Deterministic) {
  const Graph g = erdos_renyi_graph(80, 0.08, 9);
  const auto a = approx_matching(g, Rational(1, 2));
  const auto b = approx_matching(g, Rational(1, 2));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.trace.rounds_used, b.trace.rounds_used);
  EXPECT_EQ(a.trace.messages_sent, b.trace.messages_sent);
  EXPECT_EQ(a.trace.max_message_bits, b.trace.max_message_bits);
}
