#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lmatch/generators.hpp"
#include "lmatch/graph.hpp"
#include "lmatch/graph_io.hpp"

using namespace lmatch;

namespace {

Graph from(std::size_t n, std::vector<std::pair<NodeId, NodeId>> e) { return Graph::from_edges(n, e); }

}  // namespace

TEST(Graph, RejectsSelfLoopsAndParallelEdges) {
  EXPECT_THROW(from(2, {{0, 0}}), InvalidArgument);
  EXPECT_THROW(from(2, {{0, 1}, {1, 0}}), InvalidArgument);
  EXPECT_THROW(from(2, {{0, 2}}), InvalidArgument);
}

TEST(Graph, CanonicalRegardlessOfInsertionOrder) {
  Graph a = Graph::from_edges(std::vector<NodeId>{5, 9, 2}, std::vector<std::pair<NodeId, NodeId>>{{9, 2}, {5, 2}});
  Graph b = Graph::from_edges(std::vector<NodeId>{2, 9, 5}, std::vector<std::pair<NodeId, NodeId>>{{2, 5}, {2, 9}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.id(0), 2u);
}

TEST(Graph, BValuesMustNotExceedDegree) {
  Graph g = path_graph(3);
  EXPECT_NO_THROW(g.with_b_values({1, 2, 1}));
  EXPECT_THROW(g.with_b_values({2, 2, 1}), InvalidArgument);
  EXPECT_THROW(g.with_b_values({0, 1, 1}), InvalidArgument);
}

TEST(Graph, ColoringMustBeProper) {
  Graph g = path_graph(3);
  EXPECT_NO_THROW(g.with_coloring({0, 1, 0}));
  EXPECT_THROW(g.with_coloring({0, 0, 1}), InvalidArgument);
}

TEST(TwoDecompose, SingleEdge) {
  auto d = two_decompose(path_graph(2));
  EXPECT_EQ(d.decomposed.num_nodes(), 2u);
  EXPECT_EQ(d.decomposed.num_edges(), 1u);
  auto comps = components(d.decomposed);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_FALSE(comps[0].is_cycle());
  EXPECT_EQ(comps[0].length(), 1u);
}

TEST(TwoDecompose, StarK13) {
  auto d = two_decompose(star_graph(3));
  std::size_t center_copies = 0;
  for (NodeIndex c = 0; c < d.decomposed.num_nodes(); ++c) center_copies += d.copy_of[c] == 0;
  EXPECT_EQ(center_copies, 2u);
  auto comps = components(d.decomposed);
  ASSERT_EQ(comps.size(), 2u);
  std::vector<std::size_t> lens{comps[0].length(), comps[1].length()};
  std::sort(lens.begin(), lens.end());
  EXPECT_EQ(lens, (std::vector<std::size_t>{1, 2}));
}

TEST(TwoDecompose, EvenCycleUnchanged) {
  auto d = two_decompose(cycle_graph(6));
  EXPECT_EQ(d.decomposed.num_nodes(), 6u);
  auto comps = components(d.decomposed);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_TRUE(comps[0].is_cycle());
  EXPECT_EQ(comps[0].length(), 6u);
}

TEST(TwoDecompose, InvariantsOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = erdos_renyi_graph(40, 0.15, seed);
    auto d = two_decompose(g);
    EXPECT_LE(d.decomposed.max_degree(), 2u);
    std::vector<std::size_t> copies(g.num_nodes(), 0), deg1(g.num_nodes(), 0);
    for (NodeIndex c = 0; c < d.decomposed.num_nodes(); ++c) {
      ++copies[d.copy_of[c]];
      EXPECT_GE(d.decomposed.degree(c), 1u);
      deg1[d.copy_of[c]] += d.decomposed.degree(c) == 1;
    }
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
      EXPECT_EQ(copies[v], (g.degree(v) + 1) / 2);
      EXPECT_LE(deg1[v], 1u);
    }
    std::size_t total = 0;
    for (const auto& c : components(d.decomposed)) total += c.length();
    EXPECT_EQ(total, g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const EdgeId de = d.to_decomposed[e];
      EXPECT_EQ(d.to_original[de], e);
      const Edge& x = d.decomposed.edge(de);
      const Edge& y = g.edge(e);
      EXPECT_TRUE((d.copy_of[x.u] == y.u && d.copy_of[x.v] == y.v) || (d.copy_of[x.u] == y.v && d.copy_of[x.v] == y.u));
    }
  }
}

TEST(BipartiteCover, SingleEdge) {
  auto c = bipartite_cover(path_graph(2));
  EXPECT_EQ(c.cover.num_nodes(), 4u);
  EXPECT_EQ(c.cover.num_edges(), 1u);
  const Edge& e = c.cover.edge(0);
  EXPECT_NE(c.side[e.u], c.side[e.v]);
}

TEST(BipartiteCover, CyclicTriangleIsPerfectMatchingOnUsedCopies) {
  Graph g = cycle_graph(3);
  std::vector<std::pair<NodeId, NodeId>> dirs{{0, 1}, {1, 2}, {2, 0}};
  auto c = bipartite_cover(g, Orientation::from_pairs(g, dirs));
  EXPECT_EQ(c.cover.num_nodes(), 6u);
  EXPECT_EQ(c.cover.num_edges(), 3u);
  EXPECT_EQ(c.cover.max_degree(), 1u);
}

TEST(BipartiteCover, RejectsNonEdgeOrientation) {
  Graph g = path_graph(3);
  std::vector<std::pair<NodeId, NodeId>> dirs{{0, 2}, {1, 2}};
  EXPECT_THROW(Orientation::from_pairs(g, dirs), InvalidArgument);
}

TEST(BipartiteCover, PreservesDegreeSums) {
  Graph g = erdos_renyi_graph(50, 0.1, 4);
  auto c = bipartite_cover(g);
  EXPECT_EQ(c.cover.num_edges(), g.num_edges());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    EXPECT_EQ(g.degree(v), c.cover.degree(c.node(v, Side::In)) + c.cover.degree(c.node(v, Side::Out)));
  for (const Edge& e : c.cover.edges()) EXPECT_NE(c.side[e.u], c.side[e.v]);
}

TEST(Components, CanonicalOrder) {
  auto cyc = components(cycle_graph(4));
  ASSERT_EQ(cyc.size(), 1u);
  EXPECT_TRUE(cyc[0].is_cycle());
  EXPECT_EQ(cyc[0].length(), 4u);
  EXPECT_EQ(cyc[0].nodes.front(), cyc[0].nodes.back());
  EXPECT_EQ(cyc[0].nodes[1], 1u);  // towards the smaller-id neighbor

  auto two = components(from(4, {{0, 1}, {2, 3}}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].length(), 1u);

  Graph p = Graph::from_edges(std::vector<NodeId>{7, 3, 9}, std::vector<std::pair<NodeId, NodeId>>{{9, 7}, {7, 3}});
  auto comps = components(p);
  ASSERT_EQ(comps.size(), 1u);
  std::vector<NodeId> ids;
  for (NodeIndex v : comps[0].nodes) ids.push_back(p.id(v));
  EXPECT_EQ(ids, (std::vector<NodeId>{3, 7, 9}));
  EXPECT_THROW(components(star_graph(3)), InvalidArgument);
}

TEST(GraphIo, RoundTrip) {
  Graph g = with_random_weights(erdos_renyi_graph(20, 0.3, 1), 50, 1);
  g = g.with_b_values(std::vector<std::uint32_t>(g.num_nodes(), 1));
  std::istringstream in(graph_to_text(g));
  EXPECT_EQ(read_graph(in), g.without_weights().with_weights(*g.weights()));
}

TEST(GraphIo, RejectsMalformedInput) {
  std::istringstream bad1("3 2\n0 1\n");
  EXPECT_THROW(read_graph(bad1), InvalidArgument);
  std::istringstream bad2("2 1\n0 5\n");
  EXPECT_THROW(read_graph(bad2), InvalidArgument);
  std::istringstream bad3("2 1 weighted\n0 1\n");
  EXPECT_THROW(read_graph(bad3), InvalidArgument);
}

TEST(Generators, Shapes) {
  EXPECT_EQ(cycle_graph(8).num_edges(), 8u);
  EXPECT_EQ(complete_bipartite_graph(8, 8).num_edges(), 64u);
  EXPECT_EQ(grid_graph(3, 4).num_edges(), 17u);
  Graph r = random_regular_graph(4, 100, 7);
  for (NodeIndex v = 0; v < r.num_nodes(); ++v) EXPECT_EQ(r.degree(v), 4u);
  EXPECT_EQ(r, random_regular_graph(4, 100, 7));
  EXPECT_THROW(random_regular_graph(3, 7, 1), InvalidArgument);
  EXPECT_THROW(generate("nonsense", {}, 0), InvalidArgument);
  EXPECT_TRUE(random_bipartite_graph(10, 10, 0.5, 3).coloring().has_value());
}

TEST(Generators, DenseRegular) {
  Graph r = random_regular_graph(256, 1024, 1);
  for (NodeIndex v = 0; v < r.num_nodes(); ++v) ASSERT_EQ(r.degree(v), 256u);
}
