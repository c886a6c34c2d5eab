#include <gtest/gtest.h>

#include "lmatch/generators.hpp"
#include "lmatch/oracles.hpp"
#include "lmatch/rounding.hpp"

using namespace lmatch;

namespace {

Dyadic count(std::uint64_t k) { return Dyadic{k, 0}; }

FractionalAssignment uniform(const Graph& g, unsigned exponent, unsigned level) {
  FractionalAssignment x = FractionalAssignment::zeros(g.num_edges(), level);
  for (auto& e : x.exponent) e = static_cast<std::int8_t>(exponent);
  return x;
}

std::vector<Color> parity_coloring(const Graph& g) {
  std::vector<Color> c(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) c[v] = static_cast<Color>(g.id(v) % 2);
  return c;
}

std::size_t count_exponent(const FractionalAssignment& x, std::int8_t exponent) {
  return static_cast<std::size_t>(std::count(x.exponent.begin(), x.exponent.end(), exponent));
}

}  // namespace

TEST(RoundingPhase, FourCycleAlternates) {
  const Graph g = cycle_graph(4);
  const auto x = uniform(g, 5, 5);
  const auto y = rounding_phase(g, x, 5, parity_coloring(g));
  EXPECT_EQ(count_exponent(y.value, 4), 2u);
  EXPECT_EQ(count_exponent(y.value, FractionalAssignment::kZero), 2u);
  EXPECT_EQ(y.value.total(), x.total());
  EXPECT_TRUE(is_feasible(g, y.value));
}

TEST(RoundingPhase, ShortPathBothEndsLoose) {
  const Graph g = path_graph(3);
  const auto x = uniform(g, 6, 6);
  const auto y = rounding_phase(g, x, 6, parity_coloring(g));
  const EdgeId first = *g.find_edge(*g.index_of(0), *g.index_of(1));
  const EdgeId second = *g.find_edge(*g.index_of(1), *g.index_of(2));
  EXPECT_EQ(y.value.exponent[first], 5);
  EXPECT_EQ(y.value.exponent[second], FractionalAssignment::kZero);
  EXPECT_EQ(y.value.total(), x.total());
}

TEST(RoundingPhase, SingleEdgeLooseIsRaised) {
  const Graph g = path_graph(2);
  const auto y = rounding_phase(g, uniform(g, 5, 5), 5, parity_coloring(g));
  EXPECT_EQ(y.value.exponent[0], 4);
}

TEST(RoundingPhase, SingleEdgeTightLastIsZeroed) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}};
  const Graph g = Graph::from_edges(3, e);
  FractionalAssignment x = FractionalAssignment::zeros(2, 5);
  const EdgeId low = *g.find_edge(0, 1);
  x.exponent[low] = 5;
  x.exponent[1 - low] = 1;
  const auto y = rounding_phase(g, x, 5, parity_coloring(g));
  EXPECT_EQ(y.value.exponent[low], FractionalAssignment::kZero);
  EXPECT_EQ(y.value.exponent[1 - low], 1);
  EXPECT_TRUE(is_feasible(g, y.value));
}

TEST(RoundingPhase, LongCycleKeepsBound) {
  const Graph g = cycle_graph(400);
  const auto x = uniform(g, 8, 8);
  std::vector<PhaseReport> reports;
  const auto y = rounding_phase(g, x, 8, parity_coloring(g), {std::nullopt, &reports});
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].long_components, 1u);
  EXPECT_EQ(count_exponent(y.value, 8), 0u);
  EXPECT_TRUE(is_feasible(g, y.value));
  EXPECT_TRUE(y.value.total().at_least_times(phase_keep_factor(8, reports[0].ell), x.total()));
}

TEST(RoundingPhase, Rejections) {
  const Graph g = cycle_graph(4);
  const auto x = uniform(g, 5, 5);
  EXPECT_THROW(rounding_phase(g, uniform(g, 4, 4), 4, parity_coloring(g)), InvalidArgument);
  EXPECT_THROW(rounding_phase(g, x, 5, {0, 0, 1, 1}), InvalidArgument);
  EXPECT_THROW(rounding_phase(g, x, 5, {0, 1}), InvalidArgument);
  const Graph tri = cycle_graph(3);
  EXPECT_THROW(rounding_phase(tri, uniform(tri, 5, 5), 5, {0, 1, 0}), InvalidArgument);
}

TEST(RoundingPhaseB, UnitCapacityOnCycleMatchesPlain) {
  const Graph g = cycle_graph(8);
  const auto x = uniform(g, 5, 5);
  const auto a = rounding_phase(g, x, 5, parity_coloring(g));
  const auto b = rounding_phase_b(g, x, 5, parity_coloring(g), BValues(8, 1));
  EXPECT_EQ(a.value, b.value);
}

TEST(RoundingPhaseB, FourCycleCapacityTwo) {
  const Graph g = cycle_graph(4);
  const auto x = uniform(g, 5, 5);
  const BValues b(4, 2);
  const auto y = rounding_phase_b(g, x, 5, parity_coloring(g), b);
  EXPECT_EQ(y.value.total(), x.total());
  EXPECT_EQ(count_exponent(y.value, 4), 2u);
}

TEST(AlmostIntegral, IdentityForSmallDegree) {
  const Graph g = cycle_graph(4);
  const auto x = greedy_fractional_matching(g).value;
  const auto y = round_to_almost_integral(g, x, parity_coloring(g));
  EXPECT_EQ(y.value, x);
  EXPECT_EQ(y.trace.rounds_used, 0u);
}

TEST(AlmostIntegral, RandomBipartiteHighDegree) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Graph g = random_bipartite_graph(40, 80, seed % 2 ? 0.55 : 0.85, seed);
    ASSERT_GE(g.max_degree(), 32u);
    const auto x = greedy_fractional_matching(g).value;
    std::vector<PhaseReport> reports;
    const auto y = round_to_almost_integral(g, x, *g.coloring(), {std::nullopt, &reports});
    EXPECT_LE(y.value.level, 4u);
    EXPECT_LE(y.value.max_exponent(), 4u);
    EXPECT_TRUE(is_feasible(g, y.value));
    EXPECT_EQ(reports.size(), x.level - 4);
    Dyadic prev = x.total();
    for (const auto& r : reports) {
      EXPECT_EQ(r.sum_before, prev);
      EXPECT_TRUE(r.sum_after.at_least_times(phase_keep_factor(r.exponent, r.ell), r.sum_before));
      prev = r.sum_after;
    }
    const std::uint64_t opt = max_matching_exact(g).value;
    EXPECT_TRUE(y.value.total().at_least_times(Rational(1, 14), count(opt))) << seed;
    ++checked;
  }
  EXPECT_EQ(checked, 8);
}

TEST(AlmostIntegralB, FeasibleEveryPhase) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Graph g = random_bipartite_graph(30, 60, 0.8, seed);
    BValues b(g.num_nodes());
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) b[v] = static_cast<std::uint32_t>(1 + (g.id(v) + seed) % 3);
    const auto x = greedy_fractional_b_matching(g, b).value;
    const auto y = round_to_almost_integral_b(g, x, *g.coloring(), b);
    EXPECT_TRUE(is_feasible(g, y.value, &b)) << seed;
    EXPECT_LE(y.value.max_exponent(), 4u);
  }
}

TEST(Finalize, SingleSupportEdge) {
  const Graph g = path_graph(4);
  FractionalAssignment x = FractionalAssignment::zeros(g.num_edges(), 4);
  x.exponent[1] = 4;
  const auto m = finalize_integral(g, x, linial_coloring(g).value);
  EXPECT_EQ(m.value.edges, std::vector<EdgeId>{1});
}

TEST(Finalize, FourCycleHalf) {
  const Graph g = cycle_graph(4);
  const auto m = finalize_integral(g, uniform(g, 1, 1), linial_coloring(g).value);
  EXPECT_EQ(m.value.size(), 2u);
  EXPECT_TRUE(is_matching(g, m.value).ok);
}

TEST(Finalize, EmptySupport) {
  const Graph g = cycle_graph(6);
  const auto m = finalize_integral(g, FractionalAssignment::zeros(6, 4), linial_coloring(g).value);
  EXPECT_TRUE(m.value.empty());
}

TEST(Finalize, LevelAboveFourRejected) {
  const Graph g = cycle_graph(4);
  EXPECT_THROW(finalize_integral(g, uniform(g, 5, 5), linial_coloring(g).value), InvalidArgument);
  EXPECT_THROW(finalize_integral_b(g, uniform(g, 5, 5), BValues(4, 1), linial_coloring(g).value),
               InvalidArgument);
}

TEST(FinalizeB, UnitCapacityMatchesPlain) {
  const Graph g = random_regular_graph(6, 40, 2);
  const auto x = uniform(g, 3, 3);
  const Coloring c = linial_coloring(g).value;
  const auto a = finalize_integral(g, x, c);
  const auto b = finalize_integral_b(g, x, BValues(g.num_nodes(), 1), c);
  EXPECT_EQ(a.value.edges, b.value.edges);
}

TEST(FinalizeB, StarWithTwoCenterCopies) {
  const Graph g = star_graph(32);
  BValues b(g.num_nodes(), 1);
  b[*g.index_of(0)] = 2;
  const auto m = finalize_integral_b(g, uniform(g, 4, 4), b, linial_coloring(g).value);
  EXPECT_EQ(m.value.size(), 2u);
  EXPECT_TRUE(is_b_matching(g, b, m.value).ok);
}

TEST(FinalizeB, EmptySupport) {
  const Graph g = star_graph(3);
  const auto m = finalize_integral_b(g, FractionalAssignment::zeros(3, 4), BValues(4, 1), linial_coloring(g).value);
  EXPECT_TRUE(m.value.empty());
}
