#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmatch/graph.hpp"
#include "lmatch/local_sim.hpp"
#include "lmatch/solution.hpp"

namespace lmatch {

struct Coloring {
  std::vector<Color> colors;  // by node index
  std::uint64_t palette_size = 1;

  bool operator==(const Coloring&) const = default;
};

/// Palette bound of linial_coloring: palette_size <= kLinialPaletteFactor * max(Δ, 1)^2.
inline constexpr std::uint64_t kLinialPaletteFactor = 8;

/// One color-reduction round: colors in [0, q) become colors in [0, p^2) by
/// evaluating the degree-d polynomial whose coefficients are the base-p digits
/// of the old color. The new color a·p + f(a) uses the first point a with no
/// clash, so it is below (d·Δ + 1)·p.
struct ReductionStep {
  std::uint64_t q;
  std::uint64_t p;
  unsigned d;
  std::uint64_t palette;
};

/// Reduction schedule starting from 64-bit identifiers, identical at every node.
std::vector<ReductionStep> linial_schedule(std::size_t max_degree);

/// Proper coloring with O(Δ²) colors in O(log* n) rounds.
Traced<Coloring> linial_coloring(const Graph& g);
Traced<Coloring> linial_coloring(const Graph& g, const EdgeMask& active);

bool is_proper(const Graph& g, const EdgeMask& active, const Coloring& c);

/// Maximal matching of the active subgraph given a proper coloring of it.
///
/// Every edge is directed towards its higher-colored endpoint; the j-th
/// outgoing edge of each node (ascending EdgeId) forms forest F_j. The forests
/// are 3-colored in parallel, then each (forest, color) class proposes to
/// parents in turn. Costs 6·degree_bound + O(log* palette) rounds.
///
/// `degree_bound` is common knowledge at the nodes; it defaults to the
/// actual maximum degree and must not be smaller.
Traced<Matching> colored_maximal_matching(const Graph& g, const Coloring& c);
Traced<Matching> colored_maximal_matching(const Graph& g, const EdgeMask& active, const Coloring& c,
                                          std::optional<std::size_t> degree_bound = std::nullopt,
                                          std::optional<sim::Globals> globals = std::nullopt);

/// Number of Cole–Vishkin iterations needed to bring a q-coloring of a forest down to 6 colors.
unsigned cole_vishkin_iterations(std::uint64_t q);

// ---------------------------------------------------------------------------
// Run orientation on paths and cycles

/// Per-node input of the run-merge program on a degree-<=2 graph.
struct RunMergeInput {
  bool participates = false;
};

/// Reorients participating components of a degree-<=2 graph so that every
/// maximal directed path has length >= min(ell, component length). Components
/// start from `tail`; non-participating edges are left alone.
///
/// Iteration j = 1..ceil(log2 ell) merges pairs of runs meeting head-to-head,
/// then pairs meeting tail-to-tail: the shorter run of a pair is reversed,
/// equal lengths reverse the run holding the smaller id. Lengths are measured
/// within a window of 2^j hops.
struct RunMergeResult {
  Orientation orientation;
  sim::RoundTrace trace;
};
RunMergeResult merge_runs(const Graph& g, const EdgeMask& participating, Orientation start, std::size_t ell,
                          std::optional<sim::Globals> globals = std::nullopt);

/// Rounds used by merge_runs for a given ell (schedule length).
std::size_t merge_runs_rounds(std::size_t ell);

/// Standalone orientation of one long component (length > ell). The
/// component is oriented from scratch starting with low id -> high id.
Traced<Orientation> orient_min_length(const Graph& g, const PathCycleComponent& comp, std::size_t ell);

/// Maximal directed paths of an oriented component, as edge counts in walk order.
std::vector<std::size_t> run_lengths(const Graph& g, const PathCycleComponent& comp, const Orientation& o);

}  // namespace lmatch
