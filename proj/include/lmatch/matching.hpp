#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmatch/fractional.hpp"
#include "lmatch/graph.hpp"
#include "lmatch/local_sim.hpp"
#include "lmatch/rational.hpp"
#include "lmatch/solution.hpp"
#include "lmatch/subroutines.hpp"

namespace lmatch {

inline constexpr std::uint64_t kBipartiteApprox = 434;
inline constexpr std::uint64_t kGeneralApprox = 3 * kBipartiteApprox;
inline constexpr std::uint64_t kWeightedApprox = 256;

/// Iteration counts, as ceilings of the real-valued expressions.
std::size_t approx_iterations(const Rational& eps);        // log_{1-1/1302}(eps / (2(2+eps)))
std::size_t maximal_iterations(std::size_t n);             // log_{1-1/1302}(1/n)
std::size_t eps_maximal_iterations(const Rational& eps);   // log_{511/512}(eps)
std::size_t augmentation_iterations(const Rational& eps);  // 384 ln((2+eps)/eps)

/// 434-approximate matching of a graph with a proper 0/1 coloring.
/// The one-argument form uses the coloring stored on the graph.
Traced<Matching> const_approx_bipartite(const Graph& g, const std::vector<Color>& two_coloring);
Traced<Matching> const_approx_bipartite(const Graph& g);

/// 1302-approximate matching via the in/out split.
Traced<Matching> const_approx_general(const Graph& g);

/// (2+eps)-approximate maximum matching by repeated constant approximation.
Traced<Matching> approx_matching(const Graph& g, const Rational& eps);

Traced<Matching> maximal_matching(const Graph& g);

/// 256-approximate maximum weight matching. Weights are split into classes
/// floor(log8 w) that run side by side; conflicts keep the higher class.
Traced<Matching> const_approx_weighted(const Graph& g);

/// Matching whose edges and neighbouring edges cover at least |E|/512 edges.
Traced<Matching> const_almost_maximal(const Graph& g);

/// At most eps·|E| edges are left uncovered; 0 < eps < 1.
Traced<Matching> eps_maximal_matching(const Graph& g, const Rational& eps);

Traced<BMatching> approx_b_matching(const Graph& g, const BValues& b, const Rational& eps);

/// (2+eps)-approximate maximum weight matching by gain augmentation.
Traced<Matching> approx_weighted_matching(const Graph& g, const Rational& eps);

/// D = M ∪ (E \ Γ⁺(M)) for an eps/(4Δ)-maximal matching M.
Traced<EdgeDominatingSet> approx_edge_dominating_set(const Graph& g, const Rational& eps);

/// Edges of g not in M and not sharing an endpoint with M.
EdgeMask uncovered_edges(const Graph& g, const EdgeSet& m);

}  // namespace lmatch
