#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lmatch/graph.hpp"

namespace lmatch {

/// Named parameters, e.g. {"n": "100", "d": "4"}. Values are parsed per kind.
using GeneratorParams = std::map<std::string, std::string>;

Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
/// Center 0 with `leaves` leaves.
Graph star_graph(std::size_t leaves);
/// Sides 0..a-1 and a..a+b-1; carries the side as its 2-coloring.
Graph complete_bipartite_graph(std::size_t a, std::size_t b);
/// rows x cols grid, node r*cols+c; carries the checkerboard 2-coloring.
Graph grid_graph(std::size_t rows, std::size_t cols);
/// Uniform-ish d-regular graph: random pairing, then double-edge swaps remove
/// loops and parallel edges.
Graph random_regular_graph(std::size_t d, std::size_t n, std::uint64_t seed);
Graph erdos_renyi_graph(std::size_t n, double p, std::uint64_t seed);
/// Each of the a*b side pairs present with probability p; carries the side coloring.
Graph random_bipartite_graph(std::size_t a, std::size_t b, double p, std::uint64_t seed);

/// Independent uniform weights in 1..max_weight, seeded separately from the structure.
Graph with_random_weights(const Graph& g, std::uint64_t max_weight, std::uint64_t seed);

/// Dispatches on kind ∈ {path, cycle, star, complete_bipartite, random_regular,
/// erdos_renyi, random_bipartite, grid}. An optional "weights" parameter W adds
/// random weights in 1..W.
Graph generate(const std::string& kind, const GeneratorParams& params, std::uint64_t seed);

}  // namespace lmatch
