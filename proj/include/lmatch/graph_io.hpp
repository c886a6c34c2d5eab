#pragma once

#include <iosfwd>
#include <string>

#include "lmatch/fractional.hpp"
#include "lmatch/graph.hpp"

namespace lmatch {

/// Text edge list:
///
///   n m [weighted] [bvalues]
///   u v [w]        (m lines)
///   v b_v          (n lines, only with bvalues)
///
/// Nodes are 0..n-1. Blank lines and lines starting with '#' are skipped.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);

/// Writes the format above; edges in EdgeId order.
void write_graph(std::ostream& out, const Graph& g);
std::string graph_to_text(const Graph& g);

/// b-values from `uniform:K` (clamped to max(degree, 1) per node) or from a
/// file of `v b_v` lines.
BValues parse_b_argument(const Graph& g, const std::string& arg);

}  // namespace lmatch
