#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmatch/graph.hpp"
#include "lmatch/local_sim.hpp"
#include "lmatch/rational.hpp"
#include "lmatch/solution.hpp"

namespace lmatch {

/// Edge values in {0} ∪ {2^-j : 0 <= j <= level}, stored as exponents.
struct FractionalAssignment {
  static constexpr std::int8_t kZero = -1;

  std::vector<std::int8_t> exponent;  // by EdgeId; kZero means x_e = 0
  unsigned level = 0;

  static FractionalAssignment zeros(std::size_t num_edges, unsigned level) {
    return {std::vector<std::int8_t>(num_edges, kZero), level};
  }

  bool nonzero(EdgeId e) const { return exponent[e] != kZero; }
  Dyadic value(EdgeId e) const;
  Dyadic total() const;
  /// Largest exponent in use (0 if all zero).
  unsigned max_exponent() const;

  bool operator==(const FractionalAssignment&) const = default;
};

/// c_v = sum of x_e over edges at v.
Dyadic node_load(const Graph& g, const FractionalAssignment& x, NodeIndex v);

/// Loose: c_v <= 1/2 for matchings; c_v < b_v/2 for b-matchings.
bool is_loose(const Dyadic& load);
bool is_loose_b(const Dyadic& load, std::uint32_t b);

/// b-value source for the b-variants: explicit per-node values, or the graph's own.
using BValues = std::vector<std::uint32_t>;

/// Starts every active edge at 2^-ceil(log Δ) and doubles loose edges until
/// every edge has a tight endpoint. Δ is taken from `globals` when given.
Traced<FractionalAssignment> greedy_fractional_matching(const Graph& g);
Traced<FractionalAssignment> greedy_fractional_matching(const Graph& g, const EdgeMask& active,
                                                        std::optional<sim::Globals> globals = std::nullopt);

/// As above for b-matchings: only edges with x_e <= 1/2 are doubled and
/// loose means c_v < b_v/2.
Traced<FractionalAssignment> greedy_fractional_b_matching(const Graph& g, const BValues& b);
Traced<FractionalAssignment> greedy_fractional_b_matching(const Graph& g, const EdgeMask& active, const BValues& b,
                                                          std::optional<sim::Globals> globals = std::nullopt);

/// Checks b-values against the graph: one per node, 1 <= b_v <= max(degree, 1).
void validate_b_values(const Graph& g, const BValues& b);

}  // namespace lmatch
