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

/// Raised when a per-phase invariant (feasibility, value loss) fails.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Length threshold separating short from long components: 12·max(ceil(log2 Δ), 1).
std::size_t long_threshold(unsigned log_delta);

/// Lower bound on the value kept by one phase: 1 - 3/ell - 2^(3-i).
Rational phase_keep_factor(unsigned exponent, std::size_t ell);

/// Sequential description of one elimination phase.
struct PhasePlan {
  unsigned exponent = 0;   // value 2^-exponent is eliminated
  std::size_t ell = 0;
  EdgeMask edges;          // E_i: edges carrying 2^-exponent
  TwoDecomposition decomposition;
  std::size_t short_cycles = 0;
  std::size_t short_paths = 0;
  std::size_t long_components = 0;
};

PhasePlan plan_phase(const Graph& g, const FractionalAssignment& x, unsigned exponent, unsigned log_delta);

struct PhaseReport {
  unsigned exponent = 0;
  std::size_t ell = 0;
  Dyadic sum_before;
  Dyadic sum_after;
  std::size_t short_cycles = 0;
  std::size_t short_paths = 0;
  std::size_t long_components = 0;
  std::size_t rounds = 0;
};

struct RoundingOptions {
  std::optional<sim::Globals> globals;  // defaults to the host graph's own
  std::vector<PhaseReport>* reports = nullptr;
};

/// Eliminates the value 2^-i: each such edge is doubled or zeroed.
/// `two_coloring` holds 0/1 per node and must be proper on g; color 1 is the
/// side edges are raised towards inside long components.
Traced<FractionalAssignment> rounding_phase(const Graph& g, const FractionalAssignment& x, unsigned i,
                                            const std::vector<Color>& two_coloring, RoundingOptions opts = {});
Traced<FractionalAssignment> rounding_phase_b(const Graph& g, const FractionalAssignment& x, unsigned i,
                                              const std::vector<Color>& two_coloring, const BValues& b,
                                              RoundingOptions opts = {});

/// Runs phases i = level, ..., 5; the result has level min(level, 4).
Traced<FractionalAssignment> round_to_almost_integral(const Graph& g, const FractionalAssignment& x,
                                                      const std::vector<Color>& two_coloring,
                                                      RoundingOptions opts = {});
Traced<FractionalAssignment> round_to_almost_integral_b(const Graph& g, const FractionalAssignment& x,
                                                        const std::vector<Color>& two_coloring, const BValues& b,
                                                        RoundingOptions opts = {});

/// Maximal matching on the support of x (level <= 4, so support degree <= 16).
Traced<Matching> finalize_integral(const Graph& g, const FractionalAssignment& x, const Coloring& coloring,
                                   std::optional<sim::Globals> globals = std::nullopt);

/// Splits each node into ceil(support degree / 16) copies, 16 support edges
/// per copy in ascending EdgeId order, and takes a maximal matching of the
/// copy graph.
Traced<BMatching> finalize_integral_b(const Graph& g, const FractionalAssignment& x, const BValues& b,
                                      const Coloring& coloring, std::optional<sim::Globals> globals = std::nullopt);

/// Every node load within capacity (1, or b_v when b is given).
bool is_feasible(const Graph& g, const FractionalAssignment& x, const BValues* b = nullptr);

}  // namespace lmatch
