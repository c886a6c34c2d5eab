#include "lmatch/fractional.hpp"

#include <string>

namespace lmatch {

Dyadic FractionalAssignment::value(EdgeId e) const {
  return exponent[e] == kZero ? Dyadic{} : Dyadic::pow2_neg(static_cast<unsigned>(exponent[e]));
}

Dyadic FractionalAssignment::total() const {
  // All values share the denominator 2^level.
  Dyadic sum{0, level};
  for (std::int8_t k : exponent)
    if (k != kZero) sum.numerator += static_cast<unsigned __int128>(1) << (level - static_cast<unsigned>(k));
  return sum;
}

unsigned FractionalAssignment::max_exponent() const {
  unsigned best = 0;
  for (std::int8_t k : exponent)
    if (k != kZero) best = std::max(best, static_cast<unsigned>(k));
  return best;
}

Dyadic node_load(const Graph& g, const FractionalAssignment& x, NodeIndex v) {
  Dyadic sum{0, x.level};
  for (const Incidence& inc : g.incident(v)) {
    const std::int8_t k = x.exponent[inc.edge];
    if (k != FractionalAssignment::kZero) sum.numerator += static_cast<unsigned __int128>(1) << (x.level - static_cast<unsigned>(k));
  }
  return sum;
}

bool is_loose(const Dyadic& load) { return (load.numerator << 1) <= (static_cast<unsigned __int128>(1) << load.scale); }

bool is_loose_b(const Dyadic& load, std::uint32_t b) {
  return (load.numerator << 1) < (static_cast<unsigned __int128>(b) << load.scale);
}

void validate_b_values(const Graph& g, const BValues& b) {
  if (b.size() != g.num_nodes()) throw InvalidArgument("b-values: one value per node required");
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    if (b[v] < 1 || b[v] > std::max<std::size_t>(g.degree(v), 1))
      throw InvalidArgument("b-value of node " + std::to_string(g.id(v)) + " must satisfy 1 <= b <= degree");
}

namespace {

struct LooseMsg {
  std::size_t bits() const { return 1; }
};

struct GreedyState {
  std::vector<std::int8_t> exponent;   // per port
  std::vector<std::uint8_t> candidate;  // port may still be raised
  std::uint64_t capacity = 1;          // b_v (1 for matchings)
  std::uint64_t load = 0;              // in units of 2^-level
};

Traced<FractionalAssignment> greedy(const Graph& g, const EdgeMask& active, const BValues* b,
                                    std::optional<sim::Globals> globals) {
  const sim::Topology topo(g, active);
  const sim::Globals known = globals.value_or(sim::Globals::of(topo));
  const unsigned level = known.log_delta;
  if (level > 60) throw InvalidArgument("maximum degree too large for exact fractional values");
  if (topo.max_degree() > (std::size_t{1} << level))
    throw InvalidArgument("greedy fractional matching: known maximum degree is below the actual one");
  const bool b_mode = b != nullptr;
  const std::uint64_t unit = std::uint64_t{1} << level;

  auto loose = [&](const GreedyState& st) {
    return b_mode ? 2 * st.load < st.capacity * unit : 2 * st.load <= unit;
  };
  auto raisable = [&](const GreedyState& st, std::size_t p) {
    return st.candidate[p] && (b_mode ? st.exponent[p] >= 1 : st.exponent[p] >= 0);
  };

  sim::NodeProgram<GreedyState, LooseMsg> program{
      b_mode ? "greedy-fractional-b" : "greedy-fractional",
      [&](const sim::NodeContext& ctx, GreedyState& st, std::span<const sim::Envelope<LooseMsg>> in,
          sim::Outbox<LooseMsg>& out) -> sim::Next {
        const std::size_t deg = ctx.ports.size();
        if (ctx.round > 1) {
          // Ports we did not hear from lead to tight endpoints: drop them.
          std::vector<std::uint8_t> heard(deg, 0);
          for (const auto& env : in) heard[env.port] = 1;
          for (std::size_t p = 0; p < deg; ++p) {
            if (!st.candidate[p]) continue;
            if (!heard[p]) {
              st.candidate[p] = 0;
              continue;
            }
            st.load += unit >> st.exponent[p];  // doubling adds the current value
            --st.exponent[p];
          }
          if (st.load > st.capacity * unit)
            throw sim::EngineError("greedy fractional matching: node " + std::to_string(ctx.id) + " overloaded");
        }
        if (!loose(st)) return sim::Next::halt();
        bool any = false;
        for (std::size_t p = 0; p < deg; ++p) {
          if (!raisable(st, p)) {
            st.candidate[p] = 0;
            continue;
          }
          out.send(static_cast<std::uint32_t>(p), {});
          any = true;
        }
        return any ? sim::Next::next_round() : sim::Next::halt();
      }};

  std::vector<GreedyState> init(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const std::size_t deg = topo.degree(v);
    init[v].exponent.assign(deg, static_cast<std::int8_t>(level));
    init[v].candidate.assign(deg, 1);
    init[v].capacity = b_mode ? (*b)[v] : 1;
    init[v].load = deg;
  }
  auto result = sim::run(topo, std::move(init), program, sim::default_options<GreedyState>(known));

  Traced<FractionalAssignment> out;
  out.value = FractionalAssignment::zeros(g.num_edges(), level);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const auto ports = topo.ports(v);
    for (std::size_t p = 0; p < ports.size(); ++p) {
      const std::int8_t mine = result.states[v].exponent[p];
      const std::int8_t theirs = result.states[ports[p].neighbor].exponent[ports[p].reverse];
      if (mine != theirs) throw sim::EngineError("greedy fractional matching: endpoints disagree on an edge value");
      out.value.exponent[ports[p].edge] = mine;
    }
  }
  out.trace = result.trace;
  return out;
}

}  // namespace

Traced<FractionalAssignment> greedy_fractional_matching(const Graph& g) {
  return greedy_fractional_matching(g, EdgeMask(g.num_edges(), true));
}

Traced<FractionalAssignment> greedy_fractional_matching(const Graph& g, const EdgeMask& active,
                                                        std::optional<sim::Globals> globals) {
  return greedy(g, active, nullptr, globals);
}

Traced<FractionalAssignment> greedy_fractional_b_matching(const Graph& g, const BValues& b) {
  validate_b_values(g, b);
  return greedy_fractional_b_matching(g, EdgeMask(g.num_edges(), true), b);
}

Traced<FractionalAssignment> greedy_fractional_b_matching(const Graph& g, const EdgeMask& active, const BValues& b,
                                                          std::optional<sim::Globals> globals) {
  if (b.size() != g.num_nodes()) throw InvalidArgument("b-values: one value per node required");
  for (std::uint32_t v : b)
    if (v < 1) throw InvalidArgument("b-values must be positive");
  return greedy(g, active, &b, globals);
}

}  // namespace lmatch
