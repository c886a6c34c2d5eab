#include <array>
#include <string>
#include <tuple>

#include "lmatch/subroutines.hpp"

namespace lmatch {

namespace {

enum class RunKind : std::uint8_t { Token, Reverse };

struct RunMsg {
  RunKind kind;
  std::uint32_t dist = 0;
  NodeId min_id = 0;
  std::size_t bits() const { return 1 + sim::bits_for(dist) + sim::bits_for(min_id); }
};

struct RunState {
  std::array<std::uint8_t, 2> out{};  // this node is the tail of the port's edge
  std::array<std::uint8_t, 2> got{};
  std::array<std::uint32_t, 2> len{};
  std::array<NodeId, 2> min_id{};
  std::size_t end_substep = static_cast<std::size_t>(-1);  // sub-step in which this node started as a run end
};

struct Substep {
  std::size_t start;   // first round
  std::uint32_t window;
  bool head_to_head;
};

std::vector<Substep> merge_schedule(std::size_t ell) {
  std::vector<Substep> plan;
  const unsigned iterations = ceil_log2(ell);
  std::size_t round = 1;
  for (unsigned j = 1; j <= iterations; ++j) {
    const auto w = static_cast<std::uint32_t>(1u << j);
    for (bool hh : {true, false}) {
      plan.push_back({round, w, hh});
      round += 2 * static_cast<std::size_t>(w) + 1;
    }
  }
  return plan;
}

}  // namespace

std::size_t merge_runs_rounds(std::size_t ell) {
  const auto plan = merge_schedule(ell);
  return plan.empty() ? 0 : plan.back().start + 2 * plan.back().window;
}

RunMergeResult merge_runs(const Graph& g, const EdgeMask& participating, Orientation start, std::size_t ell,
                          std::optional<sim::Globals> globals) {
  if (start.tail.size() != g.num_edges()) throw InvalidArgument("merge_runs: orientation size mismatch");
  if (active_max_degree(g, participating) > 2) throw InvalidArgument("merge_runs: degree above 2");
  const sim::Topology topo(g, participating);
  const std::vector<Substep> plan = merge_schedule(ell);
  RunMergeResult result;
  if (plan.empty() || topo.num_edges() == 0) {
    result.orientation = std::move(start);
    return result;
  }
  const std::size_t last_round = merge_runs_rounds(ell);

  auto substep_of = [&plan](std::size_t r) {
    std::size_t q = 0;
    while (q + 1 < plan.size() && plan[q + 1].start <= r) ++q;
    return q;
  };

  sim::NodeProgram<RunState, RunMsg> program{
      "orient-runs",
      [&](const sim::NodeContext& ctx, RunState& st, std::span<const sim::Envelope<RunMsg>> in,
          sim::Outbox<RunMsg>& outbox) -> sim::Next {
        const std::size_t deg = ctx.ports.size();
        if (deg == 0) return sim::Next::halt();
        const std::size_t r = ctx.round;
        const std::size_t q = substep_of(r);
        const Substep& sub = plan[q];
        const std::size_t t = r - sub.start + 1;
        // Run ends are fixed at the start of a sub-step; a reversal may later
        // turn an end into an interior node but it still acts as an end.
        auto currently_end = [&] { return deg == 1 || st.out[0] == st.out[1]; };
        if (t == 1 && currently_end()) st.end_substep = q;
        auto is_end = [&] { return st.end_substep == q; };
        auto is_decider = [&] { return deg == 2 && st.out[0] == st.out[1] && (st.out[0] == 0) == sub.head_to_head; };

        if (t == 1 && is_end()) {
          st.got = {0, 0};
          for (std::uint32_t p = 0; p < deg; ++p) outbox.send(p, {RunKind::Token, 1, ctx.id});
        }
        bool reversed[2] = {false, false};
        for (const auto& env : in) {
          const std::uint32_t p = env.port;
          if (env.msg.kind == RunKind::Token) {
            if (is_end()) {
              st.got[p] = 1;
              st.len[p] = env.msg.dist;
              st.min_id[p] = env.msg.min_id;
            } else if (env.msg.dist + 1 <= sub.window) {
              outbox.send(1 - p, {RunKind::Token, env.msg.dist + 1, std::min(env.msg.min_id, ctx.id)});
            }
          } else {
            reversed[p] = true;
          }
        }
        if (reversed[0] || reversed[1]) {
          if (is_end()) {
            for (std::uint32_t p = 0; p < deg; ++p)
              if (reversed[p]) st.out[p] ^= 1;
          } else {
            const std::uint32_t from = reversed[0] ? 0 : 1;
            st.out[0] ^= 1;
            st.out[1] ^= 1;
            outbox.send(1 - from, {RunKind::Reverse});
          }
        }
        if (t == sub.window + 1 && is_end() && is_decider()) {
          int pick = -1;
          if (st.got[0] && st.got[1]) {
            const auto key = [&](int p) { return std::tuple(st.len[p], st.min_id[p], p); };
            pick = key(0) < key(1) ? 0 : 1;
          } else if (st.got[0] || st.got[1]) {
            pick = st.got[0] ? 0 : 1;
          }
          if (pick >= 0) {
            st.out[pick] ^= 1;
            outbox.send(static_cast<std::uint32_t>(pick), {RunKind::Reverse});
          }
        }

        if (r >= last_round) return sim::Next::halt();
        std::size_t wake = 0;
        if (t <= sub.window && is_end() && is_decider()) wake = sub.start + sub.window;
        if (wake == 0 && currently_end() && q + 1 < plan.size()) wake = plan[q + 1].start;
        return wake ? sim::Next::at(wake) : sim::Next::idle();
      }};

  std::vector<RunState> init(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const auto ports = topo.ports(v);
    for (std::size_t p = 0; p < ports.size(); ++p) init[v].out[p] = start.tail[ports[p].edge] == v;
  }
  auto run = sim::run(topo, std::move(init), program, sim::default_options<RunState>(globals));

  result.orientation = std::move(start);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const auto ports = topo.ports(v);
    for (std::size_t p = 0; p < ports.size(); ++p) {
      const NodeIndex w = ports[p].neighbor;
      const bool v_tail = run.states[v].out[p] != 0;
      const bool w_tail = run.states[w].out[ports[p].reverse] != 0;
      if (v_tail == w_tail) throw sim::EngineError("orient-runs: endpoints disagree on an edge direction");
      if (v_tail) result.orientation.tail[ports[p].edge] = v;
    }
  }
  result.trace = run.trace;
  return result;
}

std::vector<std::size_t> run_lengths(const Graph& g, const PathCycleComponent& comp, const Orientation& o) {
  std::vector<std::size_t> runs;
  const std::size_t len = comp.length();
  if (len == 0) return runs;
  std::vector<std::uint8_t> forward(len);
  for (std::size_t k = 0; k < len; ++k) forward[k] = o.tail[comp.edges[k]] == comp.nodes[k];
  (void)g;
  std::size_t cur = 1;
  for (std::size_t k = 1; k < len; ++k) {
    if (forward[k] == forward[k - 1]) {
      ++cur;
    } else {
      runs.push_back(cur);
      cur = 1;
    }
  }
  runs.push_back(cur);
  if (comp.is_cycle() && runs.size() > 1 && forward.front() == forward.back()) {
    runs.front() += runs.back();
    runs.pop_back();
  }
  return runs;
}

Traced<Orientation> orient_min_length(const Graph& g, const PathCycleComponent& comp, std::size_t ell) {
  if (comp.length() <= ell)
    throw InvalidArgument("orient_min_length: component of length " + std::to_string(comp.length()) +
                          " is not longer than " + std::to_string(ell));
  const EdgeMask mask = EdgeMask::from_edges(g.num_edges(), comp.edges);
  auto merged = merge_runs(g, mask, Orientation::by_id(g), ell);
  for (std::size_t run : run_lengths(g, comp, merged.orientation))
    if (run < ell && run != comp.length())
      throw sim::EngineError("orient_min_length: a run of length " + std::to_string(run) + " remains");
  return {std::move(merged.orientation), merged.trace};
}

}  // namespace lmatch
