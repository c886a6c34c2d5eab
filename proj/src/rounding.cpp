#include "lmatch/rounding.hpp"

#include <array>
#include <limits>
#include <string>

namespace lmatch {

std::size_t long_threshold(unsigned log_delta) { return 12 * static_cast<std::size_t>(std::max(log_delta, 1u)); }

Rational phase_keep_factor(unsigned exponent, std::size_t ell) {
  if (exponent < 3 || ell == 0) throw InvalidArgument("phase_keep_factor: exponent >= 3 and ell > 0 required");
  const auto scale = std::int64_t{1} << (exponent - 3);
  const auto l = static_cast<std::int64_t>(ell);
  // 1 - 3/ell - 1/2^(i-3) over the common denominator ell * 2^(i-3)
  return Rational(l * scale - 3 * scale - l, l * scale);
}

bool is_feasible(const Graph& g, const FractionalAssignment& x, const BValues* b) {
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const Dyadic load = node_load(g, x, v);
    const std::uint32_t cap = b ? (*b)[v] : 1;
    if (load.numerator > (static_cast<unsigned __int128>(cap) << load.scale)) return false;
  }
  return true;
}

PhasePlan plan_phase(const Graph& g, const FractionalAssignment& x, unsigned exponent, unsigned log_delta) {
  PhasePlan plan;
  plan.exponent = exponent;
  plan.ell = long_threshold(log_delta);
  plan.edges = EdgeMask(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (x.exponent[e] == static_cast<std::int8_t>(exponent)) plan.edges.set(e);
  plan.decomposition = two_decompose(g, plan.edges);
  for (const PathCycleComponent& c : components(plan.decomposition.decomposed)) {
    if (c.length() > plan.ell) {
      ++plan.long_components;
    } else if (c.is_cycle()) {
      ++plan.short_cycles;
    } else {
      ++plan.short_paths;
    }
  }
  return plan;
}

namespace {

constexpr NodeId kNull = std::numeric_limits<NodeId>::max();

// ---------------------------------------------------------------------------
// Classification of the components of H' within ell rounds

struct MinToken {
  NodeId id = kNull;
  std::uint32_t dist = 0;
  NodeId second = kNull;  // neighbor of the origin on this token's side
  bool valid = false;
};

struct EndToken {
  NodeId id = kNull;
  std::uint32_t dist = 0;
  bool loose = false;
  bool valid = false;
};

struct ClassifyMsg {
  bool has_min = false;
  NodeId min_id = 0;
  std::uint32_t min_dist = 0;
  NodeId second = kNull;
  bool has_end = false;
  NodeId end_id = 0;
  std::uint32_t end_dist = 0;
  bool end_loose = false;

  std::size_t bits() const {
    std::size_t b = 2;
    if (has_min) b += sim::bits_for(min_id) + sim::bits_for(min_dist) + (second == kNull ? 1 : sim::bits_for(second));
    if (has_end) b += sim::bits_for(end_id) + sim::bits_for(end_dist) + 1;
    return b;
  }
};

enum class Shape : std::uint8_t { Unknown, ShortPath, ShortCycle, Long };

struct ClassifyState {
  bool loose = false;  // the original node is loose
  std::array<NodeId, 2> neighbor{kNull, kNull};
  std::array<MinToken, 2> best{};
  std::array<NodeId, 2> sent{kNull, kNull};
  std::array<EndToken, 2> end{};
  Shape shape = Shape::Unknown;
  std::array<std::int8_t, 2> raise{-1, -1};
};

void classify(ClassifyState& st, std::size_t deg, NodeId self, std::size_t ell) {
  std::array<std::size_t, 2> number{0, 0};
  std::size_t length = 0;
  bool first_loose = false, last_loose = false;
  st.shape = Shape::Long;
  if (deg == 1) {
    if (st.end[0].valid && st.end[0].dist <= ell) {
      st.shape = Shape::ShortPath;
      length = st.end[0].dist;
      const bool first_is_me = self < st.end[0].id;
      first_loose = first_is_me ? st.loose : st.end[0].loose;
      last_loose = first_is_me ? st.end[0].loose : st.loose;
      number[0] = first_is_me ? 1 : length;
    }
  } else if (st.end[0].valid && st.end[1].valid) {
    length = std::size_t{st.end[0].dist} + st.end[1].dist;
    if (length <= ell) {
      st.shape = Shape::ShortPath;
      const int pf = st.end[0].id < st.end[1].id ? 0 : 1;
      first_loose = st.end[pf].loose;
      last_loose = st.end[1 - pf].loose;
      number[pf] = st.end[pf].dist;
      number[1 - pf] = st.end[pf].dist + 1;
    }
  } else if (!st.end[0].valid && !st.end[1].valid && st.best[0].valid && st.best[1].valid &&
             st.best[0].id == st.best[1].id) {
    if (st.best[0].id == self) {
      length = st.best[0].dist;
      if (length <= ell && st.best[1].dist == length) {
        st.shape = Shape::ShortCycle;
        const int ps = st.neighbor[0] < st.neighbor[1] ? 0 : 1;
        number[ps] = 1;
        number[1 - ps] = length;
      }
    } else {
      length = std::size_t{st.best[0].dist} + st.best[1].dist;
      if (length <= ell) {
        st.shape = Shape::ShortCycle;
        const int ps = st.best[0].second < st.best[1].second ? 0 : 1;
        number[ps] = st.best[ps].dist;
        number[1 - ps] = st.best[ps].dist + 1;
      }
    }
  }
  if (st.shape == Shape::Long) return;
  for (std::size_t p = 0; p < deg; ++p) {
    const std::size_t k = number[p];
    bool up = k % 2 == 1;
    if (st.shape == Shape::ShortPath) {
      if (k == 1 && !first_loose) up = false;
      if (k == length && !last_loose) up = false;
    }
    st.raise[p] = up ? 1 : 0;
  }
}

// ---------------------------------------------------------------------------
// Settling long components after orientation

struct SettleMsg {
  bool junction;
  bool tight_end;
  bool color_one;
  std::size_t bits() const { return 3; }
};

struct SettleState {
  std::array<std::uint8_t, 2> out{};
  bool tight_end = false;
  bool color_one = false;
  std::array<std::int8_t, 2> raise{-1, -1};
};

Traced<FractionalAssignment> phase_impl(const Graph& g, const FractionalAssignment& x, unsigned i,
                                        const std::vector<Color>& two_coloring, const BValues* b,
                                        const RoundingOptions& opts) {
  if (i < 5) throw InvalidArgument("rounding_phase: exponent must be at least 5");
  if (x.exponent.size() != g.num_edges()) throw InvalidArgument("rounding_phase: assignment size mismatch");
  if (two_coloring.size() != g.num_nodes()) throw InvalidArgument("rounding_phase: one color per node required");
  for (Color c : two_coloring)
    if (c > 1) throw InvalidArgument("rounding_phase: host graph must be 2-colored with colors 0 and 1");
  for (const Edge& e : g.edges())
    if (two_coloring[e.u] == two_coloring[e.v])
      throw InvalidArgument("rounding_phase: host graph is not properly 2-colored");
  if (x.max_exponent() > i) throw InvalidArgument("rounding_phase: assignment has values below 2^-i");
  if (b) validate_b_values(g, *b);

  const sim::Globals globals = opts.globals.value_or(sim::Globals::of(sim::Topology(g)));
  PhasePlan plan = plan_phase(g, x, i, globals.log_delta);
  const std::size_t ell = plan.ell;

  Traced<FractionalAssignment> out;
  out.value = x;
  out.value.level = std::min(x.level, i - 1);
  PhaseReport report;
  report.exponent = i;
  report.ell = ell;
  report.sum_before = x.total();
  report.short_cycles = plan.short_cycles;
  report.short_paths = plan.short_paths;
  report.long_components = plan.long_components;

  const Graph& h = plan.decomposition.decomposed;
  const auto& copy_of = plan.decomposition.copy_of;
  if (h.num_edges() > 0) {
    std::vector<std::uint8_t> loose(g.num_nodes());
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
      const Dyadic load = node_load(g, x, v);
      loose[v] = b ? is_loose_b(load, (*b)[v]) : is_loose(load);
    }

    // Stage 1: classify components.
    const sim::Topology topo(h);
    sim::NodeProgram<ClassifyState, ClassifyMsg> classify_program{
        "classify-components",
        [ell](const sim::NodeContext& ctx, ClassifyState& st, std::span<const sim::Envelope<ClassifyMsg>> in,
              sim::Outbox<ClassifyMsg>& outbox) -> sim::Next {
          const std::size_t deg = ctx.ports.size();
          if (deg == 0) return sim::Next::halt();
          const std::size_t r = ctx.round;
          std::array<bool, 2> fresh_end{false, false};
          for (const auto& env : in) {
            const std::uint32_t p = env.port;
            if (env.msg.has_min) {
              if (env.msg.min_dist == 1) st.neighbor[p] = env.msg.min_id;
              if (!st.best[p].valid || env.msg.min_id < st.best[p].id)
                st.best[p] = {env.msg.min_id, env.msg.min_dist, env.msg.second == kNull ? ctx.id : env.msg.second,
                              true};
            }
            if (env.msg.has_end) {
              st.end[p] = {env.msg.end_id, env.msg.end_dist, env.msg.end_loose, true};
              fresh_end[p] = true;
            }
          }
          if (r <= ell) {
            for (std::uint32_t q = 0; q < deg; ++q) {
              ClassifyMsg m;
              NodeId cid = ctx.id;
              std::uint32_t cd = 1;
              NodeId cs = kNull;
              if (deg == 2) {
                const MinToken& t = st.best[1 - q];
                if (t.valid && t.id < cid && t.dist + 1 <= ell) {
                  cid = t.id;
                  cd = t.dist + 1;
                  cs = t.second;
                }
              }
              if (st.sent[q] == kNull || cid < st.sent[q]) {
                m.has_min = true;
                m.min_id = cid;
                m.min_dist = cd;
                m.second = cs;
                st.sent[q] = cid;
              }
              if (r == 1 && deg == 1) {
                m.has_end = true;
                m.end_id = ctx.id;
                m.end_dist = 1;
                m.end_loose = st.loose;
              } else if (deg == 2 && fresh_end[1 - q] && st.end[1 - q].dist + 1 <= ell) {
                m.has_end = true;
                m.end_id = st.end[1 - q].id;
                m.end_dist = st.end[1 - q].dist + 1;
                m.end_loose = st.end[1 - q].loose;
              }
              if (m.has_min || m.has_end) outbox.send(q, m);
            }
          }
          if (r >= ell + 1) {
            classify(st, deg, ctx.id, ell);
            return sim::Next::halt();
          }
          return sim::Next::at(ell + 1);
        }};
    std::vector<ClassifyState> init(h.num_nodes());
    for (NodeIndex c = 0; c < h.num_nodes(); ++c) init[c].loose = loose[copy_of[c]];
    auto classified = sim::run(topo, std::move(init), classify_program, sim::default_options<ClassifyState>(globals));
    out.trace.append_as("classify", classified.trace);

    // Cross-check the distributed classification against the component structure.
    for (const PathCycleComponent& comp : components(h)) {
      const Shape want = comp.length() > ell ? Shape::Long : (comp.is_cycle() ? Shape::ShortCycle : Shape::ShortPath);
      for (NodeIndex c : comp.nodes)
        if (classified.states[c].shape != want)
          throw sim::EngineError("classify-components: node classification disagrees with its component");
    }

    std::vector<std::int8_t> decision(h.num_edges(), -1);
    EdgeMask long_edges(h.num_edges());
    for (NodeIndex c = 0; c < h.num_nodes(); ++c) {
      const auto ports = topo.ports(c);
      for (std::size_t p = 0; p < ports.size(); ++p) {
        const ClassifyState& st = classified.states[c];
        if (st.shape == Shape::Long) {
          long_edges.set(ports[p].edge);
          continue;
        }
        const std::int8_t other = classified.states[ports[p].neighbor].raise[ports[p].reverse];
        if (st.raise[p] != other) throw sim::EngineError("classify-components: endpoints disagree on an edge");
        decision[ports[p].edge] = st.raise[p];
      }
    }

    // Stage 2: orient long components into long runs.
    auto merged = merge_runs(h, long_edges, Orientation::by_id(h), ell, globals);
    out.trace.append_as("orient", merged.trace);

    // Stage 3: settle long components in one exchange.
    const sim::Topology long_topo(h, long_edges);
    sim::NodeProgram<SettleState, SettleMsg> settle_program{
        "settle-long",
        [](const sim::NodeContext& ctx, SettleState& st, std::span<const sim::Envelope<SettleMsg>> in,
           sim::Outbox<SettleMsg>& outbox) -> sim::Next {
          const std::size_t deg = ctx.ports.size();
          if (deg == 0) return sim::Next::halt();
          const bool junction = deg == 2 && st.out[0] == st.out[1];
          if (ctx.round == 1) {
            outbox.broadcast({junction, st.tight_end, st.color_one});
            return sim::Next::next_round();
          }
          for (const auto& env : in) {
            const std::uint32_t p = env.port;
            const bool border = junction || env.msg.junction;
            const bool head_color_one = st.out[p] ? env.msg.color_one : st.color_one;
            const bool blocked = st.tight_end || env.msg.tight_end;
            st.raise[p] = (!border && head_color_one && !blocked) ? 1 : 0;
          }
          return sim::Next::halt();
        }};
    std::vector<SettleState> sinit(h.num_nodes());
    for (NodeIndex c = 0; c < h.num_nodes(); ++c) {
      const auto ports = long_topo.ports(c);
      for (std::size_t p = 0; p < ports.size(); ++p) sinit[c].out[p] = merged.orientation.tail[ports[p].edge] == c;
      sinit[c].tight_end = ports.size() == 1 && !loose[copy_of[c]];
      sinit[c].color_one = two_coloring[copy_of[c]] == 1;
    }
    auto settled = sim::run(long_topo, std::move(sinit), settle_program, sim::default_options<SettleState>(globals));
    out.trace.append_as("settle", settled.trace);
    for (NodeIndex c = 0; c < h.num_nodes(); ++c) {
      const auto ports = long_topo.ports(c);
      for (std::size_t p = 0; p < ports.size(); ++p) {
        const std::int8_t other = settled.states[ports[p].neighbor].raise[ports[p].reverse];
        if (settled.states[c].raise[p] != other) throw sim::EngineError("settle-long: endpoints disagree on an edge");
        decision[ports[p].edge] = settled.states[c].raise[p];
      }
    }

    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      if (decision[e] < 0) throw sim::EngineError("rounding phase: an edge was left undecided");
      const EdgeId orig = plan.decomposition.to_original[e];
      out.value.exponent[orig] = decision[e] ? static_cast<std::int8_t>(i - 1) : FractionalAssignment::kZero;
    }
  }

  report.sum_after = out.value.total();
  report.rounds = out.trace.rounds_used;
  if (!is_feasible(g, out.value, b))
    throw InvariantViolation("rounding phase " + std::to_string(i) + " produced an infeasible assignment");
  if (!report.sum_after.at_least_times(phase_keep_factor(i, ell), report.sum_before))
    throw InvariantViolation("rounding phase " + std::to_string(i) + " lost more value than allowed: " +
                             report.sum_before.to_string() + " -> " + report.sum_after.to_string());
  if (opts.reports) opts.reports->push_back(report);
  return out;
}

Traced<FractionalAssignment> almost_integral_impl(const Graph& g, const FractionalAssignment& x,
                                                  const std::vector<Color>& two_coloring, const BValues* b,
                                                  RoundingOptions opts) {
  Traced<FractionalAssignment> out{x, {}};
  if (x.level <= 4) return out;
  if (!opts.globals) opts.globals = sim::Globals::of(sim::Topology(g));
  for (unsigned i = x.level; i >= 5; --i) {
    auto step = phase_impl(g, out.value, i, two_coloring, b, opts);
    out.value = std::move(step.value);
    out.trace.append_as("rounding-" + std::to_string(i), step.trace, out.value.total().to_double());
  }
  return out;
}

}  // namespace

Traced<FractionalAssignment> rounding_phase(const Graph& g, const FractionalAssignment& x, unsigned i,
                                            const std::vector<Color>& two_coloring, RoundingOptions opts) {
  return phase_impl(g, x, i, two_coloring, nullptr, opts);
}

Traced<FractionalAssignment> rounding_phase_b(const Graph& g, const FractionalAssignment& x, unsigned i,
                                              const std::vector<Color>& two_coloring, const BValues& b,
                                              RoundingOptions opts) {
  return phase_impl(g, x, i, two_coloring, &b, opts);
}

Traced<FractionalAssignment> round_to_almost_integral(const Graph& g, const FractionalAssignment& x,
                                                      const std::vector<Color>& two_coloring, RoundingOptions opts) {
  return almost_integral_impl(g, x, two_coloring, nullptr, opts);
}

Traced<FractionalAssignment> round_to_almost_integral_b(const Graph& g, const FractionalAssignment& x,
                                                        const std::vector<Color>& two_coloring, const BValues& b,
                                                        RoundingOptions opts) {
  return almost_integral_impl(g, x, two_coloring, &b, opts);
}

Traced<Matching> finalize_integral(const Graph& g, const FractionalAssignment& x, const Coloring& coloring,
                                   std::optional<sim::Globals> globals) {
  if (x.level > 4) throw InvalidArgument("finalize_integral: assignment level must be at most 4");
  EdgeMask support(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (x.nonzero(e)) support.set(e);
  return colored_maximal_matching(g, support, coloring, 16, globals);
}

Traced<BMatching> finalize_integral_b(const Graph& g, const FractionalAssignment& x, const BValues& b,
                                      const Coloring& coloring, std::optional<sim::Globals> globals) {
  if (x.level > 4) throw InvalidArgument("finalize_integral_b: assignment level must be at most 4");
  if (b.size() != g.num_nodes()) throw InvalidArgument("finalize_integral_b: one b-value per node required");
  std::vector<NodeIndex> copy_of;
  std::vector<std::array<NodeIndex, 2>> slot(g.num_edges(), {kNoNode, kNoNode});
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    std::size_t k = 0;
    for (const Incidence& inc : g.incident(v)) {
      if (!x.nonzero(inc.edge)) continue;
      if (k % 16 == 0) copy_of.push_back(v);
      slot[inc.edge][g.edge(inc.edge).u == v ? 0 : 1] = static_cast<NodeIndex>(copy_of.size() - 1);
      ++k;
    }
    const std::size_t copies = (k + 15) / 16;
    if (copies > b[v])
      throw InvariantViolation("finalize_integral_b: node " + std::to_string(g.id(v)) + " needs " +
                               std::to_string(copies) + " copies but has b = " + std::to_string(b[v]));
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<EdgeId> order;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!x.nonzero(e)) continue;
    edges.emplace_back(slot[e][0], slot[e][1]);
    order.push_back(e);
  }
  std::vector<EdgeId> placed;
  const Graph copies = Graph::from_edges(copy_of.size(), edges, std::nullopt, &placed);
  Coloring copy_colors;
  copy_colors.palette_size = coloring.palette_size;
  for (NodeIndex c : copy_of) copy_colors.colors.push_back(coloring.colors[c]);
  auto mm = colored_maximal_matching(copies, EdgeMask(copies.num_edges(), true), copy_colors, 16, globals);

  std::vector<EdgeId> back(copies.num_edges());
  for (std::size_t k = 0; k < order.size(); ++k) back[placed[k]] = order[k];
  EdgeMask chosen(g.num_edges());
  for (EdgeId e : mm.value.edges) chosen.set(back[e]);
  return {edge_set_of<BMatching>(chosen), mm.trace};
}

}  // namespace lmatch
