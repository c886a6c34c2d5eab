#include "lmatch/matching.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "lmatch/rounding.hpp"

namespace lmatch {

std::uint64_t total_weight(const Graph& g, const EdgeSet& s) {
  std::uint64_t sum = 0;
  for (EdgeId e : s.edges) sum += g.weight(e);
  return sum;
}

EdgeMask uncovered_edges(const Graph& g, const EdgeSet& m) {
  std::vector<std::uint8_t> matched(g.num_nodes(), 0);
  for (EdgeId e : m.edges) matched[g.edge(e).u] = matched[g.edge(e).v] = 1;
  EdgeMask out(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (!matched[g.edge(e).u] && !matched[g.edge(e).v]) out.set(e);
  return out;
}

namespace {

std::size_t ceil_positive(long double x) {
  if (!(x > 0)) return 0;
  return static_cast<std::size_t>(std::ceil(x));
}

void require_positive(const Rational& eps, const char* what) {
  if (eps <= Rational(0)) throw InvalidArgument(std::string(what) + ": eps must be positive");
}

}  // namespace

std::size_t approx_iterations(const Rational& eps) {
  require_positive(eps, "approx_iterations");
  const long double e = eps.to_double();
  return ceil_positive(std::log(e / (2 * (2 + e))) / std::log1p(-1.0L / kGeneralApprox));
}

std::size_t maximal_iterations(std::size_t n) {
  if (n <= 1) return 0;
  return ceil_positive(std::log(1.0L / n) / std::log1p(-1.0L / kGeneralApprox));
}

std::size_t eps_maximal_iterations(const Rational& eps) {
  if (eps <= Rational(0) || eps >= Rational(1)) throw InvalidArgument("eps_maximal: eps must lie in (0, 1)");
  return ceil_positive(std::log(static_cast<long double>(eps.to_double())) / std::log(511.0L / 512.0L));
}

std::size_t augmentation_iterations(const Rational& eps) {
  require_positive(eps, "augmentation_iterations");
  const long double e = eps.to_double();
  return ceil_positive(384 * std::log((2 + e) / e));
}

namespace {

constexpr std::uint64_t kSilent = std::numeric_limits<std::uint64_t>::max();

struct Env {
  sim::Globals globals;
  Coloring coloring;
};

Env prepare(const Graph& g, sim::RoundTrace& trace) {
  Env env{sim::Globals::of(sim::Topology(g)), {}};
  auto c = linial_coloring(g);
  env.coloring = std::move(c.value);
  trace.append_as("coloring", c.trace);
  return env;
}

// ---------------------------------------------------------------------------
// One-round exchange: every node with a value sends it over its active edges.

struct ValueMsg {
  std::uint64_t value;
  std::size_t bits() const { return sim::bits_for(value); }
};

struct ExchangeState {
  std::uint64_t value = kSilent;
  std::vector<std::uint64_t> received;
};

/// Per edge, the values sent by its u and v endpoints (kSilent if none).
using EdgeValues = std::vector<std::array<std::uint64_t, 2>>;

EdgeValues exchange(const Graph& g, const EdgeMask& mask, const std::vector<std::uint64_t>& values,
                    const sim::Globals& globals, const std::string& label, sim::RoundTrace& trace) {
  EdgeValues out(g.num_edges(), {kSilent, kSilent});
  const sim::Topology topo(g, mask);
  bool any = false;
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) any |= values[v] != kSilent && topo.degree(v) > 0;
  if (!any) return out;
  sim::NodeProgram<ExchangeState, ValueMsg> program{
      label, [](const sim::NodeContext& ctx, ExchangeState& st, std::span<const sim::Envelope<ValueMsg>> in,
                sim::Outbox<ValueMsg>& outbox) -> sim::Next {
        if (ctx.ports.empty()) return sim::Next::halt();
        if (ctx.round == 1) {
          st.received.assign(ctx.ports.size(), kSilent);
          if (st.value != kSilent) outbox.broadcast({st.value});
          return sim::Next::next_round();
        }
        for (const auto& env : in) st.received[env.port] = env.msg.value;
        return sim::Next::halt();
      }};
  std::vector<ExchangeState> init(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) init[v].value = values[v];
  auto result = sim::run(topo, std::move(init), program, sim::default_options<ExchangeState>(globals));
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const auto ports = topo.ports(v);
    for (std::size_t p = 0; p < ports.size(); ++p) {
      const NodeIndex w = ports[p].neighbor;
      out[ports[p].edge][g.edge(ports[p].edge).u == w ? 0 : 1] = result.states[v].received[p];
    }
  }
  trace.append_as(label, result.trace);
  return out;
}

/// Drops every edge of `remaining` touching an endpoint of `m` (one round).
void remove_covered(const Graph& g, EdgeMask& remaining, const EdgeMask& m, const sim::Globals& globals,
                    sim::RoundTrace& trace) {
  std::vector<std::uint64_t> flag(g.num_nodes(), kSilent);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (m.test(e)) flag[g.edge(e).u] = flag[g.edge(e).v] = 1;
  const EdgeValues heard = exchange(g, remaining, flag, globals, "remove-covered", trace);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (remaining.test(e) && (heard[e][0] != kSilent || heard[e][1] != kSilent)) remaining.set(e, false);
}

EdgeMask merge(std::size_t num_edges, const std::vector<EdgeId>& to_original, const EdgeSet& chosen) {
  EdgeMask out(num_edges);
  for (EdgeId e : chosen.edges) out.set(to_original[e]);
  return out;
}

Coloring lift(const Coloring& c, const std::vector<NodeIndex>& original) {
  Coloring out;
  out.palette_size = c.palette_size;
  out.colors.reserve(original.size());
  for (NodeIndex v : original) out.colors.push_back(c.colors[v]);
  return out;
}

// ---------------------------------------------------------------------------
// Constant-factor steps on an active subgraph of g

EdgeMask bipartite_step(const Graph& g, const EdgeMask& mask, const std::vector<Color>& two,
                        const Coloring& coloring, const sim::Globals& globals, sim::RoundTrace& trace) {
  auto x = greedy_fractional_matching(g, mask, globals);
  trace.append_as("fractional", x.trace, x.value.total().to_double());
  RoundingOptions opts;
  opts.globals = globals;
  auto r = round_to_almost_integral(g, x.value, two, opts);
  trace.append_as("rounding", r.trace, r.value.total().to_double());
  auto m = finalize_integral(g, r.value, coloring, globals);
  trace.append_as("integral", m.trace, static_cast<double>(m.value.size()));
  return m.value.mask(g.num_edges());
}

struct CoverView {
  BipartiteCover cover;
  std::vector<Color> two;
  Coloring coloring;
};

CoverView make_cover(const Graph& g, const EdgeMask& mask, const Coloring& coloring) {
  CoverView cv{bipartite_cover(g, Orientation::by_id(g), mask), {}, {}};
  cv.two.reserve(cv.cover.side.size());
  for (Side s : cv.cover.side) cv.two.push_back(static_cast<Color>(s));
  cv.coloring = lift(coloring, cv.cover.original);
  return cv;
}

EdgeMask general_step(const Graph& g, const EdgeMask& mask, const Env& env, sim::RoundTrace& trace) {
  const CoverView cv = make_cover(g, mask, env.coloring);
  const Graph& b = cv.cover.cover;
  const EdgeMask mb = bipartite_step(b, EdgeMask(b.num_edges(), true), cv.two, cv.coloring, env.globals, trace);
  EdgeSet chosen_b{mb.to_vector()};
  const EdgeMask merged = merge(g.num_edges(), cv.cover.to_original, chosen_b);
  auto m = colored_maximal_matching(g, merged, env.coloring, 2, env.globals);
  trace.append_as("merge", m.trace, static_cast<double>(m.value.size()));
  return m.value.mask(g.num_edges());
}

EdgeMask approx_core(const Graph& g, const EdgeMask& mask, std::size_t iterations, const Env& env,
                     sim::RoundTrace& trace) {
  EdgeMask remaining = mask;
  EdgeMask chosen(g.num_edges());
  for (std::size_t it = 0; it < iterations && !remaining.empty(); ++it) {
    sim::RoundTrace step;
    const EdgeMask mi = general_step(g, remaining, env, step);
    remove_covered(g, remaining, mi, env.globals, step);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (mi.test(e)) chosen.set(e);
    trace.append_as("iteration", step, static_cast<double>(remaining.count()));
  }
  return chosen;
}

unsigned weight_class(Weight w) {
  unsigned c = 0;
  while (w >= 8) {
    w /= 8;
    ++c;
  }
  return c;
}

EdgeMask weighted_core(const Graph& g, const EdgeMask& mask, const std::vector<Weight>& weights, const Env& env,
                       sim::RoundTrace& trace) {
  std::map<unsigned, EdgeMask> classes;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!mask.test(e)) continue;
    auto [it, fresh] = classes.try_emplace(weight_class(weights[e]), g.num_edges());
    it->second.set(e);
  }
  if (classes.empty()) return EdgeMask(g.num_edges());
  const std::size_t k = approx_iterations(Rational(1));
  std::vector<sim::RoundTrace> traces;
  std::vector<std::uint64_t> top(g.num_nodes(), kSilent);
  std::vector<std::uint64_t> edge_class(g.num_edges(), kSilent);
  EdgeMask all(g.num_edges());
  for (const auto& [cls, cmask] : classes) {
    sim::RoundTrace t;
    const EdgeMask mj = approx_core(g, cmask, k, env, t);
    traces.push_back(std::move(t));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!mj.test(e)) continue;
      all.set(e);
      edge_class[e] = cls;
      top[g.edge(e).u] = top[g.edge(e).u] == kSilent ? cls : std::max<std::uint64_t>(top[g.edge(e).u], cls);
      top[g.edge(e).v] = top[g.edge(e).v] == kSilent ? cls : std::max<std::uint64_t>(top[g.edge(e).v], cls);
    }
  }
  trace.append_as("weight-classes", sim::RoundTrace::parallel(traces), static_cast<double>(classes.size()));
  // An edge survives when it belongs to the highest class at both endpoints.
  const EdgeValues heard = exchange(g, all, top, env.globals, "resolve-classes", trace);
  EdgeMask out(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (all.test(e) && heard[e][0] == edge_class[e] && heard[e][1] == edge_class[e]) out.set(e);
  return out;
}

EdgeMask almost_maximal_core(const Graph& g, const EdgeMask& mask, const Env& env, sim::RoundTrace& trace) {
  std::vector<std::uint64_t> degree(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) degree[v] = active_degree(g, mask, v);
  const EdgeValues heard = exchange(g, mask, degree, env.globals, "degrees", trace);
  std::vector<Weight> w(g.num_edges(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (mask.test(e)) w[e] = heard[e][0] + heard[e][1] - 1;
  return weighted_core(g, mask, w, env, trace);
}

std::vector<Weight> checked_weights(const Graph& g) {
  std::vector<Weight> w(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    w[e] = g.weight(e);
    if (w[e] == 0) throw InvalidArgument("weighted matching: edge weights must be positive integers");
  }
  return w;
}

}  // namespace

namespace {

EdgeMask b_step(const Graph& g, const EdgeMask& mask, const BValues& b, const Env& env, sim::RoundTrace& trace) {
  const CoverView cv = make_cover(g, mask, env.coloring);
  const Graph& cover = cv.cover.cover;
  BValues bc(cover.num_nodes());
  for (NodeIndex c = 0; c < cover.num_nodes(); ++c)
    bc[c] = std::clamp<std::uint32_t>(b[cv.cover.original[c]], 1,
                                      static_cast<std::uint32_t>(std::max<std::size_t>(cover.degree(c), 1)));
  const EdgeMask all(cover.num_edges(), true);
  auto x = greedy_fractional_b_matching(cover, all, bc, env.globals);
  trace.append_as("fractional", x.trace, x.value.total().to_double());
  RoundingOptions opts;
  opts.globals = env.globals;
  auto r = round_to_almost_integral_b(cover, x.value, cv.two, bc, opts);
  trace.append_as("rounding", r.trace, r.value.total().to_double());
  auto mb = finalize_integral_b(cover, r.value, bc, cv.coloring, env.globals);
  trace.append_as("integral", mb.trace, static_cast<double>(mb.value.size()));

  const EdgeMask merged = merge(g.num_edges(), cv.cover.to_original, mb.value);
  const TwoDecomposition dec = two_decompose(g, merged);
  const Graph& h = dec.decomposed;
  auto m = colored_maximal_matching(h, EdgeMask(h.num_edges(), true), lift(env.coloring, dec.copy_of), 2,
                                    env.globals);
  trace.append_as("merge", m.trace, static_cast<double>(m.value.size()));
  return merge(g.num_edges(), dec.to_original, m.value);
}

}  // namespace

Traced<Matching> const_approx_bipartite(const Graph& g, const std::vector<Color>& two_coloring) {
  if (two_coloring.size() != g.num_nodes()) throw InvalidArgument("const_approx_bipartite: one color per node required");
  for (Color c : two_coloring)
    if (c > 1) throw InvalidArgument("const_approx_bipartite: colors must be 0 or 1");
  for (const Edge& e : g.edges())
    if (two_coloring[e.u] == two_coloring[e.v])
      throw InvalidArgument("const_approx_bipartite: coloring is not a proper 2-coloring");
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  out.value = edge_set_of<Matching>(
      bipartite_step(g, EdgeMask(g.num_edges(), true), two_coloring, env.coloring, env.globals, out.trace));
  return out;
}

Traced<Matching> const_approx_bipartite(const Graph& g) {
  if (!g.coloring()) throw InvalidArgument("const_approx_bipartite: graph carries no 2-coloring");
  return const_approx_bipartite(g, *g.coloring());
}

Traced<Matching> const_approx_general(const Graph& g) {
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  out.value = edge_set_of<Matching>(general_step(g, EdgeMask(g.num_edges(), true), env, out.trace));
  return out;
}

Traced<Matching> approx_matching(const Graph& g, const Rational& eps) {
  const std::size_t k = approx_iterations(eps);
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  out.value = edge_set_of<Matching>(approx_core(g, EdgeMask(g.num_edges(), true), k, env, out.trace));
  return out;
}

Traced<Matching> maximal_matching(const Graph& g) {
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  out.value = edge_set_of<Matching>(
      approx_core(g, EdgeMask(g.num_edges(), true), maximal_iterations(g.num_nodes()), env, out.trace));
  return out;
}

Traced<Matching> const_approx_weighted(const Graph& g) {
  const std::vector<Weight> w = checked_weights(g);
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  out.value = edge_set_of<Matching>(weighted_core(g, EdgeMask(g.num_edges(), true), w, env, out.trace));
  return out;
}

Traced<Matching> const_almost_maximal(const Graph& g) {
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  out.value = edge_set_of<Matching>(almost_maximal_core(g, EdgeMask(g.num_edges(), true), env, out.trace));
  return out;
}

Traced<Matching> eps_maximal_matching(const Graph& g, const Rational& eps) {
  const std::size_t k = eps_maximal_iterations(eps);
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  EdgeMask remaining(g.num_edges(), true);
  EdgeMask chosen(g.num_edges());
  for (std::size_t it = 0; it < k && !remaining.empty(); ++it) {
    sim::RoundTrace step;
    const EdgeMask mi = almost_maximal_core(g, remaining, env, step);
    remove_covered(g, remaining, mi, env.globals, step);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (mi.test(e)) chosen.set(e);
    out.trace.append_as("iteration", step, static_cast<double>(remaining.count()));
  }
  out.value = edge_set_of<Matching>(chosen);
  return out;
}

Traced<BMatching> approx_b_matching(const Graph& g, const BValues& b, const Rational& eps) {
  validate_b_values(g, b);
  const std::size_t k = approx_iterations(eps);
  Traced<BMatching> out;
  const Env env = prepare(g, out.trace);
  BValues residual = b;
  EdgeMask remaining(g.num_edges(), true);
  EdgeMask chosen(g.num_edges());
  for (std::size_t it = 0; it < k && !remaining.empty(); ++it) {
    sim::RoundTrace step;
    const EdgeMask mi = b_step(g, remaining, residual, env, step);
    std::vector<std::uint64_t> exhausted(g.num_nodes(), kSilent);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!mi.test(e)) continue;
      chosen.set(e);
      remaining.set(e, false);
      for (NodeIndex v : {g.edge(e).u, g.edge(e).v})
        if (--residual[v] == 0) exhausted[v] = 1;
    }
    const EdgeValues heard = exchange(g, remaining, exhausted, env.globals, "remove-exhausted", step);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (remaining.test(e) && (heard[e][0] != kSilent || heard[e][1] != kSilent)) remaining.set(e, false);
    out.trace.append_as("iteration", step, static_cast<double>(remaining.count()));
  }
  out.value = edge_set_of<BMatching>(chosen);
  return out;
}

Traced<Matching> approx_weighted_matching(const Graph& g, const Rational& eps) {
  const std::vector<Weight> w = checked_weights(g);
  const std::size_t k = augmentation_iterations(eps);
  Traced<Matching> out;
  const Env env = prepare(g, out.trace);
  const EdgeMask all(g.num_edges(), true);
  std::vector<EdgeId> mate_edge(g.num_nodes(), kNoEdge);
  for (std::size_t it = 0; it < k; ++it) {
    sim::RoundTrace step;
    std::vector<std::uint64_t> mate_weight(g.num_nodes(), 0);
    for (NodeIndex v = 0; v < g.num_nodes(); ++v)
      if (mate_edge[v] != kNoEdge) mate_weight[v] = w[mate_edge[v]];
    const EdgeValues heard = exchange(g, all, mate_weight, env.globals, "gains", step);
    std::vector<Weight> gain(g.num_edges(), 0);
    EdgeMask aux(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (mate_edge[g.edge(e).u] == e) continue;
      const std::uint64_t lost = heard[e][0] + heard[e][1];
      if (w[e] > lost) {
        gain[e] = w[e] - lost;
        aux.set(e);
      }
    }
    if (aux.empty()) break;
    const EdgeMask mp = weighted_core(g, aux, gain, env, step);
    // Nodes entering new edges tell their old partners to drop the old edge.
    std::vector<std::uint64_t> leaving(g.num_nodes(), kSilent);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (mp.test(e)) leaving[g.edge(e).u] = leaving[g.edge(e).v] = 1;
    EdgeMask current(g.num_edges());
    for (NodeIndex v = 0; v < g.num_nodes(); ++v)
      if (mate_edge[v] != kNoEdge) current.set(mate_edge[v]);
    exchange(g, current, leaving, env.globals, "augment", step);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!current.test(e)) continue;
      const Edge& ed = g.edge(e);
      if (leaving[ed.u] != kSilent || leaving[ed.v] != kSilent) mate_edge[ed.u] = mate_edge[ed.v] = kNoEdge;
    }
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (mp.test(e)) mate_edge[g.edge(e).u] = mate_edge[g.edge(e).v] = e;
    out.trace.append_as("augmentation", step, static_cast<double>(mp.count()));
  }
  EdgeMask chosen(g.num_edges());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    if (mate_edge[v] != kNoEdge) chosen.set(mate_edge[v]);
  out.value = edge_set_of<Matching>(chosen);
  return out;
}

Traced<EdgeDominatingSet> approx_edge_dominating_set(const Graph& g, const Rational& eps) {
  require_positive(eps, "approx_edge_dominating_set");
  Traced<EdgeDominatingSet> out;
  if (g.max_degree() == 0) return out;
  Rational inner = eps / Rational(4 * static_cast<std::int64_t>(g.max_degree()));
  if (inner >= Rational(1)) inner = Rational(1, 2);
  auto m = eps_maximal_matching(g, inner);
  out.trace = m.trace;
  EdgeMask d = m.value.mask(g.num_edges());
  EdgeMask remaining(g.num_edges(), true);
  Env env{sim::Globals::of(sim::Topology(g)), {}};
  remove_covered(g, remaining, d, env.globals, out.trace);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (remaining.test(e)) d.set(e);
  out.value = edge_set_of<EdgeDominatingSet>(d);
  return out;
}

}  // namespace lmatch
