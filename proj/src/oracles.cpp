#include "lmatch/oracles.hpp"

#include <algorithm>
#include <bit>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <boost/graph/maximum_weighted_matching.hpp>

namespace lmatch {

namespace {

void require_edges_at_most(const Graph& g, std::size_t limit, const char* what) {
  if (g.num_edges() > limit)
    throw OracleBudgetExceeded(std::string(what) + ": " + std::to_string(g.num_edges()) +
                               " edges exceed the exhaustive budget of " + std::to_string(limit));
}

EdgeSet decode(std::uint64_t code, std::size_t m) {
  EdgeSet s;
  for (EdgeId e = 0; e < m; ++e)
    if (code >> e & 1) s.edges.push_back(e);
  return s;
}

/// Visits every edge subset in Gray-code order. `flip(e, added)` sees each
/// single-edge change; `visit(code)` sees each subset, the empty one first.
template <class Flip, class Visit>
void gray_enumerate(std::size_t m, Flip&& flip, Visit&& visit) {
  std::uint64_t code = 0;
  visit(code);
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto e = static_cast<EdgeId>(std::countr_zero(k));
    code ^= std::uint64_t{1} << e;
    flip(e, (code >> e & 1) != 0);
    visit(code);
  }
}

/// Largest total weight of an edge subset respecting per-node capacities.
Optimum exhaustive_packing(const Graph& g, const std::vector<std::uint32_t>& cap, bool weighted) {
  const std::size_t m = g.num_edges();
  std::vector<std::uint32_t> load(g.num_nodes(), 0);
  std::size_t violations = 0;
  std::uint64_t value = 0, best = 0, best_code = 0;
  auto bump = [&](NodeIndex v, bool up) {
    if (up) {
      if (++load[v] == cap[v] + 1) ++violations;
    } else {
      if (load[v]-- == cap[v] + 1) --violations;
    }
  };
  gray_enumerate(
      m,
      [&](EdgeId e, bool added) {
        const Edge& ed = g.edge(e);
        bump(ed.u, added);
        bump(ed.v, added);
        const std::uint64_t w = weighted ? g.weight(e) : 1;
        value = added ? value + w : value - w;
      },
      [&](std::uint64_t code) {
        if (violations == 0 && value > best) {
          best = value;
          best_code = code;
        }
      });
  return {best, decode(best_code, m)};
}

}  // namespace

Optimum max_matching_exact(const Graph& g, const OracleBudget& budget) {
  if (g.num_nodes() > budget.blossom_max_nodes)
    throw OracleBudgetExceeded("max_matching_exact: " + std::to_string(g.num_nodes()) + " nodes exceed the budget");
  using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BG bg(g.num_nodes());
  for (const Edge& e : g.edges()) boost::add_edge(e.u, e.v, bg);
  std::vector<boost::graph_traits<BG>::vertex_descriptor> mate(g.num_nodes());
  boost::edmonds_maximum_cardinality_matching(bg, mate.data());
  Optimum out;
  const auto null = boost::graph_traits<BG>::null_vertex();
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    if (mate[v] != null && mate[v] > v) out.witness.edges.push_back(*g.find_edge(v, static_cast<NodeIndex>(mate[v])));
  std::sort(out.witness.edges.begin(), out.witness.edges.end());
  out.value = out.witness.size();
  return out;
}

Optimum max_matching_exhaustive(const Graph& g, const OracleBudget& budget) {
  require_edges_at_most(g, budget.exhaustive_max_edges, "max_matching_exhaustive");
  return exhaustive_packing(g, std::vector<std::uint32_t>(g.num_nodes(), 1), false);
}

Optimum max_weighted_matching_exhaustive(const Graph& g, const OracleBudget& budget) {
  require_edges_at_most(g, budget.exhaustive_max_edges, "max_weighted_matching_exhaustive");
  return exhaustive_packing(g, std::vector<std::uint32_t>(g.num_nodes(), 1), true);
}

Optimum max_b_matching_exact(const Graph& g, const BValues& b, const OracleBudget& budget) {
  if (b.size() != g.num_nodes()) throw InvalidArgument("max_b_matching_exact: one b-value per node required");
  require_edges_at_most(g, budget.exhaustive_max_edges, "max_b_matching_exact");
  return exhaustive_packing(g, b, false);
}

Optimum max_weighted_matching_exact(const Graph& g, const OracleBudget& budget) {
  if (g.num_nodes() > budget.weighted_max_nodes)
    throw OracleBudgetExceeded("max_weighted_matching_exact: " + std::to_string(g.num_nodes()) +
                               " nodes exceed the budget");
  const std::size_t n = g.num_nodes();
  struct Arc {
    NodeIndex to;
    EdgeId edge;
    Weight w;
  };
  std::vector<std::vector<Arc>> adj(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    adj[g.edge(e).u].push_back({g.edge(e).v, e, g.weight(e)});
    adj[g.edge(e).v].push_back({g.edge(e).u, e, g.weight(e)});
  }
  for (auto& a : adj) std::stable_sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) { return x.w > y.w; });

  std::vector<std::uint8_t> matched(n, 0);
  std::vector<EdgeId> chosen, best_edges;
  std::uint64_t cur = 0, best = 0, visits = 0;

  // Twice an upper bound on what the unmatched nodes can still add.
  auto doubled_bound = [&]() {
    std::uint64_t sum = 0;
    for (NodeIndex v = 0; v < n; ++v) {
      if (matched[v]) continue;
      for (const Arc& a : adj[v])
        if (!matched[a.to]) {
          sum += a.w;
          break;
        }
    }
    return sum;
  };

  auto search = [&](auto&& self, NodeIndex start) -> void {
    if (++visits > budget.search_node_limit)
      throw OracleBudgetExceeded("max_weighted_matching_exact: search limit reached");
    NodeIndex v = start;
    for (; v < n; ++v) {
      if (matched[v]) continue;
      if (std::any_of(adj[v].begin(), adj[v].end(), [&](const Arc& a) { return !matched[a.to]; })) break;
    }
    if (v == n) {
      if (cur > best) {
        best = cur;
        best_edges = chosen;
      }
      return;
    }
    if (2 * cur + doubled_bound() <= 2 * best) return;
    matched[v] = 1;
    for (const Arc& a : adj[v]) {
      if (matched[a.to]) continue;
      matched[a.to] = 1;
      chosen.push_back(a.edge);
      cur += a.w;
      self(self, v + 1);
      cur -= a.w;
      chosen.pop_back();
      matched[a.to] = 0;
    }
    self(self, v + 1);
    matched[v] = 0;
  };
  search(search, 0);
  std::sort(best_edges.begin(), best_edges.end());
  return {best, EdgeSet{best_edges}};
}

Optimum max_weighted_matching_boost(const Graph& g) {
  using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                   boost::property<boost::edge_weight_t, long long>>;
  BG bg(g.num_nodes());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    boost::add_edge(g.edge(e).u, g.edge(e).v, static_cast<long long>(g.weight(e)), bg);
  std::vector<boost::graph_traits<BG>::vertex_descriptor> mate(g.num_nodes());
  boost::maximum_weighted_matching(bg, mate.data());
  Optimum out;
  const auto null = boost::graph_traits<BG>::null_vertex();
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    if (mate[v] == null || mate[v] < v) continue;
    const EdgeId e = *g.find_edge(v, static_cast<NodeIndex>(mate[v]));
    out.witness.edges.push_back(e);
    out.value += g.weight(e);
  }
  std::sort(out.witness.edges.begin(), out.witness.edges.end());
  return out;
}

Optimum min_eds_exact(const Graph& g, const OracleBudget& budget) {
  require_edges_at_most(g, budget.eds_max_edges, "min_eds_exact");
  const std::size_t m = g.num_edges();
  std::vector<std::uint32_t> cnt(g.num_nodes(), 0);
  std::vector<std::uint32_t> hits(m, 0);  // chosen edges adjacent to or equal to e, counted per endpoint
  std::size_t undominated = m, size = 0;
  std::uint64_t best = m, best_code = (m == 0 ? 0 : (std::uint64_t{1} << m) - 1);
  auto touch = [&](NodeIndex x, bool up) {
    const bool was = cnt[x] > 0;
    cnt[x] = up ? cnt[x] + 1 : cnt[x] - 1;
    if (was == (cnt[x] > 0)) return;
    for (const Incidence& inc : g.incident(x)) {
      const std::uint32_t before = hits[inc.edge];
      hits[inc.edge] = up ? before + 1 : before - 1;
      if (before == 0 && up) --undominated;
      if (before == 1 && !up) ++undominated;
    }
  };
  gray_enumerate(
      m,
      [&](EdgeId e, bool added) {
        touch(g.edge(e).u, added);
        touch(g.edge(e).v, added);
        size = added ? size + 1 : size - 1;
      },
      [&](std::uint64_t code) {
        if (undominated == 0 && size < best) {
          best = size;
          best_code = code;
        }
      });
  return {best, decode(best_code, m)};
}

// ---------------------------------------------------------------------------
// Checkers

namespace {

Check failure(std::string reason, std::optional<NodeIndex> node, std::vector<EdgeId> edges) {
  return {false, std::move(reason), node, std::move(edges)};
}

Check within_capacity(const Graph& g, const EdgeSet& m, const std::vector<std::uint32_t>& cap, const char* what) {
  std::vector<std::vector<EdgeId>> at(g.num_nodes());
  std::vector<std::uint8_t> seen(g.num_edges(), 0);
  for (EdgeId e : m.edges) {
    if (e >= g.num_edges()) return failure(std::string(what) + ": edge id out of range", std::nullopt, {e});
    if (seen[e]) return failure(std::string(what) + ": edge listed twice", std::nullopt, {e});
    seen[e] = 1;
    for (NodeIndex v : {g.edge(e).u, g.edge(e).v}) {
      at[v].push_back(e);
      if (at[v].size() > cap[v])
        return failure(std::string(what) + ": node " + std::to_string(g.id(v)) + " has too many chosen edges", v,
                       at[v]);
    }
  }
  return {};
}

}  // namespace

Check is_matching(const Graph& g, const EdgeSet& m) {
  return within_capacity(g, m, std::vector<std::uint32_t>(g.num_nodes(), 1), "matching");
}

Check is_b_matching(const Graph& g, const BValues& b, const EdgeSet& m) {
  if (b.size() != g.num_nodes()) throw InvalidArgument("is_b_matching: one b-value per node required");
  return within_capacity(g, m, b, "b-matching");
}

Check is_maximal(const Graph& g, const EdgeSet& m) {
  Check c = is_matching(g, m);
  if (!c) return c;
  std::vector<std::uint8_t> matched(g.num_nodes(), 0);
  for (EdgeId e : m.edges) matched[g.edge(e).u] = matched[g.edge(e).v] = 1;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (!matched[g.edge(e).u] && !matched[g.edge(e).v]) return failure("matching is not maximal", std::nullopt, {e});
  return {};
}

Check dominates(const Graph& g, const EdgeSet& d) {
  std::vector<std::uint8_t> touched(g.num_nodes(), 0);
  for (EdgeId e : d.edges) {
    if (e >= g.num_edges()) return failure("edge id out of range", std::nullopt, {e});
    touched[g.edge(e).u] = touched[g.edge(e).v] = 1;
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (!touched[g.edge(e).u] && !touched[g.edge(e).v]) return failure("edge is not dominated", std::nullopt, {e});
  return {};
}

Rational uncovered_edge_fraction(const Graph& g, const EdgeSet& m) {
  if (g.num_edges() == 0) return Rational(0);
  std::vector<std::uint8_t> touched(g.num_nodes(), 0);
  for (EdgeId e : m.edges) touched[g.edge(e).u] = touched[g.edge(e).v] = 1;
  std::int64_t left = 0;
  for (const Edge& e : g.edges()) left += !touched[e.u] && !touched[e.v];
  return Rational(left, static_cast<std::int64_t>(g.num_edges()));
}

Check is_feasible_fractional(const Graph& g, const FractionalAssignment& x, const BValues* b) {
  if (x.exponent.size() != g.num_edges()) return failure("assignment size mismatch", std::nullopt, {});
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    // Sum in units of 2^-level.
    unsigned __int128 load = 0;
    std::vector<EdgeId> at;
    for (const Incidence& inc : g.incident(v)) {
      const std::int8_t k = x.exponent[inc.edge];
      if (k < 0) continue;
      if (static_cast<unsigned>(k) > x.level) return failure("value below 2^-level", v, {inc.edge});
      load += static_cast<unsigned __int128>(1) << (x.level - static_cast<unsigned>(k));
      at.push_back(inc.edge);
    }
    const std::uint64_t cap = b ? (*b)[v] : 1;
    if (load > (static_cast<unsigned __int128>(cap) << x.level))
      return failure("node " + std::to_string(g.id(v)) + " is over capacity", v, at);
  }
  return {};
}

}  // namespace lmatch
