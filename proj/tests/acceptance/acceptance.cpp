// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed below.
//
// Exit status is 0 when every criterion ran to completion, whatever its
// verdict; pass --strict to make any FAIL an error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lmatch/experiment.hpp"
#include "lmatch/fractional.hpp"
#include "lmatch/generators.hpp"
#include "lmatch/matching.hpp"
#include "lmatch/oracles.hpp"
#include "lmatch/rounding.hpp"

using namespace lmatch;

namespace {

// Pinned tolerances.
constexpr double kMinRSquared = 0.95;           // round-scaling fit
constexpr std::size_t kMessageBitsFactor = 8;    // max_message_bits <= C * log2 n
constexpr std::size_t kScalingNodes = 4096;

struct Verdict {
  bool pass = true;
  std::string detail;
  std::size_t checked = 0;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

Dyadic count(std::uint64_t k) { return Dyadic{k, 0}; }

Graph subgraph(const Graph& g, const EdgeMask& keep) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (EdgeId id = 0; id < g.num_edges(); ++id)
    if (keep.test(id)) e.emplace_back(g.id(g.edge(id).u), g.id(g.edge(id).v));
  return Graph::from_edges(std::vector<NodeId>(g.ids().begin(), g.ids().end()), e);
}

std::string tag(const char* what, std::uint64_t seed) { return std::string(what) + " seed " + std::to_string(seed); }

// Random graphs with n <= 60 and a spread of densities.
Graph small_random(std::uint64_t seed) {
  const std::size_t n = 8 + seed * 7 % 53;
  const double p = 0.03 + 0.04 * static_cast<double>(seed % 12);
  return erdos_renyi_graph(n, p, seed);
}

Graph small_bipartite(std::uint64_t seed) {
  const std::size_t a = 4 + seed * 5 % 27, b = 4 + seed * 3 % 27;
  return random_bipartite_graph(a, b, 0.05 + 0.05 * static_cast<double>(seed % 9), seed);
}

// Graphs with at most `max_edges` edges, for the exhaustive oracles.
Graph tiny_random(std::uint64_t seed, std::size_t max_edges) {
  for (std::uint64_t k = 0;; ++k) {
    const std::size_t n = 4 + (seed + k) % 9;
    Graph g = erdos_renyi_graph(n, 0.2 + 0.05 * static_cast<double>((seed + k) % 8), seed * 1000 + k);
    if (g.num_edges() <= max_edges) return g;
  }
}

// ---------------------------------------------------------------------------

Verdict fractional_bound() {
  Verdict v;
  std::set<std::size_t> degrees;
  for (std::uint64_t seed = 1; seed <= 240; ++seed) {
    const Graph g = small_random(seed);
    const auto x = greedy_fractional_matching(g).value;
    const std::uint64_t opt = max_matching_exact(g).value;
    if (!is_feasible_fractional(g, x).ok) v.fail(tag("infeasible", seed));
    if (!x.total().at_least_times(Rational(1, 4), count(opt))) v.fail(tag("4*sum < |M*|", seed));
    degrees.insert(g.max_degree());
    ++v.checked;
  }
  if (v.pass) v.detail = std::to_string(v.checked) + " graphs, " + std::to_string(degrees.size()) + " distinct max degrees";
  return v;
}

Verdict rounding_chain() {
  Verdict v;
  std::set<unsigned> levels;
  for (unsigned level : {5u, 6u, 7u}) {
    const std::size_t d = std::size_t{1} << level;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const Graph g = random_bipartite_graph(d, d + d / 2, 0.55, seed * 31 + level);
      if (ceil_log2(g.max_degree()) != level) continue;
      const auto x = greedy_fractional_matching(g).value;
      std::vector<PhaseReport> reports;
      Traced<FractionalAssignment> y;
      try {
        y = round_to_almost_integral(g, x, *g.coloring(), {std::nullopt, &reports});
      } catch (const InvariantViolation& e) {
        v.fail(tag(e.what(), seed));
        continue;
      }
      if (y.value.level != 4 || y.value.max_exponent() > 4) v.fail(tag("level above 4", seed));
      if (!is_feasible(g, y.value)) v.fail(tag("infeasible", seed));
      for (const PhaseReport& r : reports)
        if (!r.sum_after.at_least_times(phase_keep_factor(r.exponent, r.ell), r.sum_before))
          v.fail(tag("phase loss bound", seed));
      if (reports.size() != level - 4) v.fail(tag("phase count", seed));
      const std::uint64_t opt = max_matching_exact(g).value;
      if (!y.value.total().at_least_times(Rational(1, 14), count(opt))) v.fail(tag("14*sum < |M*|", seed));
      levels.insert(level);
      ++v.checked;
    }
  }
  if (levels.size() != 3) v.fail("missing a degree class");
  if (v.pass) v.detail = std::to_string(v.checked) + " instances with Δ in (16,32], (32,64], (64,128]";
  return v;
}

Verdict constant_approximation() {
  Verdict v;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const Graph b = small_bipartite(seed);
    const auto mb = const_approx_bipartite(b).value;
    if (!is_matching(b, mb).ok) v.fail(tag("bipartite: not a matching", seed));
    if (!scaled_at_least(Rational(kBipartiteApprox), mb.size(), Rational(1), max_matching_exact(b).value))
      v.fail(tag("bipartite bound", seed));
    const Graph g = small_random(seed);
    const auto mg = const_approx_general(g).value;
    if (!is_matching(g, mg).ok) v.fail(tag("general: not a matching", seed));
    if (!scaled_at_least(Rational(kGeneralApprox), mg.size(), Rational(1), max_matching_exact(g).value))
      v.fail(tag("general bound", seed));
    v.checked += 2;
  }
  if (v.pass) v.detail = std::to_string(v.checked) + " instances";
  return v;
}

Verdict two_plus_eps() {
  Verdict v;
  for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 10)}) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      const Graph g = small_random(seed + 500);
      const auto m = approx_matching(g, eps).value;
      if (!is_matching(g, m).ok) v.fail(tag("not a matching", seed));
      const std::uint64_t opt = max_matching_exact(g).value;
      if (!scaled_at_least(Rational(2) + eps, m.size(), Rational(1), opt))
        v.fail(tag(("bound at eps " + eps.to_string()).c_str(), seed));
      const std::uint64_t rest = max_matching_exact(subgraph(g, uncovered_edges(g, m))).value;
      if (!scaled_at_least(eps, opt, Rational(1), rest)) v.fail(tag("remainder above eps*|M*|", seed));
      ++v.checked;
    }
  }
  if (v.pass) v.detail = std::to_string(v.checked) + " runs over 200 graphs";
  return v;
}

Verdict maximality() {
  Verdict v;
  std::vector<std::pair<std::string, Graph>> corpus;
  for (std::size_t n : {2u, 17u, 1000u, 100000u}) corpus.emplace_back("path " + std::to_string(n), path_graph(n));
  for (std::size_t n : {3u, 5u, 64u, 100000u}) corpus.emplace_back("cycle " + std::to_string(n), cycle_graph(n));
  for (std::size_t k : {1u, 7u, 500u}) corpus.emplace_back("star " + std::to_string(k), star_graph(k));
  corpus.emplace_back("grid 10x10", grid_graph(10, 10));
  corpus.emplace_back("grid 300x300", grid_graph(300, 300));
  for (std::size_t d : {3u, 8u, 32u})
    for (std::size_t n : {100u, 10000u}) corpus.emplace_back("regular", random_regular_graph(d, n, d * n));
  corpus.emplace_back("regular 3 x 100000", random_regular_graph(3, 100000, 5));
  for (std::uint64_t seed = 1; seed <= 30; ++seed) corpus.emplace_back("random", small_random(seed));
  for (const auto& [label, g] : corpus) {
    const auto m = maximal_matching(g).value;
    const Check c = is_maximal(g, m);
    if (!c.ok) v.fail(label + ": " + c.reason);
    ++v.checked;
  }
  if (v.pass) v.detail = std::to_string(v.checked) + " graphs, largest n = 100000";
  return v;
}

Verdict eps_maximality() {
  Verdict v;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Graph g = seed % 2 ? small_random(seed) : random_regular_graph(4 + seed % 5, 200, seed);
    const auto single = const_almost_maximal(g).value;
    if (!is_matching(g, single).ok) v.fail(tag("not a matching", seed));
    if (uncovered_edge_fraction(g, single) > Rational(511, 512)) v.fail(tag("single shot above 511/512", seed));
    for (const Rational eps : {Rational(1, 2), Rational(1, 16), Rational(1, 256)}) {
      const auto m = eps_maximal_matching(g, eps).value;
      if (!is_matching(g, m).ok) v.fail(tag("not a matching", seed));
      if (uncovered_edge_fraction(g, m) > eps) v.fail(tag(("uncovered above " + eps.to_string()).c_str(), seed));
      ++v.checked;
    }
  }
  if (v.pass) v.detail = std::to_string(v.checked) + " runs";
  return v;
}

Verdict weighted_bounds() {
  Verdict v;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 10 + seed % 31;
    const Graph g = with_random_weights(erdos_renyi_graph(n, 0.06 + 0.02 * static_cast<double>(seed % 6), seed), 64, seed);
    const std::uint64_t opt = max_weighted_matching_exact(g).value;
    const auto c = const_approx_weighted(g).value;
    if (!is_matching(g, c).ok) v.fail(tag("not a matching", seed));
    if (!scaled_at_least(Rational(kWeightedApprox), total_weight(g, c), Rational(1), opt)) v.fail(tag("256 bound", seed));
    for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 10)}) {
      const auto m = approx_weighted_matching(g, eps).value;
      if (!is_matching(g, m).ok) v.fail(tag("not a matching", seed));
      if (!scaled_at_least(Rational(2) + eps, total_weight(g, m), Rational(1), opt))
        v.fail(tag(("2+eps bound at eps " + eps.to_string()).c_str(), seed));
    }
    ++v.checked;
  }
  if (v.pass) v.detail = std::to_string(v.checked) + " graphs, n <= 40, W <= 64";
  return v;
}

BValues some_b(const Graph& g, std::uint64_t seed) {
  BValues b(g.num_nodes());
  for (NodeIndex u = 0; u < g.num_nodes(); ++u) {
    const std::size_t d = std::max<std::size_t>(g.degree(u), 1);
    b[u] = static_cast<std::uint32_t>(1 + (g.id(u) * 7 + seed) % d);
  }
  return b;
}

Verdict b_matching() {
  Verdict v;
  std::size_t oracle_checked = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const bool tiny = seed % 3 != 0;
    const Graph g = tiny ? tiny_random(seed, 24) : random_regular_graph(3 + seed % 6, 120, seed);
    const BValues b = some_b(g, seed);
    for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 10)}) {
      const auto m = approx_b_matching(g, b, eps).value;
      const Check c = is_b_matching(g, b, m);
      if (!c.ok) v.fail(tag(c.reason.c_str(), seed));
      if (tiny) {
        if (!scaled_at_least(Rational(2) + eps, m.size(), Rational(1), max_b_matching_exact(g, b).value))
          v.fail(tag(("bound at eps " + eps.to_string()).c_str(), seed));
        ++oracle_checked;
      }
      ++v.checked;
    }
  }
  if (v.pass)
    v.detail = std::to_string(v.checked) + " runs valid, " + std::to_string(oracle_checked) + " against the exhaustive oracle";
  return v;
}

Verdict edge_domination() {
  Verdict v;
  std::size_t oracle_checked = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const bool tiny = seed % 4 != 0;
    const Graph g = tiny ? tiny_random(seed + 7000, 20) : erdos_renyi_graph(150, 0.04, seed);
    for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 10)}) {
      const auto d = approx_edge_dominating_set(g, eps).value;
      const Check c = dominates(g, d);
      if (!c.ok) v.fail(tag(c.reason.c_str(), seed));
      if (tiny) {
        if (!scaled_at_least(Rational(2) + eps, min_eds_exact(g).value, Rational(1), d.size()))
          v.fail(tag(("bound at eps " + eps.to_string()).c_str(), seed));
        ++oracle_checked;
      }
      ++v.checked;
    }
  }
  if (v.pass)
    v.detail = std::to_string(v.checked) + " runs dominate, " + std::to_string(oracle_checked) + " against the exhaustive oracle";
  return v;
}

// Largest max_message_bits / log2 n seen so far, with the instance.
struct BitsRecord {
  double worst_ratio = 0;
  std::string where;

  void add(const std::string& label, std::size_t n, std::size_t bits) {
    const double ratio = static_cast<double>(bits) / std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      where = label + " (n=" + std::to_string(n) + ", " + std::to_string(bits) + " bits)";
    }
  }
};

char buf[512];

Verdict round_scaling(BitsRecord& bits) {
  Verdict v;
  std::vector<ResultRow> rows;
  for (std::size_t d : {4u, 8u, 16u, 32u, 64u, 128u, 256u}) {
    const Graph g = random_regular_graph(d, kScalingNodes, d);
    for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 10)}) {
      const auto out = run_experiment(g, {"regular d=" + std::to_string(d), "approx_matching", eps, std::nullopt, OracleMode::Off});
      if (!out.row.valid) v.fail("invalid matching at d=" + std::to_string(d));
      bits.add(out.row.graph + " approx_matching", out.row.n, out.row.max_message_bits);
      rows.push_back(out.row);
    }
  }
  const ScalingReport rep = scaling_report(rows);
  std::string per_eps;
  for (const auto& [eps, fit] : rep.per_eps) {
    std::snprintf(buf, sizeof buf, "%s eps=%s R2=%.3f", per_eps.empty() ? "" : ";", eps.c_str(), fit.r_squared);
    per_eps += buf;
  }
  std::snprintf(buf, sizeof buf, "R2=%.3f (need %.2f), rounds %zu..%zu, monotone in Δ: %s, in eps: %s; per eps:%s",
                rep.overall.r_squared, kMinRSquared, rows.front().rounds_used, rows.back().rounds_used,
                rep.monotone_in_delta ? "yes" : "no", rep.monotone_in_eps ? "yes" : "no", per_eps.c_str());
  const std::string summary = buf;
  if (rep.overall.r_squared < kMinRSquared || !rep.monotone_in_delta || !rep.monotone_in_eps) v.fail(summary);
  v.detail = summary;
  v.checked = rows.size();
  return v;
}

struct Snapshot {
  EdgeSet edges;
  sim::RoundTrace trace;
  bool operator==(const Snapshot&) const = default;
};

Verdict determinism(BitsRecord& bits) {
  Verdict v;
  std::vector<std::pair<std::string, Graph>> corpus;
  for (std::uint64_t seed = 1; seed <= 25; ++seed)
    corpus.emplace_back(tag("bipartite", seed), with_random_weights(small_bipartite(seed), 64, seed));
  for (std::uint64_t seed = 1; seed <= 25; ++seed)
    corpus.emplace_back(tag("random", seed), with_random_weights(small_random(seed + 900), 64, seed));

  const std::vector<sim::SchedulingOverride> orders{
      {sim::StepOrder::Ascending, 0}, {sim::StepOrder::Ascending, 0}, {sim::StepOrder::Descending, 0},
      {sim::StepOrder::Shuffled, 1},  {sim::StepOrder::Shuffled, 99}};
  std::size_t runs = 0;
  for (const auto& [label, g] : corpus) {
    const BValues b = some_b(g, 3);
    for (const std::string& algo : algorithm_names()) {
      if (algo == "const_approx_bipartite" && !g.coloring()) continue;
      std::optional<Rational> eps;
      if (algorithm_needs_eps(algo)) eps = Rational(1, 2);
      std::vector<Snapshot> seen;
      for (const auto& order : orders) {
        sim::default_scheduling() = order;
        const auto out = run_algorithm(g, algo, eps, &b);
        seen.push_back({out.edges, out.trace});
        ++runs;
      }
      sim::default_scheduling() = {};
      bits.add(label + " " + algo, g.num_nodes(), seen.front().trace.max_message_bits);
      for (const Snapshot& s : seen)
        if (!(s == seen.front())) v.fail(label + " " + algo + ": output or trace differs");
    }
    ++v.checked;
  }
  if (v.pass) v.detail = std::to_string(v.checked) + " instances, " + std::to_string(runs) + " runs, 3 step orders";
  return v;
}

Verdict message_size(const BitsRecord& bits) {
  Verdict v;
  std::snprintf(buf, sizeof buf, "worst bits/log2(n) = %.2f (C = %zu) at %s", bits.worst_ratio, kMessageBitsFactor,
                bits.where.c_str());
  if (bits.worst_ratio > static_cast<double>(kMessageBitsFactor)) v.fail(buf);
  v.detail = buf;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  BitsRecord bits;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"fractional bound", fractional_bound},
      {"rounding chain", rounding_chain},
      {"constant approximation", constant_approximation},
      {"(2+eps) approximation", two_plus_eps},
      {"maximality", maximality},
      {"eps-maximality", eps_maximality},
      {"weighted bounds", weighted_bounds},
      {"b-matching", b_matching},
      {"edge dominating set", edge_domination},
      {"round scaling", [&] { return round_scaling(bits); }},
      {"determinism and scheduling", [&] { return determinism(bits); }},
      {"message size", [&] { return message_size(bits); }},
  };
  int failed = 0, number = 0;
  for (const auto& [name, check] : criteria) {
    ++number;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", number, name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", number - failed, number);
  return strict && failed > 0 ? 1 : 0;
}
