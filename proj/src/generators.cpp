#include "lmatch/generators.hpp"

#include <cmath>
#include <random>
#include <unordered_map>
#include <vector>

namespace lmatch {

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

// mt19937_64 is specified exactly by the standard; the distributions are not,
// so draws are mapped to ranges here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = gen_();
    while (x >= limit);
    return x % bound;
  }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return a << 32 | b;
}

Graph with_sides(Graph g, std::size_t a) {
  std::vector<Color> c(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) c[v] = g.id(v) < a ? 0 : 1;
  return g.with_coloring(std::move(c));
}

}  // namespace

Graph path_graph(std::size_t n) {
  EdgeList e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(i - 1, i);
  return Graph::from_edges(n, e);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle needs at least 3 nodes");
  EdgeList e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, e);
}

Graph star_graph(std::size_t leaves) {
  EdgeList e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

Graph complete_bipartite_graph(std::size_t a, std::size_t b) {
  EdgeList e;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return with_sides(Graph::from_edges(a + b, e), a);
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
  EdgeList e;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      if (c + 1 < cols) e.emplace_back(v, v + 1);
      if (r + 1 < rows) e.emplace_back(v, v + cols);
    }
  Graph g = Graph::from_edges(rows * cols, e);
  std::vector<Color> col(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) col[v] = (g.id(v) / cols + g.id(v) % cols) % 2;
  return g.with_coloring(std::move(col));
}

Graph random_regular_graph(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (d >= n && !(d == 0)) throw InvalidArgument("random_regular: need d < n");
  if ((d * n) % 2 != 0) throw InvalidArgument("random_regular: d*n must be even");
  Rng rng(seed);
  std::vector<NodeId> points;
  points.reserve(d * n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < d; ++k) points.push_back(v);
  for (std::size_t i = points.size(); i > 1; --i) std::swap(points[i - 1], points[rng.below(i)]);
  EdgeList edges;
  for (std::size_t i = 0; i + 1 < points.size(); i += 2) edges.emplace_back(points[i], points[i + 1]);

  std::unordered_map<std::uint64_t, std::uint32_t> count;
  for (auto [a, b] : edges) ++count[key(a, b)];
  auto bad = [&](std::size_t i) {
    auto [a, b] = edges[i];
    return a == b || count[key(a, b)] > 1;
  };
  const std::size_t limit = 1000 * (edges.size() + 10);
  std::size_t attempts = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    while (bad(i)) {
      if (++attempts > limit) throw Error("random_regular: could not remove parallel edges");
      const std::size_t j = rng.below(edges.size());
      if (j == i) continue;
      auto [u, v] = edges[i];
      auto [x, y] = edges[j];
      if (rng.below(2)) std::swap(x, y);
      if (u == x || v == y || count.contains(key(u, x)) || count.contains(key(v, y))) continue;
      if (key(u, x) == key(v, y)) continue;
      for (auto k : {key(u, v), key(x, y)})
        if (--count[k] == 0) count.erase(k);
      edges[i] = {u, x};
      edges[j] = {v, y};
      ++count[key(u, x)];
      ++count[key(v, y)];
      if (j < i && bad(j)) i = j;  // revisit an earlier edge if the swap broke it
    }
  }
  return Graph::from_edges(n, edges);
}

Graph erdos_renyi_graph(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("erdos_renyi: p must lie in [0, 1]");
  Rng rng(seed);
  EdgeList e;
  if (p > 0 && n > 1) {
    // Geometric skipping over the pairs (v, w), w < v.
    const double lq = std::log1p(-p);
    std::int64_t v = 1, w = -1;
    while (v < static_cast<std::int64_t>(n)) {
      const double r = rng.unit();
      w += 1 + (p >= 1 ? 0 : static_cast<std::int64_t>(std::floor(std::log1p(-r) / lq)));
      while (w >= v && v < static_cast<std::int64_t>(n)) {
        w -= v;
        ++v;
      }
      if (v < static_cast<std::int64_t>(n)) e.emplace_back(w, v);
    }
  }
  return Graph::from_edges(n, e);
}

Graph random_bipartite_graph(std::size_t a, std::size_t b, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("random_bipartite: p must lie in [0, 1]");
  Rng rng(seed);
  EdgeList e;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      if (rng.unit() < p) e.emplace_back(i, a + j);
  return with_sides(Graph::from_edges(a + b, e), a);
}

Graph with_random_weights(const Graph& g, std::uint64_t max_weight, std::uint64_t seed) {
  if (max_weight == 0) throw InvalidArgument("weights: maximum weight must be positive");
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Weight> w(g.num_edges());
  for (auto& x : w) x = 1 + rng.below(max_weight);
  return g.with_weights(std::move(w));
}

namespace {

const std::string& need(const GeneratorParams& p, const std::string& name, const std::string& kind) {
  auto it = p.find(name);
  if (it == p.end()) throw InvalidArgument(kind + ": missing parameter '" + name + "'");
  return it->second;
}

std::size_t size_param(const GeneratorParams& p, const std::string& name, const std::string& kind) {
  const std::string& s = need(p, name, kind);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidArgument(kind + ": parameter '" + name + "' must be a non-negative integer");
  return std::stoull(s);
}

double prob_param(const GeneratorParams& p, const std::string& name, const std::string& kind) {
  try {
    std::size_t used = 0;
    const std::string& s = need(p, name, kind);
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::logic_error&) {
    throw InvalidArgument(kind + ": parameter '" + name + "' must be a number");
  }
}

}  // namespace

Graph generate(const std::string& kind, const GeneratorParams& params, std::uint64_t seed) {
  Graph g;
  if (kind == "path") {
    g = path_graph(size_param(params, "n", kind));
  } else if (kind == "cycle") {
    g = cycle_graph(size_param(params, "n", kind));
  } else if (kind == "star") {
    g = star_graph(size_param(params, "k", kind));
  } else if (kind == "complete_bipartite") {
    g = complete_bipartite_graph(size_param(params, "a", kind), size_param(params, "b", kind));
  } else if (kind == "grid") {
    g = grid_graph(size_param(params, "rows", kind), size_param(params, "cols", kind));
  } else if (kind == "random_regular") {
    g = random_regular_graph(size_param(params, "d", kind), size_param(params, "n", kind), seed);
  } else if (kind == "erdos_renyi") {
    g = erdos_renyi_graph(size_param(params, "n", kind), prob_param(params, "p", kind), seed);
  } else if (kind == "random_bipartite") {
    g = random_bipartite_graph(size_param(params, "a", kind), size_param(params, "b", kind),
                               prob_param(params, "p", kind), seed);
  } else {
    throw InvalidArgument("unknown generator kind '" + kind + "'");
  }
  if (params.contains("weights")) g = with_random_weights(g, size_param(params, "weights", kind), seed);
  return g;
}

}  // namespace lmatch
