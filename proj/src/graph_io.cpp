#include "lmatch/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace lmatch {

namespace {

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw InvalidArgument("graph file line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_u64(const std::string& token, std::size_t line_no) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
    fail(line_no, "expected a non-negative integer, got '" + token + "'");
  try {
    return std::stoull(token);
  } catch (const std::out_of_range&) {
    fail(line_no, "integer out of range: " + token);
  }
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw InvalidArgument("graph file: missing header line");
  auto header = tokens_of(line);
  if (header.size() < 2) fail(line_no, "header must be 'n m [weighted] [bvalues]'");
  const std::uint64_t n = parse_u64(header[0], line_no);
  const std::uint64_t m = parse_u64(header[1], line_no);
  bool weighted = false, bvalues = false;
  for (std::size_t k = 2; k < header.size(); ++k) {
    if (header[k] == "weighted") {
      weighted = true;
    } else if (header[k] == "bvalues") {
      bvalues = true;
    } else {
      fail(line_no, "unknown header flag '" + header[k] + "'");
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<Weight> weights;
  edges.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    if (!next_line(in, line, line_no)) throw InvalidArgument("graph file: expected " + std::to_string(m) + " edges");
    auto t = tokens_of(line);
    if (t.size() != (weighted ? 3u : 2u)) fail(line_no, weighted ? "expected 'u v w'" : "expected 'u v'");
    const NodeId u = parse_u64(t[0], line_no), v = parse_u64(t[1], line_no);
    if (u >= n || v >= n) fail(line_no, "node id out of range 0.." + std::to_string(n == 0 ? 0 : n - 1));
    edges.emplace_back(u, v);
    if (weighted) weights.push_back(parse_u64(t[2], line_no));
  }
  Graph g = weighted ? Graph::from_edges(n, edges, weights) : Graph::from_edges(n, edges);
  if (bvalues) {
    std::vector<std::uint32_t> b(n, 0);
    std::vector<std::uint8_t> seen(n, 0);
    for (std::uint64_t k = 0; k < n; ++k) {
      if (!next_line(in, line, line_no)) throw InvalidArgument("graph file: expected " + std::to_string(n) + " b-values");
      auto t = tokens_of(line);
      if (t.size() != 2) fail(line_no, "expected 'v b_v'");
      const std::uint64_t v = parse_u64(t[0], line_no);
      if (v >= n) fail(line_no, "node id out of range");
      if (seen[v]) fail(line_no, "duplicate b-value for node " + t[0]);
      seen[v] = 1;
      b[g.require_index(v)] = static_cast<std::uint32_t>(parse_u64(t[1], line_no));
    }
    g = g.with_b_values(std::move(b));
  }
  if (next_line(in, line, line_no)) fail(line_no, "unexpected trailing content");
  return g;
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges();
  if (g.weighted()) out << " weighted";
  if (g.has_b_values()) out << " bvalues";
  out << '\n';
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    out << g.id(g.edge(e).u) << ' ' << g.id(g.edge(e).v);
    if (g.weighted()) out << ' ' << g.weight(e);
    out << '\n';
  }
  if (g.has_b_values())
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) out << g.id(v) << ' ' << g.b(v) << '\n';
}

std::string graph_to_text(const Graph& g) {
  std::ostringstream ss;
  write_graph(ss, g);
  return ss.str();
}

BValues parse_b_argument(const Graph& g, const std::string& arg) {
  BValues b(g.num_nodes());
  if (arg.rfind("uniform:", 0) == 0) {
    const std::uint64_t k = parse_u64(arg.substr(8), 0);
    if (k == 0) throw InvalidArgument("uniform b-value must be positive");
    for (NodeIndex v = 0; v < g.num_nodes(); ++v)
      b[v] = static_cast<std::uint32_t>(std::min<std::uint64_t>(k, std::max<std::size_t>(g.degree(v), 1)));
    return b;
  }
  std::ifstream in(arg);
  if (!in) throw InvalidArgument("cannot open b-value file " + arg);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::uint8_t> seen(g.num_nodes(), 0);
  while (next_line(in, line, line_no)) {
    auto t = tokens_of(line);
    if (t.size() != 2) fail(line_no, "expected 'v b_v'");
    const NodeIndex v = g.require_index(parse_u64(t[0], line_no));
    if (seen[v]) fail(line_no, "duplicate b-value for node " + t[0]);
    seen[v] = 1;
    b[v] = static_cast<std::uint32_t>(parse_u64(t[1], line_no));
  }
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    if (!seen[v]) throw InvalidArgument("b-value file misses node " + std::to_string(g.id(v)));
  validate_b_values(g, b);
  return b;
}

}  // namespace lmatch
