#include "lmatch/local_sim.hpp"

namespace lmatch::sim {

Topology::Topology(const Graph& g) : Topology(g, EdgeMask(g.num_edges(), true)) {}

Topology::Topology(const Graph& g, const EdgeMask& active) {
  const std::size_t n = g.num_nodes();
  if (active.size() != g.num_edges()) throw InvalidArgument("edge mask does not match the graph");
  ids_.assign(g.ids().begin(), g.ids().end());
  offsets_.assign(n + 1, 0);
  for (NodeIndex v = 0; v < n; ++v) {
    std::size_t d = 0;
    for (const Incidence& inc : g.incident(v)) d += active.test(inc.edge) ? 1 : 0;
    offsets_[v + 1] = offsets_[v] + d;
    max_degree_ = std::max(max_degree_, d);
  }
  ports_.resize(offsets_[n]);
  // Port position of each active edge at its u-endpoint, for reverse links.
  std::vector<std::uint32_t> pos_at_u(g.num_edges(), 0);
  for (NodeIndex v = 0; v < n; ++v) {
    std::uint32_t p = 0;
    for (const Incidence& inc : g.incident(v)) {
      if (!active.test(inc.edge)) continue;
      ports_[offsets_[v] + p] = {inc.neighbor, inc.edge, 0};
      if (g.edge(inc.edge).u == v) pos_at_u[inc.edge] = p;
      ++p;
    }
  }
  for (NodeIndex v = 0; v < n; ++v) {
    for (std::size_t p = offsets_[v]; p < offsets_[v + 1]; ++p) {
      Port& port = ports_[p];
      if (g.edge(port.edge).u == v) continue;
      const NodeIndex u = port.neighbor;
      const std::uint32_t pu = pos_at_u[port.edge];
      port.reverse = pu;
      ports_[offsets_[u] + pu].reverse = static_cast<std::uint32_t>(p - offsets_[v]);
    }
  }
  num_edges_ = offsets_[n] / 2;
}

Globals Globals::of(const Topology& topo) {
  return Globals{topo.num_nodes(), topo.max_degree(), ceil_log2(topo.max_degree())};
}

void RoundTrace::append(const RoundTrace& next) {
  for (PhaseAnnotation a : next.phases) {
    a.begin += rounds_used;
    a.end += rounds_used;
    phases.push_back(std::move(a));
  }
  rounds_used += next.rounds_used;
  messages_sent += next.messages_sent;
  max_message_bits = std::max(max_message_bits, next.max_message_bits);
}

void RoundTrace::append_as(const std::string& label, const RoundTrace& next, double metric) {
  phases.push_back({label, rounds_used, rounds_used + next.rounds_used, metric});
  rounds_used += next.rounds_used;
  messages_sent += next.messages_sent;
  max_message_bits = std::max(max_message_bits, next.max_message_bits);
}

RoundTrace RoundTrace::parallel(std::span<const RoundTrace> traces) {
  RoundTrace out;
  for (const RoundTrace& t : traces) {
    out.rounds_used = std::max(out.rounds_used, t.rounds_used);
    out.messages_sent += t.messages_sent;
    out.max_message_bits = std::max(out.max_message_bits, t.max_message_bits);
  }
  return out;
}

SchedulingOverride& default_scheduling() {
  static SchedulingOverride instance;
  return instance;
}

}  // namespace lmatch::sim
