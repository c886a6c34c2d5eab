#pragma once

// Round-synchronous LOCAL-model execution engine.
//
// Round r: every awake node runs its step on the messages sent to it in round
// r-1 and may send at most one message per incident port. Messages are
// delivered after all nodes of the round have stepped, so the step order
// inside a round cannot influence the outcome.
//
// A node's step returns what it waits for next: the next round, a timer, any
// incoming message (idle), or nothing (halt). Idle nodes cost nothing until a
// message arrives. A run ends when no node is awake, no timer is pending and
// no message is in flight.
//
// rounds_used counts communication rounds: the last round in which a
// message was sent, or the round before the last step that only consumed
// input. Programs that halt without sending therefore take 0 rounds.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmatch/graph.hpp"

namespace lmatch::sim {

struct Port {
  NodeIndex neighbor;
  EdgeId edge;
  std::uint32_t reverse;  // index of this edge in the neighbor's port list
};

/// Communication graph of one run: a Graph restricted to an edge mask.
/// Ports of a node are ordered by ascending EdgeId.
class Topology {
 public:
  explicit Topology(const Graph& g);
  Topology(const Graph& g, const EdgeMask& active);

  std::size_t num_nodes() const { return ids_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t max_degree() const { return max_degree_; }
  NodeId id(NodeIndex v) const { return ids_[v]; }
  std::span<const Port> ports(NodeIndex v) const {
    return {ports_.data() + offsets_[v], ports_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }

 private:
  std::vector<NodeId> ids_;
  std::vector<std::size_t> offsets_;
  std::vector<Port> ports_;
  std::size_t num_edges_ = 0;
  std::size_t max_degree_ = 0;
};

/// Global knowledge handed to every node at start.
struct Globals {
  std::size_t n = 0;
  std::size_t max_degree = 0;
  unsigned log_delta = 0;  // ceil(log2 max_degree)

  static Globals of(const Topology& topo);
};

class Next {
 public:
  enum class Kind : std::uint8_t { Halt, Idle, NextRound, At };

  static Next halt() { return Next(Kind::Halt, 0); }
  static Next idle() { return Next(Kind::Idle, 0); }
  static Next next_round() { return Next(Kind::NextRound, 0); }
  static Next at(std::size_t round) { return Next(Kind::At, round); }

  Kind kind() const { return kind_; }
  std::size_t round() const { return round_; }

 private:
  Next(Kind k, std::size_t r) : kind_(k), round_(r) {}
  Kind kind_;
  std::size_t round_;
};

template <class Msg>
struct Envelope {
  std::uint32_t port;
  Msg msg;
};

class EngineError : public Error {
 public:
  using Error::Error;
};

struct PhaseAnnotation {
  std::string label;
  std::size_t begin = 0;  // [begin, end) in rounds of the enclosing trace
  std::size_t end = 0;
  double metric = 0.0;

  bool operator==(const PhaseAnnotation&) const = default;
};

struct RoundTrace {
  std::size_t rounds_used = 0;
  std::size_t messages_sent = 0;
  std::size_t max_message_bits = 0;
  std::vector<PhaseAnnotation> phases;

  /// Sequential composition: `next` starts after the rounds used so far.
  void append(const RoundTrace& next);
  /// Sequential composition as one labelled span.
  void append_as(const std::string& label, const RoundTrace& next, double metric = 0.0);
  /// Runs executed side by side: rounds take the max, messages add up.
  static RoundTrace parallel(std::span<const RoundTrace> traces);

  bool operator==(const RoundTrace&) const = default;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, RoundTrace partial)
      : Error(std::move(what)), partial_(std::move(partial)) {}
  const RoundTrace& partial_trace() const { return partial_; }

 private:
  RoundTrace partial_;
};

template <class Msg>
class Outbox {
 public:
  Outbox(std::vector<Envelope<Msg>>& items, std::uint32_t degree) : items_(&items), degree_(degree) {}

  void send(std::uint32_t port, Msg msg) {
    if (port >= degree_)
      throw EngineError("message addressed to port " + std::to_string(port) +
                        " of a node with degree " + std::to_string(degree_));
    items_->push_back({port, std::move(msg)});
  }
  void broadcast(const Msg& msg) {
    for (std::uint32_t p = 0; p < degree_; ++p) send(p, msg);
  }
  std::uint32_t degree() const { return degree_; }

 private:
  std::vector<Envelope<Msg>>* items_;
  std::uint32_t degree_;
};

struct NodeContext {
  NodeIndex node;
  NodeId id;
  std::span<const Port> ports;
  std::size_t round;  // 1-based, local to the current program
  const Globals& globals;
};

template <class State, class Msg>
struct NodeProgram {
  std::string label;
  std::function<Next(const NodeContext&, State&, std::span<const Envelope<Msg>>, Outbox<Msg>&)> step;
};

enum class StepOrder : std::uint8_t { Ascending, Descending, Shuffled };

template <class State>
struct RunOptions {
  std::size_t round_budget = 10'000'000;
  StepOrder order = StepOrder::Ascending;
  std::uint64_t seed = 0;                  // used by StepOrder::Shuffled
  std::optional<Globals> globals;          // defaults to Globals::of(topology)
  std::function<void(std::size_t, std::span<const State>)> on_round;  // after each executed round
};

template <class State>
struct RunResult {
  std::vector<State> states;
  RoundTrace trace;
};

/// Process-wide default step order, used when a caller does not pass an
/// explicit RunOptions. Lets tests re-run whole pipelines under a different
/// scheduling order.
struct SchedulingOverride {
  StepOrder order = StepOrder::Ascending;
  std::uint64_t seed = 0;
};
SchedulingOverride& default_scheduling();

template <class State, class Msg>
RunResult<State> run(const Topology& topo, std::vector<State> states,
                     const NodeProgram<State, Msg>& program, const RunOptions<State>& opts) {
  const std::size_t n = topo.num_nodes();
  if (states.size() != n) throw EngineError("one state per node required");
  if (opts.round_budget == 0) throw InvalidArgument("round budget must be positive");
  const Globals globals = opts.globals.value_or(Globals::of(topo));

  RoundTrace trace;
  std::vector<std::vector<Envelope<Msg>>> inbox(n), next_inbox(n), outbox(n);
  std::vector<std::uint8_t> halted(n, 0), queued(n, 0);
  std::vector<std::size_t> timer(n, 0);
  std::map<std::size_t, std::vector<NodeIndex>> timers;
  std::vector<Next> decision(n, Next::idle());
  std::vector<NodeIndex> awake(n), order, receivers;
  for (NodeIndex v = 0; v < n; ++v) awake[v] = v;
  std::mt19937_64 rng(opts.seed);

  std::size_t round = 1;
  while (!awake.empty()) {
    if (round > opts.round_budget)
      throw BudgetExceeded("round budget of " + std::to_string(opts.round_budget) + " exhausted in '" +
                               program.label + "'",
                           trace);
    std::sort(awake.begin(), awake.end());
    order = awake;
    if (opts.order == StepOrder::Descending) {
      std::reverse(order.begin(), order.end());
    } else if (opts.order == StepOrder::Shuffled) {
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (NodeIndex v : order) {
      Outbox<Msg> out(outbox[v], static_cast<std::uint32_t>(topo.degree(v)));
      const NodeContext ctx{v, topo.id(v), topo.ports(v), round, globals};
      decision[v] = program.step(ctx, states[v], inbox[v], out);
    }

    bool sent = false;
    receivers.clear();
    for (NodeIndex v : awake) {
      auto& out = outbox[v];
      std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.port < b.port; });
      const auto ports = topo.ports(v);
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (i > 0 && out[i].port == out[i - 1].port)
          throw EngineError("node " + std::to_string(topo.id(v)) + " sent twice on one port in '" +
                            program.label + "'");
        const Port& p = ports[out[i].port];
        trace.max_message_bits = std::max<std::size_t>(trace.max_message_bits, out[i].msg.bits());
        ++trace.messages_sent;
        if (next_inbox[p.neighbor].empty()) receivers.push_back(p.neighbor);
        next_inbox[p.neighbor].push_back({p.reverse, std::move(out[i].msg)});
        sent = true;
      }
      out.clear();
      inbox[v].clear();
    }
    trace.rounds_used = sent ? round : std::max(trace.rounds_used, round - 1);
    if (opts.on_round) opts.on_round(round, states);

    std::vector<NodeIndex> next_awake;
    auto wake = [&](NodeIndex v) {
      if (!queued[v] && !halted[v]) {
        queued[v] = 1;
        next_awake.push_back(v);
      }
    };
    for (NodeIndex v : awake) {
      timer[v] = 0;
      switch (decision[v].kind()) {
        case Next::Kind::Halt:
          halted[v] = 1;
          break;
        case Next::Kind::Idle:
          break;
        case Next::Kind::NextRound:
          wake(v);
          break;
        case Next::Kind::At:
          if (decision[v].round() <= round + 1) {
            wake(v);
          } else {
            timer[v] = decision[v].round();
            timers[timer[v]].push_back(v);
          }
          break;
      }
    }
    for (NodeIndex v : receivers) {
      if (halted[v]) {
        next_inbox[v].clear();
        continue;
      }
      wake(v);
    }
    std::size_t next_round = round + 1;
    if (next_awake.empty()) {
      // Fast-forward to the earliest live timer.
      while (!timers.empty()) {
        auto it = timers.begin();
        bool live = false;
        for (NodeIndex v : it->second)
          if (!halted[v] && timer[v] == it->first) live = true;
        if (live) break;
        timers.erase(it);
      }
      if (!timers.empty()) next_round = timers.begin()->first;
    }
    if (auto it = timers.find(next_round); it != timers.end()) {
      for (NodeIndex v : it->second)
        if (timer[v] == next_round) wake(v);
      timers.erase(it);
    }
    for (NodeIndex v : next_awake) {
      queued[v] = 0;
      std::swap(inbox[v], next_inbox[v]);
      next_inbox[v].clear();
      std::sort(inbox[v].begin(), inbox[v].end(),
                [](const auto& a, const auto& b) { return a.port < b.port; });
    }
    awake = std::move(next_awake);
    round = next_round;
  }
  return {std::move(states), std::move(trace)};
}

/// Options using the process-wide step order, with optional global knowledge.
template <class State>
RunOptions<State> default_options(std::optional<Globals> globals = std::nullopt) {
  RunOptions<State> opts;
  opts.order = default_scheduling().order;
  opts.seed = default_scheduling().seed;
  opts.globals = globals;
  return opts;
}

template <class State, class Msg>
RunResult<State> run(const Topology& topo, std::vector<State> states, const NodeProgram<State, Msg>& program) {
  return run(topo, std::move(states), program, default_options<State>());
}

/// Runs programs one after another, each to global halt, threading states.
/// The trace carries one annotation per program.
template <class State, class Msg>
RunResult<State> run_phased(const Topology& topo, std::vector<State> states,
                            std::span<const NodeProgram<State, Msg>> phases, RunOptions<State> opts) {
  RoundTrace total;
  const std::size_t budget = opts.round_budget;
  for (const auto& phase : phases) {
    if (total.rounds_used >= budget)
      throw BudgetExceeded("round budget exhausted before phase '" + phase.label + "'", total);
    opts.round_budget = budget - total.rounds_used;
    try {
      auto result = run(topo, std::move(states), phase, opts);
      states = std::move(result.states);
      total.append_as(phase.label, result.trace);
    } catch (const BudgetExceeded& e) {
      RoundTrace partial = total;
      partial.append_as(phase.label, e.partial_trace());
      throw BudgetExceeded(e.what(), partial);
    }
  }
  return {std::move(states), std::move(total)};
}

template <class State, class Msg>
RunResult<State> run_phased(const Topology& topo, std::vector<State> states,
                            std::span<const NodeProgram<State, Msg>> phases) {
  return run_phased(topo, std::move(states), phases, default_options<State>());
}

/// Bits needed for an unsigned value (at least 1).
inline std::size_t bits_for(std::uint64_t x) {
  std::size_t b = 1;
  while (x >>= 1) ++b;
  return b;
}

}  // namespace lmatch::sim
