#include "lmatch/subroutines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace lmatch {

namespace {

using u128 = unsigned __int128;

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t k = 2; k * k <= p; ++k)
    if (p % k == 0) return false;
  return true;
}

std::uint64_t next_prime_above(std::uint64_t x) {
  std::uint64_t p = x + 1;
  while (!is_prime(p)) ++p;
  return p;
}

// p^(d+1) >= q without overflow.
bool power_reaches(std::uint64_t p, unsigned d, u128 q) {
  u128 acc = 1;
  for (unsigned k = 0; k <= d; ++k) {
    acc *= p;
    if (acc >= q) return true;
  }
  return acc >= q;
}

// Smallest r with r^k >= q.
std::uint64_t smallest_root(u128 q, unsigned k) {
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(q), 1.0L / k));
  while (r > 1 && power_reaches(r - 1, k - 1, q)) --r;
  while (!power_reaches(r, k - 1, q)) ++r;
  return std::max<std::uint64_t>(r, 2);
}

std::uint64_t eval_poly(Color c, const ReductionStep& s, std::uint64_t a) {
  // Horner over the base-p digits of c, most significant first.
  std::uint64_t digits[65];
  for (unsigned k = 0; k <= s.d; ++k) {
    digits[k] = c % s.p;
    c /= s.p;
  }
  std::uint64_t acc = 0;
  for (unsigned k = s.d + 1; k-- > 0;) acc = static_cast<std::uint64_t>((u128(acc) * a + digits[k]) % s.p);
  return acc;
}

struct ColorMsg {
  Color c;
  std::size_t bits() const { return sim::bits_for(c); }
};

}  // namespace

std::vector<ReductionStep> linial_schedule(std::size_t max_degree) {
  std::vector<ReductionStep> steps;
  if (max_degree == 0) return steps;
  u128 q = u128(1) << 64;
  const u128 target = u128(kLinialPaletteFactor) * max_degree * max_degree;
  while (q > target) {
    std::uint64_t best_p = 0;
    unsigned best_d = 0;
    u128 best_palette = 0;
    for (unsigned d = 1; d <= 64; ++d) {
      std::uint64_t p = std::max(smallest_root(q, d + 1), static_cast<std::uint64_t>(d) * max_degree + 1);
      if (!is_prime(p)) p = next_prime_above(p);
      while (!power_reaches(p, d, q)) p = next_prime_above(p);
      // at most d·Δ evaluation points clash, so a <= d·Δ
      const u128 palette = u128(static_cast<std::uint64_t>(d) * max_degree + 1) * p;
      if (best_p == 0 || palette < best_palette) {
        best_p = p;
        best_d = d;
        best_palette = palette;
      }
      if (static_cast<std::uint64_t>(d + 1) * max_degree >= best_p) break;
    }
    if (best_palette >= q) break;
    steps.push_back({static_cast<std::uint64_t>(std::min<u128>(q, std::numeric_limits<std::uint64_t>::max())),
                     best_p, best_d, static_cast<std::uint64_t>(best_palette)});
    q = best_palette;
  }
  return steps;
}

bool is_proper(const Graph& g, const EdgeMask& active, const Coloring& c) {
  if (c.colors.size() != g.num_nodes()) return false;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!active.test(e)) continue;
    if (c.colors[g.edge(e).u] == c.colors[g.edge(e).v]) return false;
  }
  for (Color x : c.colors)
    if (x >= c.palette_size) return false;
  return true;
}

Traced<Coloring> linial_coloring(const Graph& g) { return linial_coloring(g, EdgeMask(g.num_edges(), true)); }

Traced<Coloring> linial_coloring(const Graph& g, const EdgeMask& active) {
  const sim::Topology topo(g, active);
  Traced<Coloring> out;
  if (topo.max_degree() == 0) {
    out.value.colors.assign(g.num_nodes(), 0);
    out.value.palette_size = 1;
    return out;
  }
  const std::vector<ReductionStep> schedule = linial_schedule(topo.max_degree());
  const std::size_t steps = schedule.size();

  sim::NodeProgram<Color, ColorMsg> program{
      "linial-coloring",
      [&schedule, steps](const sim::NodeContext& ctx, Color& color, std::span<const sim::Envelope<ColorMsg>> in,
                         sim::Outbox<ColorMsg>& out) {
        if (ctx.round >= 2) {
          const ReductionStep& s = schedule[ctx.round - 2];
          for (std::uint64_t a = 0; a < s.p; ++a) {
            const std::uint64_t mine = eval_poly(color, s, a);
            bool clash = false;
            for (const auto& env : in) {
              if (eval_poly(env.msg.c, s, a) == mine) {
                clash = true;
                break;
              }
            }
            if (!clash) {
              color = a * s.p + mine;
              break;
            }
          }
        }
        if (ctx.round <= steps) {
          out.broadcast({color});
          return sim::Next::next_round();
        }
        return sim::Next::halt();
      }};

  std::vector<Color> init(g.ids().begin(), g.ids().end());
  auto result = sim::run(topo, std::move(init), program);
  out.value.colors = std::move(result.states);
  out.value.palette_size = schedule.back().palette;
  out.trace = result.trace;
  return out;
}

unsigned cole_vishkin_iterations(std::uint64_t q) {
  unsigned iters = 0;
  while (q > 6) {
    q = 2 * ceil_log2(q);
    ++iters;
  }
  return iters;
}

// ---------------------------------------------------------------------------
// Maximal matching from a coloring

namespace {

enum class CmmKind : std::uint8_t { Color, Label, ForestColor, Propose, Accept, Matched };

struct CmmMsg {
  CmmKind kind;
  std::uint64_t value = 0;
  std::size_t bits() const { return 3 + sim::bits_for(value); }
};

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct CmmState {
  Color color = 0;
  std::vector<std::uint32_t> port_forest;  // forest of each port, kNone before labels arrive
  std::vector<std::uint8_t> port_up;       // port leads to the parent
  std::vector<std::uint32_t> parent;       // per forest: parent port or kNone
  std::vector<std::uint64_t> fcolor;       // per forest
  std::vector<std::uint64_t> before_shift;
  std::vector<std::uint8_t> neighbor_matched;
  std::uint32_t mate = kNone;
  bool announce = false;  // learned acceptance; must tell the other neighbors
};

std::uint64_t cv_step(std::uint64_t own, std::optional<std::uint64_t> parent) {
  const std::uint64_t diff = parent ? (own ^ *parent) : 1;
  const auto i = static_cast<std::uint64_t>(std::countr_zero(diff));
  return 2 * i + ((own >> i) & 1);
}

std::uint64_t smallest_free(std::uint64_t a, std::uint64_t b) {
  for (std::uint64_t c = 0;; ++c)
    if (c != a && c != b) return c;
}

enum class OpKind : std::uint8_t { CvIteration, Shift, Pick };
struct Op {
  OpKind kind;
  std::uint64_t x = 0;
};

}  // namespace

Traced<Matching> colored_maximal_matching(const Graph& g, const Coloring& c) {
  return colored_maximal_matching(g, EdgeMask(g.num_edges(), true), c);
}

Traced<Matching> colored_maximal_matching(const Graph& g, const EdgeMask& active, const Coloring& c,
                                          std::optional<std::size_t> degree_bound,
                                          std::optional<sim::Globals> globals) {
  if (!is_proper(g, active, c)) throw InvalidArgument("colored_maximal_matching: coloring is not proper");
  const sim::Topology topo(g, active);
  Traced<Matching> out;
  if (topo.num_edges() == 0) return out;
  const std::size_t forests = degree_bound.value_or(topo.max_degree());
  if (forests < topo.max_degree())
    throw InvalidArgument("colored_maximal_matching: degree bound " + std::to_string(forests) +
                          " is below the maximum degree " + std::to_string(topo.max_degree()));

  const unsigned cv_iters = cole_vishkin_iterations(c.palette_size);
  const std::uint64_t after_cv = cv_iters > 0 ? 6 : c.palette_size;
  std::vector<Op> ops;
  for (unsigned t = 2; t <= cv_iters; ++t) ops.push_back({OpKind::CvIteration});
  for (std::uint64_t x = after_cv; x-- > 3;) {
    ops.push_back({OpKind::Shift});
    ops.push_back({OpKind::Pick, x});
  }
  const std::size_t first_op = 4;
  const std::size_t match_start = first_op + ops.size();
  const std::size_t substeps = 3 * forests;
  const std::size_t final_round = match_start + 2 * substeps;

  // Next round in which a free node has to propose, or 0.
  auto next_proposal = [match_start, substeps](const CmmState& st, std::size_t from) -> std::size_t {
    for (std::size_t s = from; s < substeps; ++s) {
      const std::size_t j = s / 3;
      if (st.parent[j] != kNone && st.fcolor[j] == s % 3 && !st.neighbor_matched[st.parent[j]])
        return match_start + 2 * s;
    }
    return 0;
  };

  sim::NodeProgram<CmmState, CmmMsg> program{
      "maximal-matching",
      [&](const sim::NodeContext& ctx, CmmState& st, std::span<const sim::Envelope<CmmMsg>> in,
          sim::Outbox<CmmMsg>& outbox) -> sim::Next {
        const std::size_t r = ctx.round;
        const std::size_t deg = ctx.ports.size();
        if (deg == 0) return sim::Next::halt();
        auto parent_color = [&](std::size_t j) -> std::optional<std::uint64_t> {
          if (st.parent[j] == kNone) return std::nullopt;
          for (const auto& env : in)
            if (env.port == st.parent[j] && env.msg.kind == CmmKind::ForestColor) return env.msg.value;
          throw sim::EngineError("maximal-matching: missing forest color from parent");
        };
        auto send_forest_colors = [&] {
          for (std::uint32_t p = 0; p < deg; ++p)
            if (!st.port_up[p] && st.port_forest[p] != kNone)
              outbox.send(p, {CmmKind::ForestColor, st.fcolor[st.port_forest[p]]});
        };

        if (r == 1) {
          st.port_forest.assign(deg, kNone);
          st.port_up.assign(deg, 0);
          st.parent.assign(forests, kNone);
          st.fcolor.assign(forests, st.color);
          st.before_shift.assign(forests, st.color);
          st.neighbor_matched.assign(deg, 0);
          outbox.broadcast({CmmKind::Color, st.color});
          return sim::Next::next_round();
        }
        if (r == 2) {
          std::uint32_t label = 0;
          std::vector<Color> neighbor(deg);
          for (const auto& env : in) neighbor[env.port] = env.msg.value;
          for (std::uint32_t p = 0; p < deg; ++p) {
            if (neighbor[p] == st.color) throw InvalidArgument("colored_maximal_matching: improper coloring");
            if (neighbor[p] > st.color) {
              st.port_up[p] = 1;
              st.port_forest[p] = label;
              st.parent[label] = p;
              outbox.send(p, {CmmKind::Label, label});
              ++label;
            }
          }
          if (cv_iters >= 1) {
            for (std::size_t j = 0; j < forests; ++j) {
              std::optional<std::uint64_t> pc;
              if (st.parent[j] != kNone) pc = neighbor[st.parent[j]];
              st.fcolor[j] = cv_step(st.fcolor[j], pc);
            }
          }
          return sim::Next::next_round();
        }
        if (r == 3) {
          for (const auto& env : in) st.port_forest[env.port] = static_cast<std::uint32_t>(env.msg.value);
          if (!ops.empty()) {
            send_forest_colors();
            return sim::Next::next_round();
          }
        } else if (r < match_start) {
          const Op& op = ops[r - first_op];
          for (std::size_t j = 0; j < forests; ++j) {
            const auto pc = parent_color(j);
            switch (op.kind) {
              case OpKind::CvIteration:
                st.fcolor[j] = cv_step(st.fcolor[j], pc);
                break;
              case OpKind::Shift:
                st.before_shift[j] = st.fcolor[j];
                st.fcolor[j] = pc ? *pc : smallest_free(st.fcolor[j], st.fcolor[j]);
                break;
              case OpKind::Pick:
                if (st.fcolor[j] == op.x) st.fcolor[j] = smallest_free(st.before_shift[j], pc ? *pc : st.before_shift[j]);
                break;
            }
          }
          if (r + 1 < match_start) {
            send_forest_colors();
            return sim::Next::next_round();
          }
        } else {
          // Matching stage.
          const std::size_t offset = r - match_start;
          const bool round_a = offset % 2 == 0;
          const std::size_t s = offset / 2;
          std::uint32_t best = kNone;
          std::uint64_t best_id = 0;
          for (const auto& env : in) {
            switch (env.msg.kind) {
              case CmmKind::Matched:
                st.neighbor_matched[env.port] = 1;
                break;
              case CmmKind::Accept:
                if (st.mate != kNone) throw sim::EngineError("maximal-matching: accepted twice");
                st.mate = env.port;
                st.announce = true;
                break;
              case CmmKind::Propose:
                if (best == kNone || env.msg.value < best_id) {
                  best = env.port;
                  best_id = env.msg.value;
                }
                break;
              default:
                throw sim::EngineError("maximal-matching: unexpected message");
            }
          }
          if (st.announce) {
            for (std::uint32_t p = 0; p < deg; ++p)
              if (p != st.mate) outbox.send(p, {CmmKind::Matched});
            return sim::Next::halt();
          }
          if (best != kNone && st.mate == kNone) {
            st.mate = best;
            outbox.send(best, {CmmKind::Accept});
            for (std::uint32_t p = 0; p < deg; ++p)
              if (p != best) outbox.send(p, {CmmKind::Matched});
            return sim::Next::halt();
          }
          if (round_a && s < substeps && st.mate == kNone) {
            const std::size_t j = s / 3;
            if (st.parent[j] != kNone && st.fcolor[j] == s % 3 && !st.neighbor_matched[st.parent[j]])
              outbox.send(st.parent[j], {CmmKind::Propose, ctx.id});
          }
          if (r >= final_round) return sim::Next::halt();
          const std::size_t next = next_proposal(st, s + 1);
          return next ? sim::Next::at(next) : sim::Next::idle();
        }
        // Entering the matching stage.
        const std::size_t next = next_proposal(st, 0);
        return next ? sim::Next::at(next) : sim::Next::idle();
      }};

  std::vector<CmmState> init(g.num_nodes());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) init[v].color = c.colors[v];
  auto opts = sim::default_options<CmmState>(globals);
  auto result = sim::run(topo, std::move(init), program, opts);

  EdgeMask chosen(g.num_edges());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const CmmState& st = result.states[v];
    if (st.mate == kNone) continue;
    const sim::Port& p = topo.ports(v)[st.mate];
    const CmmState& other = result.states[p.neighbor];
    if (other.mate != p.reverse) throw sim::EngineError("maximal-matching: endpoints disagree on a matched edge");
    chosen.set(p.edge);
  }
  out.value = edge_set_of<Matching>(chosen);
  out.trace = result.trace;
  return out;
}

}  // namespace lmatch
