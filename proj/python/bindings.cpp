#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lmatch/experiment.hpp"
#include "lmatch/generators.hpp"
#include "lmatch/graph_io.hpp"
#include "lmatch/oracles.hpp"
#include "lmatch/rounding.hpp"

namespace py = pybind11;
using namespace lmatch;

namespace {

// eps may be given as a str ("1/10"), int or float.
std::optional<Rational> to_rational(const py::object& eps) {
  if (eps.is_none()) return std::nullopt;
  return Rational::parse(std::string(py::str(eps)));
}

EdgeSet edge_set(const Graph& g, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  EdgeSet s;
  for (const auto& [a, b] : pairs) {
    const auto e = g.find_edge(g.require_index(a), g.require_index(b));
    if (!e) throw InvalidArgument("not an edge: " + std::to_string(a) + " " + std::to_string(b));
    s.edges.push_back(*e);
  }
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

std::vector<std::pair<NodeId, NodeId>> id_pairs(const Graph& g, const EdgeSet& s) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (EdgeId e : s.edges) out.emplace_back(g.id(g.edge(e).u), g.id(g.edge(e).v));
  return out;
}

BValues b_by_index(const Graph& g, const std::map<NodeId, std::uint32_t>& b) {
  BValues out(g.num_nodes(), 1);
  for (const auto& [id, value] : b) out[g.require_index(id)] = value;
  return out;
}

py::dict trace_dict(const sim::RoundTrace& t) {
  py::dict d;
  d["rounds_used"] = t.rounds_used;
  d["messages_sent"] = t.messages_sent;
  d["max_message_bits"] = t.max_message_bits;
  return d;
}

py::dict optimum_dict(const Graph& g, const Optimum& o) {
  py::dict d;
  d["value"] = o.value;
  d["edges"] = id_pairs(g, o.witness);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distributed matching algorithms on a simulated synchronous network";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<OracleBudgetExceeded>(m, "OracleBudgetExceeded", base.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                       std::optional<std::vector<Weight>> weights) {
             return Graph::from_edges(n, edges, std::move(weights));
           }),
           py::arg("n"), py::arg("edges"), py::arg("weights") = py::none(),
           "Graph on nodes 0..n-1. Weights, when given, follow the order of `edges`.")
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return read_graph(in);
      })
      .def("to_text", [](const Graph& g) { return graph_to_text(g); })
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("max_degree", &Graph::max_degree)
      .def_property_readonly("weighted", &Graph::weighted)
      .def_property_readonly("nodes", [](const Graph& g) { return std::vector<NodeId>(g.ids().begin(), g.ids().end()); })
      .def_property_readonly("edges",
                             [](const Graph& g) {
                               std::vector<std::pair<NodeId, NodeId>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(g.id(e.u), g.id(e.v));
                               return out;
                             })
      .def("weight", [](const Graph& g, NodeId a, NodeId b) {
        return g.weight(edge_set(g, {{a, b}}).edges.front());
      })
      .def(py::self == py::self)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.num_nodes()) + " m=" + std::to_string(g.num_edges()) + ">";
      });

  m.def(
      "generate",
      [](const std::string& kind, const std::map<std::string, py::object>& params, std::uint64_t seed) {
        GeneratorParams p;
        for (const auto& [k, v] : params) p[k] = std::string(py::str(v));
        return generate(kind, p, seed);
      },
      py::arg("kind"), py::arg("params") = std::map<std::string, py::object>{}, py::arg("seed") = 0);

  m.def("algorithm_names", &algorithm_names);
  m.def("algorithm_needs_eps", &algorithm_needs_eps);

  m.def(
      "run",
      [](const Graph& g, const std::string& algorithm, const py::object& eps,
         std::optional<std::map<NodeId, std::uint32_t>> b) {
        std::optional<BValues> bv;
        if (b) bv = b_by_index(g, *b);
        const AlgorithmOutput out = run_algorithm(g, algorithm, to_rational(eps), bv ? &*bv : nullptr);
        py::dict d = trace_dict(out.trace);
        d["edges"] = id_pairs(g, out.edges);
        return d;
      },
      py::arg("graph"), py::arg("algorithm"), py::arg("eps") = py::none(), py::arg("b") = py::none(),
      "Runs one algorithm; returns the chosen edges and the round/message counts.");

  m.def(
      "run_experiment",
      [](const Graph& g, const std::string& algorithm, const py::object& eps,
         std::optional<std::map<NodeId, std::uint32_t>> b, const std::string& oracle) {
        RunRequest req{"python", algorithm, to_rational(eps), std::nullopt, parse_oracle_mode(oracle)};
        if (b) req.b = b_by_index(g, *b);
        const RunOutcome out = run_experiment(g, req);
        const py::object doc = py::module_::import("json").attr("loads")(rows_to_json({out.row}));
        return py::object(doc["rows"][py::int_(0)]);
      },
      py::arg("graph"), py::arg("algorithm"), py::arg("eps") = py::none(), py::arg("b") = py::none(),
      py::arg("oracle") = "auto", "Runs, checks and compares with the oracle; returns the result row as a dict.");

  m.def("max_matching", [](const Graph& g) { return optimum_dict(g, max_matching_exact(g)); });
  m.def("max_weighted_matching", [](const Graph& g) { return optimum_dict(g, max_weighted_matching_exact(g)); });
  m.def("min_edge_dominating_set", [](const Graph& g) { return optimum_dict(g, min_eds_exact(g)); });

  using Pairs = std::vector<std::pair<NodeId, NodeId>>;
  m.def("is_matching", [](const Graph& g, const Pairs& e) { return is_matching(g, edge_set(g, e)).ok; });
  m.def("is_maximal", [](const Graph& g, const Pairs& e) { return is_maximal(g, edge_set(g, e)).ok; });
  m.def("dominates", [](const Graph& g, const Pairs& e) { return dominates(g, edge_set(g, e)).ok; });
  m.def("is_b_matching", [](const Graph& g, const std::map<NodeId, std::uint32_t>& b, const Pairs& e) {
    return is_b_matching(g, b_by_index(g, b), edge_set(g, e)).ok;
  });
  m.def("uncovered_edge_fraction", [](const Graph& g, const Pairs& e) {
    const Rational r = uncovered_edge_fraction(g, edge_set(g, e));
    return py::module_::import("fractions").attr("Fraction")(r.num(), r.den());
  });
}
