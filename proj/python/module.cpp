#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <utility>
#include <vector>

#include "localflow/generators.hpp"
#include "localflow/instrumentation.hpp"
#include "localflow/io.hpp"
#include "localflow/multi_flow.hpp"
#include "localflow/mwu.hpp"
#include "localflow/single_flow.hpp"

namespace py = pybind11;
using namespace localflow;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_python(const py::object& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

SourceFunction to_source(const std::map<VertexId, double>& values) {
  SourceFunction b;
  for (const auto& [v, value] : values) b.add(v, value);
  return b;
}

KSource to_ksource(const std::vector<std::map<VertexId, double>>& commodities) {
  KSource b;
  for (const auto& values : commodities) b.commodities.push_back(to_source(values));
  return b;
}

std::map<VertexId, double> from_source(const SourceFunction& b) {
  std::map<VertexId, double> out;
  for (const auto& [v, value] : b) out.emplace(v, value);
  return out;
}

py::dict result_dict(const nlohmann::json& artifact, const RunStats& stats) {
  py::dict out;
  out["artifact"] = to_python(artifact);
  out["stats"] = to_python(report(stats));
  return out;
}

}  // namespace

PYBIND11_MODULE(_localflow, m) {
  m.doc() = "Local approximate single- and multi-commodity flow";

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::int64_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
             return Graph::build(n, edges);
           }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("vertex_count", &Graph::vertex_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("degree", &Graph::degree, py::arg("v"))
      .def("edges", [](const Graph& g) {
        std::vector<std::pair<VertexId, VertexId>> out;
        for (EdgeId e = 0; e < g.edge_count(); ++e) out.emplace_back(g.tail(e), g.head(e));
        return out;
      });

  m.def(
      "solve_single",
      [](const Graph& g, const std::map<VertexId, double>& b, double eps, bool audit) {
        SingleResult r;
        {
          py::gil_scoped_release release;
          r = solve_single(g, to_source(b), eps, {.audit = audit});
        }
        return result_dict(to_artifact(g, r, eps), r.stats);
      },
      py::arg("graph"), py::arg("demand"), py::arg("eps"), py::arg("audit") = false);

  m.def(
      "solve_multi",
      [](const Graph& g, const std::vector<std::map<VertexId, double>>& b, double eps, bool audit) {
        MultiResult r;
        {
          py::gil_scoped_release release;
          r = solve_multi(g, to_ksource(b), eps, {.audit = audit});
        }
        return result_dict(to_artifact(g, r, eps), r.stats);
      },
      py::arg("graph"), py::arg("demands"), py::arg("eps"), py::arg("audit") = false);

  m.def(
      "verify",
      [](const Graph& g, const std::vector<std::map<VertexId, double>>& b, const py::object& artifact, double eps) {
        const VerifyReport rep = verify_artifact(g, to_ksource(b), from_python(artifact), eps);
        py::list violations;
        for (const Violation& v : rep.violations) {
          py::dict d;
          d["kind"] = v.kind;
          d["location"] = v.location;
          d["measured"] = v.measured;
          d["bound"] = v.bound;
          violations.append(d);
        }
        return py::make_tuple(rep.ok, violations);
      },
      py::arg("graph"), py::arg("demands"), py::arg("artifact"), py::arg("eps"));

  m.def("compute_iterations", &compute_iterations, py::arg("alpha"), py::arg("index_count"),
        py::arg("approx_bound"));

  m.def("path_graph", &path_graph, py::arg("n"));
  m.def("grid_graph", &grid_graph, py::arg("rows"), py::arg("cols"));
  m.def("random_regular_graph", &random_regular_graph, py::arg("n"), py::arg("d"), py::arg("seed"));
  m.def("random_gnm_graph", &random_gnm_graph, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def(
      "random_balanced_demand",
      [](const Graph& g, std::size_t l0, double l1, std::uint64_t seed) {
        Rng rng(seed);
        return from_source(random_balanced_demand(g, l0, l1, rng));
      },
      py::arg("graph"), py::arg("l0"), py::arg("l1"), py::arg("seed"));

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
}
