#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "linkdel/deletion.hpp"
#include "linkdel/diffusion.hpp"
#include "linkdel/errors.hpp"
#include "linkdel/estimator.hpp"
#include "linkdel/experiment.hpp"
#include "linkdel/graph.hpp"
#include "linkdel/ingest.hpp"

namespace py = pybind11;
using namespace linkdel;

namespace {

std::vector<std::tuple<NodeId, NodeId>> edge_list(const DirectedGraph& g) {
  std::vector<std::tuple<NodeId, NodeId>> out;
  out.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge edge = g.edge(e);
    out.emplace_back(edge.src, edge.dst);
  }
  return out;
}

std::vector<CascadeLog> parse_cascade_text(const std::string& text, bool strict) {
  std::istringstream in(text);
  return load_cascades(in, strict).logs;
}

std::vector<LabeledEdge> parse_edge_text(const std::string& text, bool strict) {
  std::istringstream in(text);
  return load_follow_edges(in, strict).edges;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cascade-size estimation under follow-link deletion";

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_AssertionError);
  (void)input_error;

  py::class_<DirectedGraph>(m, "DirectedGraph")
      .def_property_readonly("node_count", &DirectedGraph::node_count)
      .def_property_readonly("edge_count", &DirectedGraph::edge_count)
      .def_property_readonly("labels", &DirectedGraph::labels)
      .def("find", [](const DirectedGraph& g, const std::string& label) { return g.find(label); })
      .def("label", &DirectedGraph::label)
      .def("out_degree", &DirectedGraph::out_degree)
      .def("in_degree", &DirectedGraph::in_degree)
      .def("successors",
           [](const DirectedGraph& g, NodeId v) {
             const auto s = g.successors(v);
             return std::vector<NodeId>(s.begin(), s.end());
           })
      .def("edges", &edge_list, "Edges as (src, dst) dense ids in edge-id order");

  m.def("build_graph", [](const std::vector<LabeledEdge>& edges) { return build_graph(edges); },
        py::arg("edges"), "Graph from (follower, followee) label pairs");
  m.def("graph_from_dense",
        [](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
          std::vector<Edge> es;
          for (auto [s, d] : edges) es.push_back({s, d});
          return DirectedGraph::from_dense(n, es);
        },
        py::arg("node_count"), py::arg("edges"));
  m.def("reachable_from",
        [](const DirectedGraph& g, const std::vector<NodeId>& sources) { return reachable_from(g, sources); },
        py::arg("graph"), py::arg("sources"));
  m.def("edge_betweenness", &edge_betweenness, py::arg("graph"), py::arg("threads") = 1);

  py::class_<EigenPair>(m, "EigenPair")
      .def_readonly("eigenvalue", &EigenPair::eigenvalue)
      .def_readonly("left", &EigenPair::left)
      .def_readonly("right", &EigenPair::right)
      .def_readonly("iterations", &EigenPair::iterations)
      .def_readonly("residual", &EigenPair::residual);
  m.def("leading_eigenpair",
        [](const DirectedGraph& g, double tolerance, int max_iterations) {
          return leading_eigenpair(g, {tolerance, max_iterations});
        },
        py::arg("graph"), py::arg("tolerance") = 1e-9, py::arg("max_iterations") = 10000);

  py::class_<CascadeLog>(m, "CascadeLog")
      .def(py::init([](std::string id, const std::vector<std::pair<std::string, std::int64_t>>& events) {
             CascadeLog log{std::move(id), {}};
             for (const auto& [u, t] : events) log.events.push_back({u, t});
             return log;
           }),
           py::arg("cascade_id"), py::arg("events"))
      .def_readonly("cascade_id", &CascadeLog::cascade_id)
      .def_property_readonly("events",
                             [](const CascadeLog& log) {
                               std::vector<std::pair<std::string, std::int64_t>> out;
                               for (const auto& e : log.events) out.emplace_back(e.user, e.timestamp);
                               return out;
                             })
      .def("__len__", &CascadeLog::size);

  m.def("load_follow_edges",
        [](const std::filesystem::path& p, bool strict) { return load_follow_edges(p, strict).edges; },
        py::arg("path"), py::arg("strict") = false);
  m.def("parse_follow_edges", &parse_edge_text, py::arg("text"), py::arg("strict") = false);
  m.def("load_cascades",
        [](const std::filesystem::path& p, bool strict) { return load_cascades(p, strict).logs; },
        py::arg("path"), py::arg("strict") = false);
  m.def("parse_cascades", &parse_cascade_text, py::arg("text"), py::arg("strict") = false);
  m.def("filter_cascades",
        [](const std::vector<CascadeLog>& logs, std::size_t min_size) { return filter_cascades(logs, min_size); },
        py::arg("logs"), py::arg("min_size"));

  py::class_<DatasetStats>(m, "DatasetStats")
      .def_readonly("user_count", &DatasetStats::user_count)
      .def_readonly("link_count", &DatasetStats::link_count)
      .def_readonly("cascade_count", &DatasetStats::cascade_count)
      .def_readonly("mean_cascade_size", &DatasetStats::mean_cascade_size);
  m.def("compute_stats",
        [](const std::vector<LabeledEdge>& edges, const std::vector<CascadeLog>& logs) {
          return compute_stats(edges, logs);
        },
        py::arg("edges"), py::arg("logs"));

  py::enum_<Variant>(m, "Variant")
      .value("NON_TREE", Variant::NonTree)
      .value("TREE_FIRST", Variant::TreeFirst)
      .value("TREE_LAST", Variant::TreeLast);
  py::enum_<Strategy>(m, "Strategy")
      .value("NETMELT", Strategy::NetMelt)
      .value("BETWEENNESS", Strategy::Betweenness)
      .value("EDGE_DEGREE", Strategy::EdgeDegree)
      .value("RANDOM", Strategy::Random);

  py::class_<DiffusionGraph>(m, "DiffusionGraph")
      .def_readonly("cascade_id", &DiffusionGraph::cascade_id)
      .def_readonly("variant", &DiffusionGraph::variant)
      .def_readonly("users", &DiffusionGraph::users)
      .def_readonly("timestamps", &DiffusionGraph::timestamps)
      .def_readonly("seeds", &DiffusionGraph::seeds)
      .def_property_readonly("edges",
                             [](const DiffusionGraph& dg) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (EdgeId e = 0; e < dg.graph.edge_count(); ++e) {
                                 const Edge edge = dg.graph.edge(e);
                                 out.emplace_back(dg.users[edge.src], dg.users[edge.dst]);
                               }
                               return out;
                             })
      .def_property_readonly("seed_users",
                             [](const DiffusionGraph& dg) {
                               std::vector<std::string> out;
                               for (NodeId s : dg.seeds) out.push_back(dg.users[s]);
                               return out;
                             })
      .def("__len__", &DiffusionGraph::size)
      .def("to_dot", [](const DiffusionGraph& dg) {
        std::ostringstream out;
        write_dot(out, dg);
        return out.str();
      });
  m.def("build_diffusion", &build_diffusion, py::arg("network"), py::arg("log"),
        py::arg("variant") = Variant::NonTree);

  py::class_<DeletionPlan>(m, "DeletionPlan")
      .def_readonly("strategy", &DeletionPlan::strategy)
      .def_readonly("budget", &DeletionPlan::budget)
      .def_readonly("rng_seed", &DeletionPlan::rng_seed)
      .def_readonly("note", &DeletionPlan::note)
      .def_property_readonly("edges",
                             [](const DeletionPlan& p) {
                               std::vector<std::tuple<NodeId, NodeId, double>> out;
                               for (const auto& r : p.ranked_edges) out.emplace_back(r.edge.src, r.edge.dst, r.score);
                               return out;
                             })
      .def("prefix", &DeletionPlan::prefix)
      .def("__len__", &DeletionPlan::size);
  m.def("make_plan",
        [](const DirectedGraph& g, Strategy s, std::size_t k, std::uint64_t seed, unsigned threads) {
          PlanOptions o;
          o.rng_seed = seed;
          o.threads = threads;
          return make_plan(g, s, k, o);
        },
        py::arg("network"), py::arg("strategy"), py::arg("k"), py::arg("seed") = 0, py::arg("threads") = 1);
  m.def("plan_from_edges",
        [](const DirectedGraph& g, const std::vector<LabeledEdge>& follow_edges) {
          DeletionPlan p;
          p.network_edge_count = g.edge_count();
          for (const auto& [src, dst] : follow_edges) {
            const auto s = g.find(src);
            const auto d = g.find(dst);
            const auto id = (s && d) ? g.find_edge(*s, *d) : std::nullopt;
            if (!id) throw InputError("follow edge " + src + " -> " + dst + " not in network");
            p.ranked_edges.push_back({*id, {*s, *d}, 0.0});
          }
          p.budget = p.ranked_edges.size();
          return p;
        },
        py::arg("network"), py::arg("follow_edges"), "Hand-written plan (strategy reported as random)");

  m.def("apply_deletion", py::overload_cast<const DiffusionGraph&, const DeletionPlan&>(&apply_deletion),
        py::arg("dg"), py::arg("plan"));
  m.def("estimate_size",
        [](const DiffusionGraph& dg, const std::vector<NodeId>& seeds) { return estimate_size(dg, seeds); },
        py::arg("dg_after"), py::arg("original_seeds"));

  py::class_<CascadeEstimate>(m, "CascadeEstimate")
      .def_readonly("cascade_id", &CascadeEstimate::cascade_id)
      .def_readonly("original_size", &CascadeEstimate::original_size)
      .def_readonly("estimated_size", &CascadeEstimate::estimated_size)
      .def_readonly("seed_count", &CascadeEstimate::seed_count);
  py::class_<EstimateReport>(m, "EstimateReport")
      .def_readonly("strategy", &EstimateReport::strategy)
      .def_readonly("variant", &EstimateReport::variant)
      .def_readonly("budget", &EstimateReport::budget)
      .def_readonly("per_cascade", &EstimateReport::per_cascade)
      .def_readonly("total_original", &EstimateReport::total_original)
      .def_readonly("total_estimated", &EstimateReport::total_estimated)
      .def("to_csv", [](const EstimateReport& r) {
        std::ostringstream out;
        write_report_csv(out, r);
        return out.str();
      });
  m.def("run_estimation",
        [](const DirectedGraph& g, const std::vector<CascadeLog>& logs, const DeletionPlan& plan, Variant v,
           unsigned threads) { return run_estimation(g, logs, plan, v, threads); },
        py::arg("network"), py::arg("logs"), py::arg("plan"), py::arg("variant") = Variant::NonTree,
        py::arg("threads") = 1);

  m.def("seed_analysis",
        [](const DirectedGraph& g, const std::vector<CascadeLog>& logs, std::size_t max_size) {
          std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
          for (const auto& r : seed_analysis(g, logs, max_size)) out.emplace_back(r.cascade_id, r.original_size, r.seed_count);
          return out;
        },
        py::arg("network"), py::arg("logs"), py::arg("max_size") = 1000);
  m.def("scatter_report",
        [](const EstimateReport& report) {
          std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
          for (const auto& r : scatter_report(report)) out.emplace_back(r.cascade_id, r.original_size, r.estimated_size);
          return out;
        },
        py::arg("report"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("edges_path", &ExperimentConfig::edges_path)
      .def_readwrite("cascades_path", &ExperimentConfig::cascades_path)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir)
      .def_readwrite("min_cascade_size", &ExperimentConfig::min_cascade_size)
      .def_readwrite("strategies", &ExperimentConfig::strategies)
      .def_readwrite("variants", &ExperimentConfig::variants)
      .def_readwrite("budget_fractions", &ExperimentConfig::budget_fractions)
      .def_readwrite("rng_seed", &ExperimentConfig::rng_seed)
      .def_readwrite("strict_parse", &ExperimentConfig::strict_parse)
      .def_readwrite("threads", &ExperimentConfig::threads);
  m.def("run_sweep",
        [](const ExperimentConfig& config) {
          const SweepResult result = run_sweep(config);
          std::vector<std::tuple<std::string, std::string, std::size_t, double, std::size_t, std::size_t>> rows;
          for (const auto& r : result.summary) {
            rows.emplace_back(std::string(to_string(r.strategy)), std::string(to_string(r.variant)), r.budget,
                              r.fraction, r.total_estimated, r.total_original);
          }
          return rows;
        },
        py::arg("config"), "Runs the sweep; returns summary rows (strategy, variant, k, fraction, estimated, original)");
}
