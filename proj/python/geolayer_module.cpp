#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geolayer/baselines.hpp"
#include "geolayer/cost.hpp"
#include "geolayer/dhd.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/layered.hpp"
#include "geolayer/oracle.hpp"
#include "geolayer/placement.hpp"
#include "geolayer/routing.hpp"
#include "geolayer/scenario.hpp"
#include "geolayer/wan.hpp"
#include "geolayer/workload.hpp"

namespace py = pybind11;
using namespace geolayer;

PYBIND11_MODULE(_geolayer, m) {
  m.doc() = "geo-distributed graph store simulator";

  py::class_<Edge>(m, "Edge")
      .def_readonly("u", &Edge::u)
      .def_readonly("v", &Edge::v)
      .def_readonly("weight", &Edge::weight);

  py::class_<Graph>(m, "Graph")
      .def_readonly("vertex_count", &Graph::vertex_count)
      .def_readonly("edges", &Graph::edges)
      .def("is_connected", &Graph::is_connected);

  py::class_<Partitioning>(m, "Partitioning")
      .def_readonly("assignment", &Partitioning::assignment)
      .def_readonly("dc_count", &Partitioning::dc_count)
      .def_readonly("vertices_of", &Partitioning::vertices_of)
      .def_readonly("boundary_of", &Partitioning::boundary_of)
      .def_readonly("cross_edges", &Partitioning::cross_edges);

  py::class_<DataItem>(m, "DataItem")
      .def_readonly("id", &DataItem::id)
      .def_readonly("size_bytes", &DataItem::size_bytes)
      .def_readonly("home", &DataItem::home);

  py::class_<ItemCatalog>(m, "ItemCatalog")
      .def("__len__", &ItemCatalog::size)
      .def("vertex_item", &ItemCatalog::vertex_item)
      .def("edge_item", &ItemCatalog::edge_item)
      .def("at", &ItemCatalog::at, py::return_value_policy::copy);

  py::class_<Pattern>(m, "Pattern")
      .def(py::init<>())
      .def_readwrite("id", &Pattern::id)
      .def_readwrite("items", &Pattern::items)
      .def_readwrite("eta", &Pattern::eta)
      .def_readwrite("requirement_s", &Pattern::requirement_s)
      .def_readwrite("origin_rates", &Pattern::origin_rates);

  m.def("load_graph", &load_graph, py::arg("edge_list_file"), py::arg("partition_file"));
  m.def("build_items", &build_items, py::arg("graph"), py::arg("partitioning"),
        py::arg("vertex_size_bytes") = 1024, py::arg("edge_size_bytes") = 512);
  m.def("extract_boundary",
        [](const Graph& g, const std::vector<DcId>& assignment, int dc_count) {
          BoundaryInfo b = extract_boundary(g, assignment, dc_count);
          return py::make_tuple(b.boundary_of, b.cross_edges);
        });
  m.def("validate_pattern", [](const Pattern& p, const Graph& g, const ItemCatalog& items) {
    PatternReport r = validate_pattern(p, g, items);
    return py::make_tuple(r.ok, r.message);
  });

  py::class_<DataCenter>(m, "DataCenter")
      .def_readonly("id", &DataCenter::id)
      .def_readonly("name", &DataCenter::name)
      .def_readonly("store_price", &DataCenter::store_price)
      .def_readonly("read_price", &DataCenter::read_price)
      .def_readonly("write_price", &DataCenter::write_price);

  py::class_<WanProfile>(m, "WanProfile")
      .def_readonly("dcs", &WanProfile::dcs)
      .def("dc_count", &WanProfile::dc_count)
      .def("index_of", &WanProfile::index_of)
      .def("request_latency", &WanProfile::request_latency)
      .def("pattern_latency", &WanProfile::pattern_latency);

  m.def("load_wan_profile", &load_wan_profile);
  m.def("dump_wan_profile", &dump_wan_profile);

  py::class_<LatencyThresholds>(m, "LatencyThresholds")
      .def_readonly("cuts", &LatencyThresholds::cuts)
      .def("layer_count", &LatencyThresholds::layer_count)
      .def("layer_of", &LatencyThresholds::layer_of)
      .def_static("fixed_interval", &LatencyThresholds::fixed_interval);

  py::class_<BridgeSubgraph>(m, "BridgeSubgraph")
      .def_readonly("id", &BridgeSubgraph::id)
      .def_readonly("layer", &BridgeSubgraph::layer)
      .def_readonly("edges", &BridgeSubgraph::edges);

  py::class_<Cluster>(m, "Cluster")
      .def_readonly("linking_bs", &Cluster::linking_bs)
      .def_readonly("members", &Cluster::members);

  py::class_<LayeredGraph>(m, "LayeredGraph")
      .def_readonly("dc_count", &LayeredGraph::dc_count)
      .def_readonly("subgraphs", &LayeredGraph::subgraphs)
      .def_readonly("clusters", &LayeredGraph::clusters)
      .def_readonly("parent", &LayeredGraph::parent)
      .def_readonly("dc_span", &LayeredGraph::dc_span)
      .def_readonly("roots", &LayeredGraph::roots)
      .def_readonly("top_component_count", &LayeredGraph::top_component_count)
      .def("chain_of_dc", &LayeredGraph::chain_of_dc);

  m.def("build_layered_graph", &build_layered_graph);
  m.def("dump_layered_graph", &dump_layered_graph);

  py::class_<DhdParams>(m, "DhdParams")
      .def(py::init<>())
      .def_readwrite("alpha", &DhdParams::alpha)
      .def_readwrite("gamma", &DhdParams::gamma)
      .def_readwrite("beta", &DhdParams::beta)
      .def_readwrite("max_iters", &DhdParams::max_iters)
      .def_readwrite("residual_tol", &DhdParams::residual_tol);

  py::class_<HeatGraph>(m, "HeatGraph")
      .def_static("from_graph", &HeatGraph::from_graph)
      .def_readonly("n", &HeatGraph::n);

  py::class_<HeatState>(m, "HeatState")
      .def(py::init<>())
      .def_readwrite("heat", &HeatState::heat)
      .def_readwrite("step", &HeatState::step);

  m.def("vertex_step", &vertex_step);
  m.def("system_step", &system_step);
  m.def("run_to_steady", [](const HeatGraph& hg, const HeatState& init,
                            const std::vector<double>& q, const DhdParams& params) {
    SteadyResult r = run_to_steady(hg, init, q, params);
    return py::make_tuple(r.state, r.converged, r.residual, r.iterations);
  });
  m.def("extract_hot_subgraph", [](const HeatGraph& hg, const HeatState& s, double theta) {
    HotSubgraph h = extract_hot_subgraph(hg, s, theta);
    return py::make_tuple(h.vertices, h.edges);
  });

  py::class_<PlacementState>(m, "PlacementState")
      .def(py::init<std::int32_t, std::int32_t>())
      .def_readonly("item_count", &PlacementState::item_count)
      .def_readonly("dc_count", &PlacementState::dc_count)
      .def("has", &PlacementState::has)
      .def("set", &PlacementState::set)
      .def("replica_count", &PlacementState::replica_count)
      .def("holders", &PlacementState::holders);

  py::class_<RoutingState>(m, "RoutingState")
      .def(py::init<>())
      .def("server", &RoutingState::server);

  py::class_<DemandMatrix>(m, "DemandMatrix")
      .def(py::init<std::int32_t, std::int32_t>())
      .def("read_rate", py::overload_cast<ItemId, DcId>(&DemandMatrix::read_rate, py::const_))
      .def("write_rate", py::overload_cast<ItemId, DcId>(&DemandMatrix::write_rate, py::const_))
      .def("pattern_read", &DemandMatrix::pattern_read);

  py::class_<CostParams>(m, "CostParams")
      .def(py::init<>())
      .def_readwrite("lambda1", &CostParams::lambda1)
      .def_readwrite("lambda2", &CostParams::lambda2)
      .def_readwrite("assoc_scale", &CostParams::assoc_scale);

  py::class_<CostBreakdown>(m, "CostBreakdown")
      .def_readonly("storage", &CostBreakdown::storage)
      .def_readonly("read", &CostBreakdown::read)
      .def_readonly("write", &CostBreakdown::write)
      .def_readonly("association", &CostBreakdown::association)
      .def_readonly("total", &CostBreakdown::total)
      .def("csv_row", &CostBreakdown::csv_row);

  m.def("total_objective", &total_objective);
  m.def("derive_rho", &derive_rho);
  m.def("check_constraints",
        [](const PlacementState& placement, const RoutingState& routing,
           const DemandMatrix& demand, const WanProfile& wan, const ItemCatalog& items,
           const std::vector<Pattern>& patterns, double gamma_max_s) {
          ConstraintReport r = check_constraints(placement, routing, demand, wan, items,
                                                 patterns, gamma_max_s);
          std::vector<std::pair<std::string, std::string>> v;
          for (const auto& viol : r.violations) {
            v.emplace_back(std::string(1, viol.constraint), viol.witness);
          }
          return py::make_tuple(r.feasible, v);
        });

  py::class_<RoutePlan>(m, "RoutePlan")
      .def_readonly("pattern", &RoutePlan::pattern)
      .def_readonly("origin", &RoutePlan::origin)
      .def_readonly("served", &RoutePlan::served)
      .def_readonly("latency_s", &RoutePlan::latency_s)
      .def_readonly("wan_bytes", &RoutePlan::wan_bytes);

  m.def("route_online", &route_online);
  m.def("nearest_holder", &nearest_holder);

  py::class_<WorkloadSpec>(m, "WorkloadSpec")
      .def(py::init<>())
      .def_readwrite("pattern_count", &WorkloadSpec::pattern_count)
      .def_readwrite("hops", &WorkloadSpec::hops)
      .def_readwrite("zipf_s", &WorkloadSpec::zipf_s)
      .def_readwrite("write_item_fraction", &WorkloadSpec::write_item_fraction)
      .def_readwrite("read_requests", &WorkloadSpec::read_requests)
      .def_readwrite("seed", &WorkloadSpec::seed);

  py::class_<Workload>(m, "Workload")
      .def_readonly("patterns", &Workload::patterns)
      .def_readonly("trace", &Workload::trace);

  py::class_<TraceRecord>(m, "TraceRecord")
      .def_readonly("seq", &TraceRecord::seq)
      .def_readonly("origin", &TraceRecord::origin)
      .def_readonly("object", &TraceRecord::object);

  m.def("generate_workload", &generate);
  m.def("aggregate_trace", &aggregate, py::arg("trace"), py::arg("patterns"),
        py::arg("items"), py::arg("dc_count"), py::arg("from_seq") = 0,
        py::arg("to_seq") = -1);

  m.def("place_random_k", &place_random_k);
  m.def("place_top_k", &place_top_k);

  py::class_<PlacementConfig>(m, "PlacementConfig")
      .def(py::init<>())
      .def_readwrite("gamma_max_s", &PlacementConfig::gamma_max_s)
      .def_readwrite("theta_quantile", &PlacementConfig::theta_quantile)
      .def_readwrite("theta_c_quantile", &PlacementConfig::theta_c_quantile)
      .def_readwrite("dhd", &PlacementConfig::dhd)
      .def_readwrite("cost", &PlacementConfig::cost);

  py::class_<PlacementEngine>(m, "PlacementEngine")
      .def(py::init<const Graph&, const Partitioning&, const ItemCatalog&,
                    const std::vector<Pattern>&, const DemandMatrix&, const WanProfile&,
                    const LayeredGraph&, PlacementConfig>(),
           py::keep_alive<1, 2>(), py::keep_alive<1, 3>(), py::keep_alive<1, 4>(),
           py::keep_alive<1, 5>(), py::keep_alive<1, 6>(), py::keep_alive<1, 7>(),
           py::keep_alive<1, 8>())
      .def("place_all", &PlacementEngine::place_all)
      .def("precache_hot", &PlacementEngine::precache_hot);

  py::class_<PlacementDecision>(m, "PlacementDecision")
      .def_readonly("seq", &PlacementDecision::seq)
      .def_readonly("layer", &PlacementDecision::layer)
      .def_readonly("target", &PlacementDecision::target)
      .def_readonly("kind", &PlacementDecision::kind)
      .def_readonly("object_id", &PlacementDecision::object_id)
      .def_readonly("gain", &PlacementDecision::gain);

  py::class_<PlacementLog>(m, "PlacementLog")
      .def_readonly("decisions", &PlacementLog::decisions)
      .def("csv", &PlacementLog::csv);

  m.def("solve_exact", &solve_exact);
  m.def("gap_percent", &gap_percent);
  m.def("reference_objective", &reference_objective);
  m.def("oracle_route", &oracle_route);

  py::class_<RunOptions>(m, "RunOptions")
      .def(py::init<>())
      .def_readwrite("out_dir", &RunOptions::out_dir)
      .def_readwrite("strategy", &RunOptions::strategy)
      .def_readwrite("dump_layers", &RunOptions::dump_layers)
      .def_readwrite("dump_heat", &RunOptions::dump_heat);

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("strategy", &ScenarioResult::strategy)
      .def_readonly("cost", &ScenarioResult::cost)
      .def_readonly("mean_latency_s", &ScenarioResult::mean_latency_s)
      .def_readonly("routed_requests", &ScenarioResult::routed_requests)
      .def_readonly("latency_violations", &ScenarioResult::latency_violations)
      .def_readonly("migration_ratio", &ScenarioResult::migration_ratio)
      .def_readonly("hit_rates", &ScenarioResult::hit_rates)
      .def_readonly("gap_percent", &ScenarioResult::gap_percent)
      .def_readonly("report_files", &ScenarioResult::report_files);

  m.def("run_scenario", &run_scenario);
  m.def("compare_reports", &compare_reports);
}
