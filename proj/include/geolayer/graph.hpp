// Graph data model: vertices, edges, data items, geo-partitioning and
// pattern definitions shared by every other component.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geolayer {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using ItemId = std::int32_t;
using DcId = std::int32_t;
using PatternId = std::int32_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  VertexId u = -1;
  VertexId v = -1;
  double weight = 1.0;  // A_uv, symmetric on the undirected edge
  bool directed = false;
};

// Undirected connected graph. Edge ids are dense integers in input order so
// every downstream tie-break is reproducible.
struct Graph {
  std::int32_t vertex_count = 0;
  std::vector<Edge> edges;
  // adjacency: per vertex, (neighbor, edge id); built once, immutable after
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj;

  void rebuild_adjacency();
  bool is_connected() const;
  EdgeId find_edge(VertexId a, VertexId b) const;  // -1 when absent
};

enum class ItemKind { Vertex, Edge };

struct DataItem {
  ItemId id = -1;
  ItemKind kind = ItemKind::Vertex;
  std::int64_t size_bytes = 0;  // s_x
  VertexId u = -1;              // endpoints when kind == Edge
  VertexId v = -1;
  DcId home = -1;
};

// One data item per vertex followed by one per edge; item ids are dense and
// aligned with vertex/edge ids.
struct ItemCatalog {
  std::vector<DataItem> items;
  std::int32_t vertex_count = 0;

  ItemId vertex_item(VertexId v) const { return v; }
  ItemId edge_item(EdgeId e) const { return vertex_count + e; }
  const DataItem& at(ItemId x) const { return items.at(static_cast<size_t>(x)); }
  std::size_t size() const { return items.size(); }
};

// Geo-partitioning with the derived sets V_d, E_d, B_d and E^B.
struct Partitioning {
  std::vector<DcId> assignment;  // per vertex
  std::int32_t dc_count = 0;
  std::vector<std::vector<VertexId>> vertices_of;  // V_d
  std::vector<std::vector<EdgeId>> edges_of;       // E_d, intra-DC
  std::vector<std::vector<VertexId>> boundary_of;  // B_d
  std::vector<EdgeId> cross_edges;                 // E^B

  DcId dc_of(VertexId v) const { return assignment.at(static_cast<size_t>(v)); }
  void derive(const Graph& g);
};

struct BoundaryInfo {
  std::vector<std::vector<VertexId>> boundary_of;
  std::vector<EdgeId> cross_edges;
};

// The set of items matched by one graph query, with its per-origin read rate
// and latency requirement eta_p * Gamma_max.
struct Pattern {
  PatternId id = -1;
  std::vector<ItemId> items;  // I_p
  double eta = 1.0;           // in (0,1]
  double requirement_s = 0.0; // eta * Gamma_max, seconds
  std::map<DcId, double> origin_rates;  // R_py

  double total_read_rate() const {
    double s = 0.0;
    for (const auto& [dc, r] : origin_rates) s += r;
    return s;
  }
};

struct PatternReport {
  bool ok = true;
  std::string message;
};

std::pair<Graph, Partitioning> load_graph(const std::string& edge_list_file,
                                          const std::string& partition_file);

BoundaryInfo extract_boundary(const Graph& g, const std::vector<DcId>& assignment,
                              std::int32_t dc_count);

PatternReport validate_pattern(const Pattern& p, const Graph& g,
                               const ItemCatalog& items);

// Vertex items live at their partition DC; a cross-partition edge item is
// homed at the DC of its lexicographically smaller endpoint.
ItemCatalog build_items(const Graph& g, const Partitioning& part,
                        std::int64_t vertex_size_bytes, std::int64_t edge_size_bytes);

}  // namespace geolayer
