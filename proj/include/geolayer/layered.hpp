// Latency-aware layered graph: cross-partition edges bucketed into latency
// layers, per-layer bridge subgraphs that merge lower components, the
// clusters they link, and the resulting hierarchy forest over DCs and
// bridge subgraphs.
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolayer/graph.hpp"
#include "geolayer/wan.hpp"

namespace geolayer {

class LayeredError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cut points t_0 = 0 < t_1 < ... < t_{h-1}; t_h = +inf is implicit.
struct LatencyThresholds {
  std::vector<double> cuts;

  int layer_count() const { return static_cast<int>(cuts.size()); }  // h

  // The unique k with value in [t_{k-1}, t_k); intervals are lower-closed.
  int layer_of(double value_s) const {
    const int h = layer_count();
    for (int k = 1; k < h; ++k) {
      if (value_s < cuts[static_cast<size_t>(k)]) return k;
    }
    return h;
  }

  double lower(int layer) const { return cuts[static_cast<size_t>(layer - 1)]; }
  double upper(int layer) const {
    return layer == layer_count() ? std::numeric_limits<double>::infinity()
                                  : cuts[static_cast<size_t>(layer)];
  }

  static LatencyThresholds fixed_interval(double interval_s, double max_latency_s);
  void validate() const;
};

struct LayerGraph {
  int index = 0;                  // 1-based layer number
  std::vector<EdgeId> edges;      // E^B_i
  std::vector<VertexId> vertices; // V^B_i, endpoint set of the edges
};

// Hierarchy node ids: 0..dc_count-1 are DCs, dc_count + b is bridge subgraph b.
struct BridgeSubgraph {
  int id = -1;
  int layer = 0;
  std::vector<EdgeId> edges;            // E*
  std::vector<VertexId> vertices;       // V*
  std::vector<EdgeId> absorbed_edges;   // same-layer edges that merged nothing new
  // vertex sets of the lower-layer weakly connected components this merges
  std::vector<std::vector<VertexId>> merged_components;
};

struct Cluster {
  int linking_bs = -1;           // bridge subgraph id
  std::vector<int> members;      // hierarchy node ids it unites
};

struct LayeredGraph {
  LatencyThresholds thresholds;
  std::int32_t dc_count = 0;
  std::vector<LayerGraph> layers;           // index i-1 holds Layer_i
  std::vector<BridgeSubgraph> subgraphs;
  std::vector<Cluster> clusters;            // aligned with subgraphs
  std::vector<int> parent;                  // per hierarchy node, -1 at roots
  std::vector<std::vector<int>> children;
  std::vector<std::vector<DcId>> dc_span;   // DCs under each hierarchy node
  std::vector<int> roots;
  // number of weakly connected components after aggregating all layers
  int top_component_count = 0;

  int node_count() const { return static_cast<int>(parent.size()); }
  int node_of_dc(DcId d) const { return d; }
  int node_of_bs(int bs) const { return dc_count + bs; }
  bool is_dc_node(int node) const { return node < dc_count; }
  int bs_of_node(int node) const { return node - dc_count; }
  int layer_of_node(int node) const {
    return is_dc_node(node) ? 0 : subgraphs[static_cast<size_t>(bs_of_node(node))].layer;
  }
  // the chain dc-node, parent, ..., root used by bottom-up routing
  std::vector<int> chain_of_dc(DcId d) const;
};

// Observed inter-DC latency of a cross-partition edge (the slower direction
// when the profile is asymmetric).
double assign_latency(const Graph& g, EdgeId e, const Partitioning& part,
                      const WanProfile& wan);

std::vector<LayerGraph> build_layers(const Graph& g, const Partitioning& part,
                                     const WanProfile& wan,
                                     const LatencyThresholds& thresholds);

LayeredGraph build_layered_graph(const Graph& g, const Partitioning& part,
                                 const WanProfile& wan,
                                 const LatencyThresholds& thresholds);

std::string dump_layered_graph(const LayeredGraph& lg, const Graph& g);

}  // namespace geolayer
