// Shared fixtures for the test suites: seeded random graphs, partitions,
// WAN profiles, workload demand and tiny instances.
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "geolayer/cost.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/layered.hpp"
#include "geolayer/wan.hpp"

namespace testsup {

using namespace geolayer;

// connected random graph: spanning tree plus extra random edges
inline Graph random_connected_graph(int n, int extra_edges, std::mt19937_64& rng) {
  Graph g;
  g.vertex_count = n;
  std::vector<VertexId> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    g.edges.push_back(Edge{order[static_cast<size_t>(pick(rng))],
                           order[static_cast<size_t>(i)], 1.0, false});
  }
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const Edge& e : g.edges) {
    seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::uniform_int_distribution<VertexId> pickv(0, n - 1);
  int added = 0;
  int guard = 0;
  while (added < extra_edges && guard++ < extra_edges * 50) {
    VertexId u = pickv(rng);
    VertexId v = pickv(rng);
    if (u == v) continue;
    auto key = std::make_pair(std::min(u, v), std::max(u, v));
    if (seen.count(key)) continue;
    seen.insert(key);
    g.edges.push_back(Edge{u, v, 1.0, false});
    ++added;
  }
  g.rebuild_adjacency();
  return g;
}

inline Partitioning random_partition(const Graph& g, int dc_count,
                                     std::mt19937_64& rng) {
  Partitioning part;
  part.dc_count = dc_count;
  part.assignment.resize(static_cast<size_t>(g.vertex_count));
  std::uniform_int_distribution<DcId> pick(0, dc_count - 1);
  for (VertexId v = 0; v < g.vertex_count; ++v) {
    part.assignment[static_cast<size_t>(v)] = pick(rng);
  }
  // keep every DC non-empty
  for (DcId d = 0; d < dc_count && d < g.vertex_count; ++d) {
    part.assignment[static_cast<size_t>(d)] = d;
  }
  part.derive(g);
  return part;
}

// complete synthetic profile with uniform-ish prices and given rtt spread
inline WanProfile synthetic_wan(int dc_count, double min_rtt_ms, double max_rtt_ms,
                                std::mt19937_64& rng) {
  WanProfile wan;
  for (DcId d = 0; d < dc_count; ++d) {
    DataCenter dc;
    dc.id = d;
    dc.name = "dc" + std::to_string(d);
    dc.region = "r" + std::to_string(d);
    dc.store_price = 0.016 + 0.001 * d;
    dc.read_price = 0.10 + 0.05 * d;
    dc.write_price = 1.40 + 0.2 * d;
    wan.dcs.push_back(dc);
  }
  wan.links.assign(static_cast<size_t>(dc_count) * dc_count, LinkProfile{});
  std::uniform_real_distribution<double> rtt(min_rtt_ms, max_rtt_ms);
  for (DcId a = 0; a < dc_count; ++a) {
    for (DcId b = a; b < dc_count; ++b) {
      if (a == b) {
        wan.link(a, a) = {0.0, std::numeric_limits<double>::infinity(), 0.0};
        continue;
      }
      LinkProfile l{rtt(rng) / 1e3, 100e6, 0.043};
      wan.link(a, b) = l;
      wan.link(b, a) = l;
    }
  }
  return wan;
}

struct TinyInstance {
  Graph graph;
  Partitioning part;
  ItemCatalog items;
  WanProfile wan;
  std::vector<Pattern> patterns;
  DemandMatrix demand;
  LatencyThresholds thresholds;
  double gamma_max_s = 0.0;
};

// 3-DC instance small enough for exact enumeration; pattern requirements sit
// just under their layer's upper threshold
inline TinyInstance tiny_instance(int vertices, int extra_edges, int pattern_count,
                                  std::uint64_t seed, double gamma_max_s = 1000.0) {
  std::mt19937_64 rng(seed);
  TinyInstance t;
  t.gamma_max_s = gamma_max_s;
  t.graph = random_connected_graph(vertices, extra_edges, rng);
  t.part = random_partition(t.graph, 3, rng);
  t.wan = synthetic_wan(3, 30.0, 180.0, rng);
  t.items = build_items(t.graph, t.part, 4096, 2048);
  double max_rtt = 0.0;
  for (DcId a = 0; a < 3; ++a) {
    for (DcId b = 0; b < 3; ++b) {
      if (a != b) max_rtt = std::max(max_rtt, t.wan.link(a, b).rtt_s);
    }
  }
  t.thresholds = LatencyThresholds::fixed_interval(0.1, max_rtt);
  t.demand = DemandMatrix(static_cast<std::int32_t>(t.items.size()), 3);

  std::uniform_int_distribution<VertexId> pickv(0, vertices - 1);
  std::uniform_int_distribution<DcId> pickd(0, 2);
  std::uniform_int_distribution<int> rate(5, 60);
  for (int i = 0; i < pattern_count; ++i) {
    Pattern p;
    p.id = i;
    VertexId v = pickv(rng);
    std::set<ItemId> pi{t.items.vertex_item(v)};
    VertexId prev = -1;
    VertexId cur = v;
    for (int hop = 0; hop < 2; ++hop) {
      const auto& adj = t.graph.adj[static_cast<size_t>(cur)];
      std::vector<std::pair<VertexId, EdgeId>> next;
      for (const auto& [w, e] : adj) {
        if (w != prev) next.emplace_back(w, e);
      }
      if (next.empty()) break;
      std::uniform_int_distribution<size_t> pe(0, next.size() - 1);
      auto [w, e] = next[pe(rng)];
      pi.insert(t.items.vertex_item(w));
      pi.insert(t.items.edge_item(e));
      prev = cur;
      cur = w;
    }
    p.items.assign(pi.begin(), pi.end());
    int layer = 1 + (i % t.thresholds.layer_count());
    double upper = layer == t.thresholds.layer_count()
                       ? t.thresholds.lower(layer) + 0.1
                       : t.thresholds.upper(layer);
    p.requirement_s = upper - 0.001;
    p.eta = p.requirement_s / gamma_max_s;
    DcId y = pickd(rng);
    double r = rate(rng);
    p.origin_rates[y] = r;
    t.demand.pattern_reads[{p.id, y}] = r;
    for (ItemId x : p.items) t.demand.read_rate(x, y) += r;
    t.patterns.push_back(p);
  }
  // sprinkle writes on a third of the items
  std::uniform_int_distribution<int> wrate(1, 5);
  for (ItemId x = 0; x < static_cast<ItemId>(t.items.size()); x += 3) {
    t.demand.write_rate(x, pickd(rng)) += wrate(rng);
  }
  return t;
}

// feasible random state over an instance: random placement including homes,
// sigma to a random holder
inline std::pair<PlacementState, RoutingState> random_state(const TinyInstance& t,
                                                            std::mt19937_64& rng) {
  PlacementState placement(static_cast<std::int32_t>(t.items.size()), 3);
  std::uniform_int_distribution<int> coin(0, 3);
  for (ItemId x = 0; x < placement.item_count; ++x) {
    placement.set(x, t.items.at(x).home, true);
    for (DcId d = 0; d < 3; ++d) {
      if (coin(rng) == 0) placement.set(x, d, true);
    }
  }
  RoutingState routing;
  for (ItemId x = 0; x < placement.item_count; ++x) {
    for (DcId y = 0; y < 3; ++y) {
      if (t.demand.read_rate(x, y) == 0.0) continue;
      std::vector<DcId> holders = placement.holders(x);
      std::uniform_int_distribution<size_t> pick(0, holders.size() - 1);
      routing.sigma[{x, y}] = holders[pick(rng)];
    }
  }
  derive_rho(routing, t.patterns, t.demand);
  return {placement, routing};
}

}  // namespace testsup
