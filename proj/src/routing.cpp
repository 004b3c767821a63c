#include "geolayer/routing.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace geolayer {

std::map<DcId, std::int64_t> RoutePlan::payloads(const ItemCatalog& items) const {
  std::map<DcId, std::int64_t> out;
  for (const auto& [dc, list] : served) {
    std::int64_t bytes = 0;
    for (ItemId x : list) bytes += items.at(x).size_bytes;
    out[dc] = bytes;
  }
  return out;
}

DcId nearest_holder(ItemId x, DcId y, const PlacementState& placement,
                    const WanProfile& wan, const ItemCatalog& items) {
  DcId best = -1;
  double best_lat = std::numeric_limits<double>::infinity();
  for (DcId d = 0; d < placement.dc_count; ++d) {
    if (!placement.has(x, d)) continue;
    double lat = wan.request_latency(y, d, items.at(x).size_bytes);
    if (lat < best_lat || (lat == best_lat && (best < 0 || d < best))) {
      best_lat = lat;
      best = d;
    }
  }
  return best;
}

RoutePlan route_online(const Pattern& p, DcId origin, const PlacementState& placement,
                       const LayeredGraph& lg, const WanProfile& wan,
                       const ItemCatalog& items) {
  RoutePlan plan;
  plan.pattern = p.id;
  plan.origin = origin;

  std::vector<ItemId> missing;
  for (ItemId x : p.items) {
    if (placement.has(x, origin)) {
      plan.served[origin].push_back(x);
    } else {
      missing.push_back(x);
    }
  }

  std::set<DcId> searched{origin};
  const std::vector<int> chain = lg.chain_of_dc(origin);
  for (size_t ci = 1; ci < chain.size() && !missing.empty(); ++ci) {
    // candidate DCs newly reachable through this bridge subgraph's cluster
    std::vector<DcId> fresh;
    for (DcId d : lg.dc_span[static_cast<size_t>(chain[ci])]) {
      if (!searched.count(d)) fresh.push_back(d);
    }
    // exhaust this cluster greedily before escalating further
    while (!missing.empty()) {
      DcId best = -1;
      std::size_t best_cover = 0;
      for (DcId d : fresh) {
        std::size_t cover = 0;
        for (ItemId x : missing) {
          if (placement.has(x, d)) ++cover;
        }
        if (cover > best_cover) {
          best_cover = cover;
          best = d;
        }
      }
      if (best < 0) break;
      std::vector<ItemId> still;
      for (ItemId x : missing) {
        if (placement.has(x, best)) {
          plan.served[best].push_back(x);
        } else {
          still.push_back(x);
        }
      }
      missing = std::move(still);
    }
    for (DcId d : fresh) searched.insert(d);
  }

  // disconnected hierarchies only: fall back to the nearest holder anywhere
  if (!missing.empty()) {
    std::vector<ItemId> still;
    for (ItemId x : missing) {
      DcId d = nearest_holder(x, origin, placement, wan, items);
      if (d < 0) {
        throw RoutingError("route_online: item " + std::to_string(x) +
                           " has no replica anywhere");
      }
      plan.served[d].push_back(x);
    }
  }

  auto payload = plan.payloads(items);
  plan.latency_s = wan.pattern_latency(origin, payload);
  for (const auto& [dc, bytes] : payload) {
    if (dc != origin) plan.wan_bytes += bytes;
  }
  return plan;
}

bool migration_test(std::int64_t replica_vertices, std::int64_t boundary_vertices,
                    std::int64_t local_bytes, double eta_l,
                    const MigrationParams& params) {
  const double lhs = params.iota * static_cast<double>(params.msg_bytes) *
                         static_cast<double>(replica_vertices + boundary_vertices) -
                     static_cast<double>(local_bytes);
  const double rhs = (1.0 - eta_l) * params.xi_bytes;
  return lhs > rhs;
}

std::map<int, double> layer_eta(const LayeredGraph& lg, const Graph& g,
                                const Partitioning& part, const WanProfile& wan) {
  std::map<int, double> mean;
  for (const LayerGraph& layer : lg.layers) {
    if (layer.edges.empty()) continue;
    double sum = 0.0;
    for (EdgeId e : layer.edges) sum += assign_latency(g, e, part, wan);
    mean[layer.index] = sum / static_cast<double>(layer.edges.size());
  }
  std::map<int, double> eta;
  if (mean.empty()) return eta;
  const double top = mean.rbegin()->second;
  for (const auto& [layer, m] : mean) eta[layer] = top > 0.0 ? m / top : 1.0;
  return eta;
}

namespace {

double eta_for_layer(const MigrationParams& params, int layer) {
  if (params.eta_per_layer.empty()) return 1.0;
  // nearest populated layer at or below, else the lowest above
  auto it = params.eta_per_layer.upper_bound(layer);
  if (it != params.eta_per_layer.begin()) return std::prev(it)->second;
  return it->second;
}

bool is_requested_boundary(VertexId v, DcId d, const Partitioning& part) {
  const auto& b = part.boundary_of[static_cast<size_t>(d)];  // ascending by build
  return std::binary_search(b.begin(), b.end(), v);
}

DcId cheapest_source(ItemId x, DcId dst, const PlacementState& placement,
                     const WanProfile& wan, const ItemCatalog& items) {
  DcId best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (DcId d = 0; d < placement.dc_count; ++d) {
    if (!placement.has(x, d)) continue;
    double c = wan.transfer_cost(d, dst, items.at(x).size_bytes);
    if (c < best_cost || (c == best_cost && (best < 0 || d < best))) {
      best_cost = c;
      best = d;
    }
  }
  return best;
}

}  // namespace

std::int64_t estimate_offline_comm(const AssemblyPlan& plan,
                                   const std::vector<ItemId>& request,
                                   const PlacementState& placement, const Graph& g,
                                   const ItemCatalog& items,
                                   const MigrationParams& params) {
  std::set<DcId> sites(plan.retained.begin(), plan.retained.end());
  std::set<VertexId> requested_vertices;
  for (ItemId x : request) {
    if (items.at(x).kind == ItemKind::Vertex) {
      requested_vertices.insert(static_cast<VertexId>(x));
    }
  }
  std::int64_t replicas = 0;
  for (VertexId v : requested_vertices) {
    int held_sites = 0;
    for (DcId d : sites) {
      if (placement.has(v, d)) ++held_sites;
    }
    if (held_sites >= 2) ++replicas;
  }
  std::set<VertexId> boundary;
  for (VertexId v : requested_vertices) {
    auto lv = plan.location.find(v);
    if (lv == plan.location.end()) continue;
    for (const auto& [w, e] : g.adj[static_cast<size_t>(v)]) {
      if (!requested_vertices.count(w)) continue;
      auto lw = plan.location.find(w);
      if (lw != plan.location.end() && lw->second != lv->second) {
        boundary.insert(v);
        break;
      }
    }
  }
  const double iter_bytes = params.iota * static_cast<double>(params.msg_bytes) *
                            static_cast<double>(replicas + static_cast<std::int64_t>(boundary.size()));
  return plan.migration_bytes + static_cast<std::int64_t>(iter_bytes);
}

AssemblyPlan gather_all_plan(const std::vector<ItemId>& request, DcId destination,
                             const PlacementState& placement, const Graph& g,
                             const WanProfile& wan, const ItemCatalog& items,
                             const MigrationParams& params) {
  AssemblyPlan plan;
  plan.retained = {destination};
  for (ItemId x : request) {
    plan.location[x] = destination;
    if (placement.has(x, destination)) continue;
    DcId src = cheapest_source(x, destination, placement, wan, items);
    if (src < 0) {
      throw RoutingError("gather_all_plan: item " + std::to_string(x) +
                         " has no replica anywhere");
    }
    plan.migrations.push_back({x, src, destination});
    plan.migration_bytes += items.at(x).size_bytes;
  }
  plan.migration_ratio = request.empty()
                             ? 0.0
                             : static_cast<double>(plan.migrations.size()) /
                                   static_cast<double>(request.size());
  plan.iteration_bytes = 0;
  plan.wan_bytes = plan.migration_bytes;
  return plan;
}

AssemblyPlan route_offline(const std::vector<ItemId>& request,
                           const PlacementState& placement, const LayeredGraph& lg,
                           const Graph& g, const Partitioning& part,
                           const WanProfile& wan, const ItemCatalog& items,
                           MigrationParams params) {
  // Phase 1: top-down localization, items mapped to candidate holders with
  // duplicate resolution deferred
  std::map<ItemId, std::vector<DcId>> candidates;
  std::map<DcId, std::vector<ItemId>> local_sets;
  for (ItemId x : request) {
    std::vector<DcId> holders = placement.holders(x);
    if (holders.empty()) {
      throw RoutingError("route_offline: item " + std::to_string(x) +
                         " has no replica anywhere");
    }
    candidates[x] = holders;
    for (DcId d : holders) local_sets[d].push_back(x);
  }

  // per-DC communication metrics from the candidate map
  std::map<DcId, std::int64_t> rep_count, bnd_count, local_bytes;
  for (const auto& [d, list] : local_sets) {
    for (ItemId x : list) {
      local_bytes[d] += items.at(x).size_bytes;
      if (items.at(x).kind != ItemKind::Vertex) continue;
      if (candidates[x].size() >= 2) rep_count[d]++;
      if (is_requested_boundary(static_cast<VertexId>(x), d, part)) bnd_count[d]++;
    }
  }
  std::int64_t volume = 0;
  for (const auto& [d, list] : local_sets) {
    volume += static_cast<std::int64_t>(params.iota * static_cast<double>(params.msg_bytes)) *
              (rep_count[d] + bnd_count[d]);
  }
  params.xi_bytes = params.xi_fraction * static_cast<double>(volume);
  if (params.eta_per_layer.empty()) params.eta_per_layer = layer_eta(lg, g, part, wan);

  // Phase 2, Layer_0 stage: every candidate DC decides retain-or-migrate
  std::vector<DcId> retained;
  for (const auto& [d, list] : local_sets) {
    int cluster_layer = 1;
    const std::vector<int> chain = lg.chain_of_dc(d);
    if (chain.size() > 1) cluster_layer = lg.layer_of_node(chain[1]);
    double eta = eta_for_layer(params, cluster_layer);
    if (!migration_test(rep_count[d], bnd_count[d], local_bytes[d], eta, params)) {
      retained.push_back(d);
    }
  }
  std::sort(retained.begin(), retained.end());

  AssemblyPlan plan;
  if (retained.empty()) {
    // nothing survives the test: assemble everything at the cheapest DC
    AssemblyPlan best;
    bool first = true;
    std::int64_t best_cost = 0;
    for (DcId d = 0; d < placement.dc_count; ++d) {
      AssemblyPlan cand = gather_all_plan(request, d, placement, g, wan, items, params);
      std::int64_t cost = estimate_offline_comm(cand, request, placement, g, items, params);
      if (first || cost < best_cost) {
        best = cand;
        best_cost = cost;
        first = false;
      }
    }
    return best;
  }

  // assign every item: retained holders keep their data (hash-balanced when
  // several retained DCs hold it); migrated data is hashed to retained DCs
  // found walking up the holder's hierarchy chain
  std::map<DcId, std::int64_t> assigned_bytes;
  for (ItemId x : request) {
    std::vector<DcId> held_retained;
    for (DcId d : candidates[x]) {
      if (std::binary_search(retained.begin(), retained.end(), d)) {
        held_retained.push_back(d);
      }
    }
    if (!held_retained.empty()) {
      DcId dst = held_retained[static_cast<size_t>(x) % held_retained.size()];
      plan.location[x] = dst;
      assigned_bytes[dst] += items.at(x).size_bytes;
      continue;
    }
    // all holders migrate; find the first cluster above the primary holder
    // with a retained DC and hash into it
    DcId primary = candidates[x].front();
    DcId dst = -1;
    for (int node : lg.chain_of_dc(primary)) {
      std::vector<DcId> in_span;
      for (DcId d : lg.dc_span[static_cast<size_t>(node)]) {
        if (std::binary_search(retained.begin(), retained.end(), d)) in_span.push_back(d);
      }
      if (!in_span.empty()) {
        std::sort(in_span.begin(), in_span.end());
        dst = in_span[static_cast<size_t>(x) % in_span.size()];
        break;
      }
    }
    if (dst < 0) {
      // cluster has no retained DC anywhere up the chain: forward to the
      // destination minimizing transfer cost, balancing assigned load
      double best_cost = std::numeric_limits<double>::infinity();
      for (DcId d : retained) {
        DcId src = cheapest_source(x, d, placement, wan, items);
        double c = wan.transfer_cost(src, d, items.at(x).size_bytes);
        if (c < best_cost ||
            (c == best_cost && dst >= 0 && assigned_bytes[d] < assigned_bytes[dst])) {
          best_cost = c;
          dst = d;
        }
      }
    }
    plan.location[x] = dst;
    assigned_bytes[dst] += items.at(x).size_bytes;
    DcId src = cheapest_source(x, dst, placement, wan, items);
    plan.migrations.push_back({x, src, dst});
    plan.migration_bytes += items.at(x).size_bytes;
  }

  std::set<DcId> used;
  for (const auto& [x, d] : plan.location) used.insert(d);
  plan.retained.assign(used.begin(), used.end());
  plan.iteration_bytes = estimate_offline_comm(plan, request, placement, g, items, params) -
                         plan.migration_bytes;
  plan.wan_bytes = plan.migration_bytes + plan.iteration_bytes;
  plan.migration_ratio = request.empty()
                             ? 0.0
                             : static_cast<double>(plan.migrations.size()) /
                                   static_cast<double>(request.size());

  // keep the plan only if it beats the best single-site gather
  AssemblyPlan best_gather;
  bool first = true;
  std::int64_t best_cost = 0;
  for (DcId d = 0; d < placement.dc_count; ++d) {
    AssemblyPlan cand = gather_all_plan(request, d, placement, g, wan, items, params);
    std::int64_t cost = estimate_offline_comm(cand, request, placement, g, items, params);
    if (first || cost < best_cost) {
      best_gather = cand;
      best_cost = cost;
      first = false;
    }
  }
  std::int64_t chosen_cost = estimate_offline_comm(plan, request, placement, g, items, params);
  if (!first && best_cost < chosen_cost) return best_gather;
  return plan;
}

std::string plan_csv(const RoutePlan& plan, std::int64_t request_id,
                     const ItemCatalog& items) {
  std::ostringstream os;
  for (const auto& [dc, list] : plan.served) {
    for (ItemId x : list) {
      os << request_id << "," << x << "," << dc << "," << items.at(x).size_bytes << "\n";
    }
  }
  os.precision(9);
  os << request_id << ",summary," << plan.latency_s << "," << plan.wan_bytes << "\n";
  return os.str();
}

}  // namespace geolayer
