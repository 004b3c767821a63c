// Stepwise layered routing: online bottom-up expanding retrieval over the
// hierarchy, and offline top-down localization followed by bottom-up
// assembly with the migration test.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolayer/cost.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/layered.hpp"
#include "geolayer/wan.hpp"

namespace geolayer {

class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RoutePlan {
  PatternId pattern = -1;
  DcId origin = -1;
  std::map<DcId, std::vector<ItemId>> served;  // per-DC served item sets
  double latency_s = 0.0;                      // straggler latency
  std::int64_t wan_bytes = 0;

  std::map<DcId, std::int64_t> payloads(const ItemCatalog& items) const;
};

// Replica holder with the lowest request latency for (x, y); ties go to the
// lower DC id.
DcId nearest_holder(ItemId x, DcId y, const PlacementState& placement,
                    const WanProfile& wan, const ItemCatalog& items);

// Resolve locally first, then climb the origin's hierarchy chain; inside each
// bridge subgraph's span greedily pick the DC holding the largest subset of
// the still-missing items.
RoutePlan route_online(const Pattern& p, DcId origin, const PlacementState& placement,
                       const LayeredGraph& lg, const WanProfile& wan,
                       const ItemCatalog& items);

struct MigrationParams {
  double iota = 1.0;             // planned iterations
  std::int64_t msg_bytes = 1024; // s^msg
  double xi_fraction = 0.2;      // xi as a share of inter-DC message volume
  double xi_bytes = 0.0;         // resolved per request
  std::map<int, double> eta_per_layer;  // layer -> eta_L in (0, 1]
};

// iota * s_msg * (|I_rep| + |BS|) - local bytes > (1 - eta_L) * xi
bool migration_test(std::int64_t replica_vertices, std::int64_t boundary_vertices,
                    std::int64_t local_bytes, double eta_l, const MigrationParams& params);

struct AssemblyPlan {
  std::vector<DcId> retained;                    // execution DCs
  std::map<ItemId, DcId> location;               // final item locations
  struct Migration {
    ItemId item;
    DcId from;
    DcId to;
  };
  std::vector<Migration> migrations;
  std::int64_t migration_bytes = 0;
  std::int64_t wan_bytes = 0;                    // migration + iteration traffic
  std::int64_t iteration_bytes = 0;
  double migration_ratio = 0.0;                  // migrated / requested items
};

// eta_L per layer: mean link latency of the layer over the top layer's mean.
std::map<int, double> layer_eta(const LayeredGraph& lg, const Graph& g,
                                const Partitioning& part, const WanProfile& wan);

AssemblyPlan route_offline(const std::vector<ItemId>& request,
                           const PlacementState& placement, const LayeredGraph& lg,
                           const Graph& g, const Partitioning& part,
                           const WanProfile& wan, const ItemCatalog& items,
                           MigrationParams params);

// migration bytes + iota * s_msg * (replica vertices + boundary vertices
// across retained sites)
std::int64_t estimate_offline_comm(const AssemblyPlan& plan,
                                   const std::vector<ItemId>& request,
                                   const PlacementState& placement, const Graph& g,
                                   const ItemCatalog& items,
                                   const MigrationParams& params);

// gather-everything-to-one-DC reference plan for the given destination
AssemblyPlan gather_all_plan(const std::vector<ItemId>& request, DcId destination,
                             const PlacementState& placement, const Graph& g,
                             const WanProfile& wan, const ItemCatalog& items,
                             const MigrationParams& params);

std::string plan_csv(const RoutePlan& plan, std::int64_t request_id,
                     const ItemCatalog& items);

}  // namespace geolayer
