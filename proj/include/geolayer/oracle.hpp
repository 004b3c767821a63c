// Exact minimization of the storage/read/write/association objective on tiny
// instances by exhaustive enumeration of delta with per-request routing,
// plus an independent objective evaluator used to cross-check the cost model.
#pragma once

#include <cstdint>
#include <string>

#include "geolayer/cost.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/wan.hpp"

namespace geolayer {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Straightforward re-derivation of the objective, written independently of
// the cost module so the two can cross-check each other.
CostBreakdown reference_objective(const PlacementState& placement,
                                  const RoutingState& routing,
                                  const DemandMatrix& demand, const WanProfile& wan,
                                  const ItemCatalog& items,
                                  const std::vector<Pattern>& patterns,
                                  const CostParams& params);

enum class RoutePolicy {
  CheapestUnit,   // lowest read unit cost, latency then id break ties
  NearestLatency, // lowest request latency, id breaks ties
};

// Per-request routing for a fixed placement; rho follows sigma.
RoutingState oracle_route(const PlacementState& placement, const DemandMatrix& demand,
                          const WanProfile& wan, const ItemCatalog& items,
                          const std::vector<Pattern>& patterns,
                          RoutePolicy policy = RoutePolicy::CheapestUnit);

struct OracleResult {
  bool feasible = false;
  PlacementState placement;
  RoutingState routing;
  CostBreakdown cost;
  std::string binding_constraint;  // set when infeasible
  std::uint64_t states_explored = 0;
};

// Enumerates every placement (non-empty replica set per item) in
// lexicographic order, prunes on a storage/read/write lower bound, and keeps
// the cheapest feasible state. Guarded to item_count * dc_count <= 30.
OracleResult solve_exact(const ItemCatalog& items, const std::vector<Pattern>& patterns,
                         const DemandMatrix& demand, const WanProfile& wan,
                         double gamma_max_s, const CostParams& params);

// (C - C*) / C* * 100
double gap_percent(double heuristic_cost, double optimal_cost);

}  // namespace geolayer
