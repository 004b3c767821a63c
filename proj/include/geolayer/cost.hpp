// Decision variables (delta, sigma, rho) and the cost objective: storage,
// read, write and association components, constraint checking, and the
// surrogate marginal gain used by placement decisions.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolayer/graph.hpp"
#include "geolayer/wan.hpp"

namespace geolayer {

class CostError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// delta_xd as a dense bitmap.
struct PlacementState {
  std::int32_t item_count = 0;
  std::int32_t dc_count = 0;
  std::vector<std::uint8_t> delta;

  PlacementState() = default;
  PlacementState(std::int32_t items, std::int32_t dcs)
      : item_count(items), dc_count(dcs),
        delta(static_cast<size_t>(items) * static_cast<size_t>(dcs), 0) {}

  bool has(ItemId x, DcId d) const {
    return delta[static_cast<size_t>(x) * static_cast<size_t>(dc_count) +
                 static_cast<size_t>(d)] != 0;
  }
  void set(ItemId x, DcId d, bool v) {
    delta[static_cast<size_t>(x) * static_cast<size_t>(dc_count) +
          static_cast<size_t>(d)] = v ? 1 : 0;
  }
  int replica_count(ItemId x) const {
    int n = 0;
    for (DcId d = 0; d < dc_count; ++d) n += has(x, d);
    return n;
  }
  std::vector<DcId> holders(ItemId x) const {
    std::vector<DcId> out;
    for (DcId d = 0; d < dc_count; ++d) {
      if (has(x, d)) out.push_back(d);
    }
    return out;
  }
  // every item must keep at least one replica
  bool valid() const {
    for (ItemId x = 0; x < item_count; ++x) {
      if (replica_count(x) == 0) return false;
    }
    return true;
  }
};

// sigma_xyd (one server per item-origin) and rho_pyd (serving DC sets).
struct RoutingState {
  std::map<std::pair<ItemId, DcId>, DcId> sigma;
  std::map<std::pair<PatternId, DcId>, std::vector<DcId>> rho;

  DcId server(ItemId x, DcId y) const {
    auto it = sigma.find({x, y});
    return it == sigma.end() ? -1 : it->second;
  }
};

struct DemandMatrix {
  std::int32_t item_count = 0;
  std::int32_t dc_count = 0;
  std::vector<double> reads;   // R_xy, item-major
  std::vector<double> writes;  // W_xy
  std::map<std::pair<PatternId, DcId>, double> pattern_reads;  // R_py

  DemandMatrix() = default;
  DemandMatrix(std::int32_t items, std::int32_t dcs)
      : item_count(items), dc_count(dcs),
        reads(static_cast<size_t>(items) * static_cast<size_t>(dcs), 0.0),
        writes(static_cast<size_t>(items) * static_cast<size_t>(dcs), 0.0) {}

  double read_rate(ItemId x, DcId y) const {
    return reads[static_cast<size_t>(x) * static_cast<size_t>(dc_count) +
                 static_cast<size_t>(y)];
  }
  double write_rate(ItemId x, DcId y) const {
    return writes[static_cast<size_t>(x) * static_cast<size_t>(dc_count) +
                  static_cast<size_t>(y)];
  }
  double& read_rate(ItemId x, DcId y) {
    return reads[static_cast<size_t>(x) * static_cast<size_t>(dc_count) +
                 static_cast<size_t>(y)];
  }
  double& write_rate(ItemId x, DcId y) {
    return writes[static_cast<size_t>(x) * static_cast<size_t>(dc_count) +
                  static_cast<size_t>(y)];
  }
  double total_read_rate(ItemId x) const {
    double s = 0.0;
    for (DcId y = 0; y < dc_count; ++y) s += read_rate(x, y);
    return s;
  }
  double pattern_read(PatternId p, DcId y) const {
    auto it = pattern_reads.find({p, y});
    return it == pattern_reads.end() ? 0.0 : it->second;
  }
  void add(const DemandMatrix& o);
};

struct CostParams {
  double lambda1 = 0.5;
  double lambda2 = 0.5;
  double assoc_scale = 1.0;  // $ per penalty unit
};

struct CostBreakdown {
  double storage = 0.0;
  double read = 0.0;
  double write = 0.0;
  double association = 0.0;
  double total = 0.0;

  std::string csv_row() const;
};

double storage_cost(const PlacementState& placement, const ItemCatalog& items,
                    const WanProfile& wan);

double read_cost(const PlacementState& placement, const RoutingState& routing,
                 const DemandMatrix& demand, const WanProfile& wan,
                 const ItemCatalog& items);

double write_cost(const PlacementState& placement, const DemandMatrix& demand,
                  const WanProfile& wan, const ItemCatalog& items);

double association_penalty(const RoutingState& routing, const DemandMatrix& demand,
                           const WanProfile& wan, const ItemCatalog& items,
                           const std::vector<Pattern>& patterns,
                           const CostParams& params);

CostBreakdown total_objective(const PlacementState& placement,
                              const RoutingState& routing, const DemandMatrix& demand,
                              const WanProfile& wan, const ItemCatalog& items,
                              const std::vector<Pattern>& patterns,
                              const CostParams& params);

// Serving latency of pattern p from origin y at DC d given sigma: the payload
// is the total size of p's items that d serves for y.
double pattern_serving_latency(const Pattern& p, DcId y, DcId d,
                               const RoutingState& routing, const ItemCatalog& items,
                               const WanProfile& wan);

// rho derived from sigma: d serves (p, y) iff it serves some item of p for y.
void derive_rho(RoutingState& routing, const std::vector<Pattern>& patterns,
                const DemandMatrix& demand);

struct ConstraintViolation {
  char constraint = '?';
  std::string witness;
};

struct ConstraintReport {
  bool feasible = true;
  std::vector<ConstraintViolation> violations;
};

ConstraintReport check_constraints(const PlacementState& placement,
                                   const RoutingState& routing,
                                   const DemandMatrix& demand, const WanProfile& wan,
                                   const ItemCatalog& items,
                                   const std::vector<Pattern>& patterns,
                                   double gamma_max_s);

enum class ActionKind {
  AddReplica,
  RemoveReplica,
  Reroute,
  // add a replica at `dc` and repoint that DC's own reads of the item to it
  AddReplicaServeLocal,
};

struct Action {
  ActionKind kind = ActionKind::AddReplica;
  ItemId item = -1;
  DcId dc = -1;      // replica target for add/remove, new server for reroute
  DcId origin = -1;  // reroute only
};

// Signed surrogate gain in dollars: objective(before) - objective(after),
// evaluated on the affected terms only. Positive means the action lowers the
// objective and is acceptable under the non-increase rule.
double marginal_gain(const Action& action, const PlacementState& placement,
                     const RoutingState& routing, const DemandMatrix& demand,
                     const WanProfile& wan, const ItemCatalog& items,
                     const std::vector<Pattern>& patterns, const CostParams& params);

// Applies the action in place (placement and routing).
void apply_action(const Action& action, PlacementState& placement,
                  RoutingState& routing, const std::vector<Pattern>& patterns,
                  const DemandMatrix& demand);

}  // namespace geolayer
