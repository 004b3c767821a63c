#include "geolayer/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace geolayer {

void DemandMatrix::add(const DemandMatrix& o) {
  for (size_t i = 0; i < reads.size(); ++i) reads[i] += o.reads[i];
  for (size_t i = 0; i < writes.size(); ++i) writes[i] += o.writes[i];
  for (const auto& [key, r] : o.pattern_reads) pattern_reads[key] += r;
}

std::string CostBreakdown::csv_row() const {
  std::ostringstream os;
  os.precision(12);
  os << storage << "," << read << "," << write << "," << association << "," << total;
  return os.str();
}

double storage_cost(const PlacementState& placement, const ItemCatalog& items,
                    const WanProfile& wan) {
  if (!placement.valid()) {
    throw CostError("storage_cost: some item has zero replicas");
  }
  double total = 0.0;
  for (ItemId x = 0; x < placement.item_count; ++x) {
    const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
    for (DcId d = 0; d < placement.dc_count; ++d) {
      if (placement.has(x, d)) {
        total += gb * wan.dcs[static_cast<size_t>(d)].store_price;
      }
    }
  }
  return total;
}

namespace {

double read_term(ItemId x, DcId y, DcId d, double rate, const WanProfile& wan,
                 const ItemCatalog& items) {
  const DataCenter& server = wan.dcs[static_cast<size_t>(d)];
  double per_op = server.read_price_per_op();
  if (y != d) {
    per_op += static_cast<double>(items.at(x).size_bytes) / 1e9 *
              wan.link(d, y).transfer_price;
  }
  return rate * per_op;
}

double write_term_item(ItemId x, const PlacementState& placement,
                       const DemandMatrix& demand, const WanProfile& wan,
                       const ItemCatalog& items) {
  double total = 0.0;
  const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
  for (DcId y = 0; y < demand.dc_count; ++y) {
    const double w = demand.write_rate(x, y);
    if (w == 0.0) continue;
    double per_write = wan.dcs[static_cast<size_t>(y)].write_price_per_op();
    for (DcId d = 0; d < placement.dc_count; ++d) {
      if (d == y || !placement.has(x, d)) continue;
      per_write += wan.dcs[static_cast<size_t>(d)].write_price_per_op() +
                   gb * wan.link(y, d).transfer_price;
    }
    total += w * per_write;
  }
  return total;
}

}  // namespace

double read_cost(const PlacementState& placement, const RoutingState& routing,
                 const DemandMatrix& demand, const WanProfile& wan,
                 const ItemCatalog& items) {
  double total = 0.0;
  for (ItemId x = 0; x < demand.item_count; ++x) {
    for (DcId y = 0; y < demand.dc_count; ++y) {
      const double r = demand.read_rate(x, y);
      if (r == 0.0) continue;
      DcId d = routing.server(x, y);
      if (d < 0) {
        throw CostError("read_cost: no sigma entry for item " + std::to_string(x) +
                        " origin " + std::to_string(y));
      }
      if (!placement.has(x, d)) {
        throw CostError("read_cost: constraint (a) violated, item " + std::to_string(x) +
                        " routed to DC " + std::to_string(d) + " without a replica");
      }
      total += read_term(x, y, d, r, wan, items);
    }
  }
  return total;
}

double write_cost(const PlacementState& placement, const DemandMatrix& demand,
                  const WanProfile& wan, const ItemCatalog& items) {
  double total = 0.0;
  for (ItemId x = 0; x < demand.item_count; ++x) {
    total += write_term_item(x, placement, demand, wan, items);
  }
  return total;
}

double pattern_serving_latency(const Pattern& p, DcId y, DcId d,
                               const RoutingState& routing, const ItemCatalog& items,
                               const WanProfile& wan) {
  std::int64_t payload = 0;
  for (ItemId x : p.items) {
    if (routing.server(x, y) == d) payload += items.at(x).size_bytes;
  }
  return wan.request_latency(y, d, payload);
}

namespace {

// One (p, y) term of Eq. C^A, in dollars.
double assoc_term(const Pattern& p, DcId y, double rate, const RoutingState& routing,
                  const WanProfile& wan, const ItemCatalog& items,
                  const CostParams& params) {
  auto it = routing.rho.find({p.id, y});
  if (it == routing.rho.end() || it->second.empty()) {
    throw CostError("association_penalty: empty serving set for pattern " +
                    std::to_string(p.id) + " origin " + std::to_string(y));
  }
  const std::vector<DcId>& serving = it->second;
  double lmin = std::numeric_limits<double>::infinity();
  double lmax = 0.0;
  for (DcId d : serving) {
    double l = pattern_serving_latency(p, y, d, routing, items, wan);
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
  }
  // Delta l is undefined when the cheapest responder is local (latency 0);
  // treated as zero disparity.
  double dl = lmin > 0.0 ? (lmax - lmin) / lmin : 0.0;
  double units = params.lambda1 * (static_cast<double>(serving.size()) - 1.0) +
                 params.lambda2 * dl;
  return rate * units * params.assoc_scale;
}

}  // namespace

double association_penalty(const RoutingState& routing, const DemandMatrix& demand,
                           const WanProfile& wan, const ItemCatalog& items,
                           const std::vector<Pattern>& patterns,
                           const CostParams& params) {
  double total = 0.0;
  for (const Pattern& p : patterns) {
    for (const auto& [y, rate] : p.origin_rates) {
      double r = demand.pattern_read(p.id, y);
      if (r == 0.0) continue;
      total += assoc_term(p, y, r, routing, wan, items, params);
    }
  }
  return total;
}

CostBreakdown total_objective(const PlacementState& placement,
                              const RoutingState& routing, const DemandMatrix& demand,
                              const WanProfile& wan, const ItemCatalog& items,
                              const std::vector<Pattern>& patterns,
                              const CostParams& params) {
  CostBreakdown b;
  b.storage = storage_cost(placement, items, wan);
  b.read = read_cost(placement, routing, demand, wan, items);
  b.write = write_cost(placement, demand, wan, items);
  b.association = association_penalty(routing, demand, wan, items, patterns, params);
  b.total = b.storage + b.read + b.write + b.association;
  return b;
}

void derive_rho(RoutingState& routing, const std::vector<Pattern>& patterns,
                const DemandMatrix& demand) {
  routing.rho.clear();
  for (const Pattern& p : patterns) {
    for (const auto& [y, rate] : p.origin_rates) {
      if (demand.pattern_read(p.id, y) == 0.0) continue;
      std::set<DcId> serving;
      for (ItemId x : p.items) {
        DcId d = routing.server(x, y);
        if (d >= 0) serving.insert(d);
      }
      routing.rho[{p.id, y}] = std::vector<DcId>(serving.begin(), serving.end());
    }
  }
}

ConstraintReport check_constraints(const PlacementState& placement,
                                   const RoutingState& routing,
                                   const DemandMatrix& demand, const WanProfile& wan,
                                   const ItemCatalog& items,
                                   const std::vector<Pattern>& patterns,
                                   double gamma_max_s) {
  ConstraintReport rep;
  auto violate = [&](char c, std::string w) {
    rep.feasible = false;
    rep.violations.push_back({c, std::move(w)});
  };

  // (e): at least one replica per item
  for (ItemId x = 0; x < placement.item_count; ++x) {
    if (placement.replica_count(x) == 0) {
      violate('e', "item " + std::to_string(x) + " has no replica");
    }
  }

  // (a): single server holding a replica for every demanded (x, y)
  double latency_sum = 0.0;
  for (ItemId x = 0; x < demand.item_count; ++x) {
    for (DcId y = 0; y < demand.dc_count; ++y) {
      const double r = demand.read_rate(x, y);
      if (r == 0.0) continue;
      DcId d = routing.server(x, y);
      if (d < 0) {
        violate('a', "no server for item " + std::to_string(x) + " origin " +
                         std::to_string(y));
        continue;
      }
      if (!placement.has(x, d)) {
        violate('a', "item " + std::to_string(x) + " origin " + std::to_string(y) +
                         " served by DC " + std::to_string(d) + " without replica");
      }
      latency_sum += r * wan.request_latency(y, d, items.at(x).size_bytes);
    }
  }

  // (b): every serving DC in rho holds the items it serves
  for (const Pattern& p : patterns) {
    for (const auto& [y, rate] : p.origin_rates) {
      if (demand.pattern_read(p.id, y) == 0.0) continue;
      auto it = routing.rho.find({p.id, y});
      if (it == routing.rho.end() || it->second.empty()) {
        violate('b', "pattern " + std::to_string(p.id) + " origin " + std::to_string(y) +
                         " has no serving DC");
        continue;
      }
      for (DcId d : it->second) {
        bool serves_any = false;
        for (ItemId x : p.items) {
          if (routing.server(x, y) == d) {
            serves_any = true;
            if (!placement.has(x, d)) {
              violate('b', "pattern " + std::to_string(p.id) + " item " +
                               std::to_string(x) + " at DC " + std::to_string(d) +
                               " without replica");
            }
          }
        }
        if (!serves_any) {
          violate('b', "pattern " + std::to_string(p.id) + " lists idle serving DC " +
                           std::to_string(d));
        }
      }
    }
  }

  // (c): average read latency, literal 1/|I| weighting
  if (placement.item_count > 0) {
    double avg = latency_sum / static_cast<double>(placement.item_count);
    if (avg > gamma_max_s) {
      std::ostringstream os;
      os.precision(9);
      os << "average read latency " << avg << " s exceeds " << gamma_max_s << " s";
      violate('c', os.str());
    }
  }

  // (d): straggler latency per pattern request
  for (const Pattern& p : patterns) {
    for (const auto& [y, rate] : p.origin_rates) {
      if (demand.pattern_read(p.id, y) == 0.0) continue;
      auto it = routing.rho.find({p.id, y});
      if (it == routing.rho.end() || it->second.empty()) continue;  // reported at (b)
      double worst = 0.0;
      for (DcId d : it->second) {
        worst = std::max(worst, pattern_serving_latency(p, y, d, routing, items, wan));
      }
      double bound = p.eta * gamma_max_s;
      if (worst > bound) {
        std::ostringstream os;
        os.precision(9);
        os << "pattern " << p.id << " origin " << y << " latency " << worst
           << " s exceeds eta*Gamma_max " << bound << " s";
        violate('d', os.str());
      }
    }
  }
  return rep;
}

namespace {

double storage_term_item(ItemId x, const PlacementState& placement,
                         const ItemCatalog& items, const WanProfile& wan) {
  const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
  double t = 0.0;
  for (DcId d = 0; d < placement.dc_count; ++d) {
    if (placement.has(x, d)) t += gb * wan.dcs[static_cast<size_t>(d)].store_price;
  }
  return t;
}

double read_terms_item(ItemId x, const PlacementState& placement,
                       const RoutingState& routing, const DemandMatrix& demand,
                       const WanProfile& wan, const ItemCatalog& items) {
  double t = 0.0;
  for (DcId y = 0; y < demand.dc_count; ++y) {
    const double r = demand.read_rate(x, y);
    if (r == 0.0) continue;
    DcId d = routing.server(x, y);
    if (d < 0 || !placement.has(x, d)) {
      throw CostError("marginal_gain: routing state violates constraint (a) for item " +
                      std::to_string(x));
    }
    t += read_term(x, y, d, r, wan, items);
  }
  return t;
}

// Association terms of every (p, y) request whose pattern contains item x.
double assoc_terms_item(ItemId x, const RoutingState& routing,
                        const DemandMatrix& demand, const WanProfile& wan,
                        const ItemCatalog& items, const std::vector<Pattern>& patterns,
                        const CostParams& params) {
  double t = 0.0;
  for (const Pattern& p : patterns) {
    if (std::find(p.items.begin(), p.items.end(), x) == p.items.end()) continue;
    for (const auto& [y, rate] : p.origin_rates) {
      double r = demand.pattern_read(p.id, y);
      if (r == 0.0) continue;
      t += assoc_term(p, y, r, routing, wan, items, params);
    }
  }
  return t;
}

void rederive_rho_for_item(ItemId x, RoutingState& routing,
                           const std::vector<Pattern>& patterns,
                           const DemandMatrix& demand) {
  for (const Pattern& p : patterns) {
    if (std::find(p.items.begin(), p.items.end(), x) == p.items.end()) continue;
    for (const auto& [y, rate] : p.origin_rates) {
      if (demand.pattern_read(p.id, y) == 0.0) continue;
      std::set<DcId> serving;
      for (ItemId xi : p.items) {
        DcId d = routing.server(xi, y);
        if (d >= 0) serving.insert(d);
      }
      routing.rho[{p.id, y}] = std::vector<DcId>(serving.begin(), serving.end());
    }
  }
}

}  // namespace

void apply_action(const Action& action, PlacementState& placement,
                  RoutingState& routing, const std::vector<Pattern>& patterns,
                  const DemandMatrix& demand) {
  switch (action.kind) {
    case ActionKind::AddReplica:
      placement.set(action.item, action.dc, true);
      break;
    case ActionKind::RemoveReplica:
      placement.set(action.item, action.dc, false);
      break;
    case ActionKind::Reroute:
      routing.sigma[{action.item, action.origin}] = action.dc;
      rederive_rho_for_item(action.item, routing, patterns, demand);
      break;
    case ActionKind::AddReplicaServeLocal:
      placement.set(action.item, action.dc, true);
      if (demand.read_rate(action.item, action.dc) > 0.0) {
        routing.sigma[{action.item, action.dc}] = action.dc;
        rederive_rho_for_item(action.item, routing, patterns, demand);
      }
      break;
  }
}

double marginal_gain(const Action& action, const PlacementState& placement,
                     const RoutingState& routing, const DemandMatrix& demand,
                     const WanProfile& wan, const ItemCatalog& items,
                     const std::vector<Pattern>& patterns, const CostParams& params) {
  const ItemId x = action.item;
  if (x < 0 || x >= placement.item_count) {
    throw CostError("marginal_gain: unknown item " + std::to_string(x));
  }
  switch (action.kind) {
    case ActionKind::AddReplica:
    case ActionKind::AddReplicaServeLocal:
      if (placement.has(x, action.dc)) {
        throw CostError("marginal_gain: inapplicable action, replica already present");
      }
      break;
    case ActionKind::RemoveReplica: {
      if (!placement.has(x, action.dc)) {
        throw CostError("marginal_gain: inapplicable action, no replica to remove");
      }
      if (placement.replica_count(x) <= 1) {
        throw CostError("marginal_gain: inapplicable action, last replica");
      }
      for (DcId y = 0; y < demand.dc_count; ++y) {
        if (demand.read_rate(x, y) > 0.0 && routing.server(x, y) == action.dc) {
          throw CostError("marginal_gain: inapplicable action, replica still serving");
        }
      }
      break;
    }
    case ActionKind::Reroute: {
      if (demand.read_rate(x, action.origin) == 0.0) {
        throw CostError("marginal_gain: inapplicable action, no demand to reroute");
      }
      if (!placement.has(x, action.dc)) {
        throw CostError("marginal_gain: inapplicable action, target holds no replica");
      }
      break;
    }
  }

  const bool touches_routing = action.kind == ActionKind::Reroute ||
                               action.kind == ActionKind::AddReplicaServeLocal;

  double before = storage_term_item(x, placement, items, wan) +
                  write_term_item(x, placement, demand, wan, items) +
                  read_terms_item(x, placement, routing, demand, wan, items);
  if (touches_routing) {
    before += assoc_terms_item(x, routing, demand, wan, items, patterns, params);
  }

  PlacementState after_p = placement;
  RoutingState after_r = routing;
  apply_action(action, after_p, after_r, patterns, demand);

  double after = storage_term_item(x, after_p, items, wan) +
                 write_term_item(x, after_p, demand, wan, items) +
                 read_terms_item(x, after_p, after_r, demand, wan, items);
  if (touches_routing) {
    after += assoc_terms_item(x, after_r, demand, wan, items, patterns, params);
  }
  return before - after;
}

}  // namespace geolayer
