#include "geolayer/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <functional>
#include <limits>
#include <set>

namespace geolayer {

CostBreakdown reference_objective(const PlacementState& placement,
                                  const RoutingState& routing,
                                  const DemandMatrix& demand, const WanProfile& wan,
                                  const ItemCatalog& items,
                                  const std::vector<Pattern>& patterns,
                                  const CostParams& params) {
  CostBreakdown b;

  for (ItemId x = 0; x < placement.item_count; ++x) {
    const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
    for (DcId d = 0; d < placement.dc_count; ++d) {
      if (placement.has(x, d)) b.storage += gb * wan.dcs[static_cast<size_t>(d)].store_price;
    }
  }

  for (ItemId x = 0; x < demand.item_count; ++x) {
    for (DcId y = 0; y < demand.dc_count; ++y) {
      const double r = demand.read_rate(x, y);
      if (r == 0.0) continue;
      DcId d = routing.server(x, y);
      if (d < 0 || !placement.has(x, d)) {
        throw OracleError("reference_objective: invalid routing for item " +
                          std::to_string(x));
      }
      double per_op = wan.dcs[static_cast<size_t>(d)].read_price / 1e6;
      if (y != d) {
        per_op += static_cast<double>(items.at(x).size_bytes) / 1e9 *
                  wan.link(d, y).transfer_price;
      }
      b.read += r * per_op;
    }
  }

  for (ItemId x = 0; x < demand.item_count; ++x) {
    const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
    double item_write = 0.0;
    for (DcId y = 0; y < demand.dc_count; ++y) {
      const double w = demand.write_rate(x, y);
      if (w == 0.0) continue;
      double per_write = wan.dcs[static_cast<size_t>(y)].write_price / 1e6;
      for (DcId d = 0; d < placement.dc_count; ++d) {
        if (d == y || !placement.has(x, d)) continue;
        per_write += wan.dcs[static_cast<size_t>(d)].write_price / 1e6 +
                     gb * wan.link(y, d).transfer_price;
      }
      item_write += w * per_write;
    }
    b.write += item_write;
  }

  for (const Pattern& p : patterns) {
    for (const auto& [y, declared] : p.origin_rates) {
      const double rate = demand.pattern_read(p.id, y);
      if (rate == 0.0) continue;
      auto it = routing.rho.find({p.id, y});
      if (it == routing.rho.end() || it->second.empty()) {
        throw OracleError("reference_objective: empty serving set for pattern " +
                          std::to_string(p.id));
      }
      double lmin = std::numeric_limits<double>::infinity();
      double lmax = 0.0;
      for (DcId d : it->second) {
        std::int64_t payload = 0;
        for (ItemId x : p.items) {
          if (routing.server(x, y) == d) payload += items.at(x).size_bytes;
        }
        double l = wan.request_latency(y, d, payload);
        lmin = std::min(lmin, l);
        lmax = std::max(lmax, l);
      }
      double dl = lmin > 0.0 ? (lmax - lmin) / lmin : 0.0;
      double units = params.lambda1 * (static_cast<double>(it->second.size()) - 1.0) +
                     params.lambda2 * dl;
      b.association += rate * units * params.assoc_scale;
    }
  }

  b.total = b.storage + b.read + b.write + b.association;
  return b;
}

RoutingState oracle_route(const PlacementState& placement, const DemandMatrix& demand,
                          const WanProfile& wan, const ItemCatalog& items,
                          const std::vector<Pattern>& patterns, RoutePolicy policy) {
  RoutingState routing;
  for (ItemId x = 0; x < demand.item_count; ++x) {
    const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
    for (DcId y = 0; y < demand.dc_count; ++y) {
      if (demand.read_rate(x, y) == 0.0) continue;
      DcId best = -1;
      double best_cost = std::numeric_limits<double>::infinity();
      double best_lat = std::numeric_limits<double>::infinity();
      for (DcId d = 0; d < placement.dc_count; ++d) {
        if (!placement.has(x, d)) continue;
        double unit = wan.dcs[static_cast<size_t>(d)].read_price / 1e6;
        if (d != y) unit += gb * wan.link(d, y).transfer_price;
        double lat = wan.request_latency(y, d, items.at(x).size_bytes);
        double primary = policy == RoutePolicy::CheapestUnit ? unit : lat;
        double secondary = policy == RoutePolicy::CheapestUnit ? lat : unit;
        double best_primary = policy == RoutePolicy::CheapestUnit ? best_cost : best_lat;
        double best_secondary = policy == RoutePolicy::CheapestUnit ? best_lat : best_cost;
        if (primary < best_primary ||
            (primary == best_primary && secondary < best_secondary) ||
            (primary == best_primary && secondary == best_secondary && d < best)) {
          best_cost = unit;
          best_lat = lat;
          best = d;
        }
      }
      if (best < 0) throw OracleError("oracle_route: item without replica");
      routing.sigma[{x, y}] = best;
    }
  }
  derive_rho(routing, patterns, demand);
  return routing;
}

OracleResult solve_exact(const ItemCatalog& items, const std::vector<Pattern>& patterns,
                         const DemandMatrix& demand, const WanProfile& wan,
                         double gamma_max_s, const CostParams& params) {
  const std::int32_t n_items = static_cast<std::int32_t>(items.size());
  const std::int32_t n_dcs = wan.dc_count();
  if (n_items * n_dcs > 30) {
    throw OracleError("solve_exact: instance exceeds the 30-bit enumeration bound");
  }
  if (n_dcs > 8) {
    throw OracleError("solve_exact: at most 8 DCs supported");
  }

  // lower bounds for pruning: cheapest storage per item and cheapest read
  // unit per demanded (item, origin); write origin fees are placement-free
  std::vector<double> min_store(static_cast<size_t>(n_items), 0.0);
  std::vector<double> min_read(static_cast<size_t>(n_items), 0.0);
  double write_floor = 0.0;
  for (ItemId x = 0; x < n_items; ++x) {
    const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
    double ms = std::numeric_limits<double>::infinity();
    for (DcId d = 0; d < n_dcs; ++d) {
      ms = std::min(ms, gb * wan.dcs[static_cast<size_t>(d)].store_price);
    }
    min_store[static_cast<size_t>(x)] = ms;
    for (DcId y = 0; y < n_dcs; ++y) {
      const double r = demand.read_rate(x, y);
      if (r > 0.0) {
        double mu = std::numeric_limits<double>::infinity();
        for (DcId d = 0; d < n_dcs; ++d) {
          double unit = wan.dcs[static_cast<size_t>(d)].read_price / 1e6;
          if (d != y) unit += gb * wan.link(d, y).transfer_price;
          mu = std::min(mu, unit);
        }
        min_read[static_cast<size_t>(x)] += r * mu;
      }
      write_floor += demand.write_rate(x, y) *
                     wan.dcs[static_cast<size_t>(y)].write_price / 1e6;
    }
  }
  std::vector<double> suffix_lb(static_cast<size_t>(n_items) + 1, 0.0);
  for (ItemId x = n_items - 1; x >= 0; --x) {
    suffix_lb[static_cast<size_t>(x)] = suffix_lb[static_cast<size_t>(x) + 1] +
                                        min_store[static_cast<size_t>(x)] +
                                        min_read[static_cast<size_t>(x)];
  }

  OracleResult result;
  result.placement = PlacementState(n_items, n_dcs);
  double best_cost = std::numeric_limits<double>::infinity();
  char last_binding = '?';
  bool any_candidate = false;

  std::vector<std::uint32_t> masks(static_cast<size_t>(n_items), 1);
  std::uint64_t explored = 0;

  // per (item, mask, policy) routing tables so a leaf only aggregates
  // pattern-level terms
  const std::uint32_t full_mask = (1u << n_dcs) - 1;
  const int n_masks = static_cast<int>(full_mask) + 1;
  struct ItemRoute {
    std::array<std::int8_t, 8> server{};  // per origin
    double read_sum = 0.0;
    double lat_sum = 0.0;  // R_xy-weighted request latency
  };
  std::vector<ItemRoute> table(static_cast<size_t>(n_items) * n_masks * 2);
  auto table_at = [&](ItemId x, std::uint32_t mask, int policy) -> ItemRoute& {
    return table[(static_cast<size_t>(x) * n_masks + mask) * 2 +
                 static_cast<size_t>(policy)];
  };
  for (ItemId x = 0; x < n_items; ++x) {
    const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
    for (std::uint32_t mask = 1; mask <= full_mask; ++mask) {
      for (int policy = 0; policy < 2; ++policy) {
        ItemRoute& row = table_at(x, mask, policy);
        row.server.fill(-1);
        for (DcId y = 0; y < n_dcs; ++y) {
          const double r = demand.read_rate(x, y);
          if (r == 0.0) continue;
          DcId best = -1;
          double bcost = std::numeric_limits<double>::infinity();
          double blat = std::numeric_limits<double>::infinity();
          for (DcId d = 0; d < n_dcs; ++d) {
            if (!(mask & (1u << d))) continue;
            double unit = wan.dcs[static_cast<size_t>(d)].read_price / 1e6;
            if (d != y) unit += gb * wan.link(d, y).transfer_price;
            double lat = wan.request_latency(y, d, items.at(x).size_bytes);
            double p1 = policy == 0 ? unit : lat;
            double p2 = policy == 0 ? lat : unit;
            double b1 = policy == 0 ? bcost : blat;
            double b2 = policy == 0 ? blat : bcost;
            if (p1 < b1 || (p1 == b1 && p2 < b2) || (p1 == b1 && p2 == b2 && d < best)) {
              bcost = unit;
              blat = lat;
              best = d;
            }
          }
          row.server[static_cast<size_t>(y)] = static_cast<std::int8_t>(best);
          row.read_sum += r * bcost;
          row.lat_sum += r * wan.request_latency(y, best, items.at(x).size_bytes);
        }
      }
    }
  }

  // per-pattern demanded origins
  std::vector<std::vector<DcId>> pattern_origins(patterns.size());
  for (size_t pi = 0; pi < patterns.size(); ++pi) {
    for (const auto& [y, declared] : patterns[pi].origin_rates) {
      if (demand.pattern_read(patterns[pi].id, y) > 0.0) {
        pattern_origins[pi].push_back(y);
      }
    }
  }
  std::vector<double> exact_prefix(static_cast<size_t>(n_items) + 1, 0.0);

  // storage + sync-write cost of one item under a replica mask
  auto item_partial_cost = [&](ItemId x, std::uint32_t mask) {
    const double gb = static_cast<double>(items.at(x).size_bytes) / 1e9;
    double c = 0.0;
    for (DcId d = 0; d < n_dcs; ++d) {
      if (mask & (1u << d)) c += gb * wan.dcs[static_cast<size_t>(d)].store_price;
    }
    for (DcId y = 0; y < n_dcs; ++y) {
      const double w = demand.write_rate(x, y);
      if (w == 0.0) continue;
      for (DcId d = 0; d < n_dcs; ++d) {
        if (d == y || !(mask & (1u << d))) continue;
        c += w * (wan.dcs[static_cast<size_t>(d)].write_price / 1e6 +
                  gb * wan.link(y, d).transfer_price);
      }
    }
    return c;
  };

  const std::uint32_t full = full_mask;
  std::vector<double> prefix_cost(static_cast<size_t>(n_items) + 1, 0.0);
  std::vector<std::uint32_t> best_masks;
  int best_policy = -1;

  // depth-first lexicographic enumeration over per-item replica masks
  std::function<void(ItemId)> recurse = [&](ItemId x) {
    if (x == n_items) {
      ++explored;
      any_candidate = true;
      for (int policy = 0; policy < 2; ++policy) {
        // constraint (c): literal 1/|I| weighting
        double lat_sum = 0.0;
        double read_sum = 0.0;
        for (ItemId i = 0; i < n_items; ++i) {
          const ItemRoute& row = table_at(i, masks[static_cast<size_t>(i)], policy);
          lat_sum += row.lat_sum;
          read_sum += row.read_sum;
        }
        if (lat_sum / static_cast<double>(n_items) > gamma_max_s) {
          last_binding = 'c';
          continue;
        }
        // constraint (d) and association over the pattern requests
        double assoc = 0.0;
        bool ok = true;
        for (size_t pi = 0; pi < patterns.size() && ok; ++pi) {
          const Pattern& p = patterns[pi];
          for (DcId y : pattern_origins[pi]) {
            std::uint32_t serving = 0;
            std::array<std::int64_t, 8> payload{};
            for (ItemId px : p.items) {
              const ItemRoute& row = table_at(px, masks[static_cast<size_t>(px)], policy);
              std::int8_t d = row.server[static_cast<size_t>(y)];
              if (d < 0) continue;
              serving |= 1u << d;
              payload[static_cast<size_t>(d)] += items.at(px).size_bytes;
            }
            if (serving == 0) continue;
            double lmin = std::numeric_limits<double>::infinity();
            double lmax = 0.0;
            int nserve = 0;
            for (DcId d = 0; d < n_dcs; ++d) {
              if (!(serving & (1u << d))) continue;
              ++nserve;
              double l = wan.request_latency(y, d, payload[static_cast<size_t>(d)]);
              lmin = std::min(lmin, l);
              lmax = std::max(lmax, l);
            }
            if (lmax > p.eta * gamma_max_s) {
              ok = false;
              last_binding = 'd';
              break;
            }
            double dl = lmin > 0.0 ? (lmax - lmin) / lmin : 0.0;
            double units = params.lambda1 * (static_cast<double>(nserve) - 1.0) +
                           params.lambda2 * dl;
            assoc += demand.pattern_read(p.id, y) * units * params.assoc_scale;
          }
        }
        if (!ok) continue;
        double total = exact_prefix[static_cast<size_t>(n_items)] + write_floor +
                       read_sum + assoc;
        if (total < best_cost) {
          best_cost = total;
          best_masks = masks;
          best_policy = policy;
          result.feasible = true;
        }
      }
      return;
    }
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      double sw = item_partial_cost(x, mask);
      exact_prefix[static_cast<size_t>(x) + 1] = exact_prefix[static_cast<size_t>(x)] + sw;
      prefix_cost[static_cast<size_t>(x) + 1] =
          prefix_cost[static_cast<size_t>(x)] + sw + min_read[static_cast<size_t>(x)];
      double lb = prefix_cost[static_cast<size_t>(x) + 1] +
                  suffix_lb[static_cast<size_t>(x) + 1] + write_floor;
      if (lb >= best_cost) continue;
      masks[static_cast<size_t>(x)] = mask;
      recurse(x + 1);
    }
  };
  recurse(0);

  result.states_explored = explored;
  if (!result.feasible) {
    result.binding_constraint = any_candidate
                                    ? std::string(1, last_binding)
                                    : std::string("no candidate states");
    return result;
  }

  // rebuild the witness and report the reference-evaluated breakdown
  PlacementState best_state(n_items, n_dcs);
  for (ItemId i = 0; i < n_items; ++i) {
    for (DcId d = 0; d < n_dcs; ++d) {
      best_state.set(i, d, (best_masks[static_cast<size_t>(i)] & (1u << d)) != 0);
    }
  }
  result.placement = best_state;
  result.routing = oracle_route(best_state, demand, wan, items, patterns,
                                best_policy == 0 ? RoutePolicy::CheapestUnit
                                                 : RoutePolicy::NearestLatency);
  result.cost = reference_objective(best_state, result.routing, demand, wan, items,
                                    patterns, params);
  return result;
}

double gap_percent(double heuristic_cost, double optimal_cost) {
  if (optimal_cost <= 0.0) {
    throw OracleError("gap_percent: optimum must be positive");
  }
  return (heuristic_cost - optimal_cost) / optimal_cost * 100.0;
}

}  // namespace geolayer
