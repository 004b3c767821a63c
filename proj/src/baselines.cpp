#include "geolayer/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace geolayer {

PlacementState place_random_k(const ItemCatalog& items, int k, std::int32_t dc_count,
                              std::uint64_t seed) {
  if (k < 1 || k > dc_count) {
    throw std::invalid_argument("place_random_k: k must be in [1, dc_count]");
  }
  std::mt19937_64 rng(seed);
  PlacementState placement(static_cast<std::int32_t>(items.size()), dc_count);
  std::vector<DcId> others;
  for (ItemId x = 0; x < placement.item_count; ++x) {
    DcId home = items.at(x).home;
    placement.set(x, home, true);
    others.clear();
    for (DcId d = 0; d < dc_count; ++d) {
      if (d != home) others.push_back(d);
    }
    std::shuffle(others.begin(), others.end(), rng);
    for (int i = 0; i < k - 1; ++i) placement.set(x, others[static_cast<size_t>(i)], true);
  }
  return placement;
}

PlacementState place_top_k(const ItemCatalog& items, int k, const DemandMatrix& demand) {
  PlacementState placement(static_cast<std::int32_t>(items.size()), demand.dc_count);
  std::vector<DcId> order(static_cast<size_t>(demand.dc_count));
  for (ItemId x = 0; x < placement.item_count; ++x) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](DcId a, DcId b) {
      double ra = demand.read_rate(x, a);
      double rb = demand.read_rate(x, b);
      if (ra != rb) return ra > rb;
      return a < b;
    });
    for (int i = 0; i < std::min<int>(k, demand.dc_count); ++i) {
      placement.set(x, order[static_cast<size_t>(i)], true);
    }
  }
  return placement;
}

RoutePlan route_random(const Pattern& p, DcId origin, const PlacementState& placement,
                       const WanProfile& wan, const ItemCatalog& items,
                       std::mt19937_64& rng) {
  RoutePlan plan;
  plan.pattern = p.id;
  plan.origin = origin;
  for (ItemId x : p.items) {
    std::vector<DcId> holders = placement.holders(x);
    if (holders.empty()) {
      throw RoutingError("route_random: item " + std::to_string(x) +
                         " has no replica anywhere");
    }
    std::uniform_int_distribution<size_t> pick(0, holders.size() - 1);
    plan.served[holders[pick(rng)]].push_back(x);
  }
  auto payload = plan.payloads(items);
  plan.latency_s = wan.pattern_latency(origin, payload);
  for (const auto& [dc, bytes] : payload) {
    if (dc != origin) plan.wan_bytes += bytes;
  }
  return plan;
}

}  // namespace geolayer
