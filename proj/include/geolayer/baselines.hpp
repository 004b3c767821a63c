// Comparison strategies: Random-k and Top-k placement with random routing.
#pragma once

#include <cstdint>
#include <random>

#include "geolayer/cost.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/routing.hpp"
#include "geolayer/wan.hpp"

namespace geolayer {

// home copy plus uniformly random extra replicas up to k distinct DCs
PlacementState place_random_k(const ItemCatalog& items, int k, std::int32_t dc_count,
                              std::uint64_t seed);

// the k DCs with the highest per-item read rates, ties by DC id
PlacementState place_top_k(const ItemCatalog& items, int k, const DemandMatrix& demand);

// every item served by a uniformly random replica holder
RoutePlan route_random(const Pattern& p, DcId origin, const PlacementState& placement,
                       const WanProfile& wan, const ItemCatalog& items,
                       std::mt19937_64& rng);

}  // namespace geolayer
