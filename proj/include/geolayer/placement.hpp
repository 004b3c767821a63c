// Overlap-centric replica placement over the layered graph: pattern sinking,
// replication-gain decisions, overlap decomposition, regional competition via
// heat diffusion, pre-caching, online eviction and update maintenance.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolayer/cost.hpp"
#include "geolayer/dhd.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/layered.hpp"
#include "geolayer/routing.hpp"
#include "geolayer/wan.hpp"

namespace geolayer {

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlacementConfig {
  double gamma_max_s = 1.0;
  CostParams cost;
  DhdParams dhd;
  double theta_quantile = 0.55;      // pre-cache selection cut
  double theta_c_quantile = 0.10;    // eviction cut
  int competition_max_sweeps = 50;
  double competition_tol = 1e-6;
  int eviction_sweeps = 1;
  bool precache = true;
};

// Pattern or overlap region descending through the hierarchy.
struct PlaceObject {
  bool is_region = false;
  int id = -1;                          // pattern id or region id
  std::vector<ItemId> items;
  std::vector<PatternId> contributors;  // patterns behind a region
  std::map<DcId, double> origin_rates;
};

struct Region {
  int id = -1;
  std::vector<ItemId> items;            // omega
  std::vector<PatternId> patterns;      // contributing patterns
  double read_rate = 0.0;
};

enum class DecisionBranch { Sink, Replicate, Compete, Precache };

struct PlacementDecision {
  int seq = 0;
  int layer = 0;
  int cluster = -1;   // linking bridge subgraph id, -1 for sinking commits
  int target = -1;    // hierarchy node id
  std::string kind;   // "pattern" or "region"
  std::string object_id;
  double gain = 0.0;
  DecisionBranch branch = DecisionBranch::Sink;
  std::vector<ItemId> items;  // committed item set, kept for replay
};

struct PlacementLog {
  std::vector<PlacementDecision> decisions;
  std::string csv() const;
};

// Re-materializes delta from a log: home copies plus every decision whose
// target is a DC node.
PlacementState replay_log(const PlacementLog& log, const ItemCatalog& items,
                          std::int32_t dc_count);

// Per-layer queues of (object index, holding hierarchy node).
struct PatternDistribution {
  std::vector<PlaceObject> objects;
  std::map<int, std::vector<std::pair<int, int>>> queues;  // layer -> entries
  std::vector<std::vector<int>> held_at;                   // per node, object indices
};

// Disjoint regions by exact membership signature across the given item sets.
std::vector<Region> decompose_overlaps(const std::vector<PlaceObject>& objects,
                                       const std::vector<Pattern>& patterns,
                                       const DemandMatrix& demand,
                                       const ItemCatalog& items);

class PlacementEngine {
 public:
  PlacementEngine(const Graph& g, const Partitioning& part, const ItemCatalog& items,
                  const std::vector<Pattern>& patterns, const DemandMatrix& demand,
                  const WanProfile& wan, const LayeredGraph& lg,
                  PlacementConfig cfg);

  // Alg. 1: every pattern descends to the first node whose layer matches its
  // latency requirement, fully replicating into requesting children on the way.
  PatternDistribution sink_patterns();

  // Surrogate gain of fully replicating the object into every requesting
  // member of the cluster linked by `node`, versus serving remotely from the
  // current holders.
  double replication_gain(const PlaceObject& obj, int node) const;

  // DHD competition between candidate nodes for a region; winner is the node
  // whose held data diffuses the most heat into the region, access frequency
  // deciding when no heat reaches it. held_per_candidate aligns with
  // candidates and carries each node's currently held items.
  int regional_competition(const Region& region, const std::vector<int>& candidates,
                           const std::vector<std::vector<ItemId>>& held_per_candidate) const;

  // Alg. 2 end to end; also refreshes the internal working placement.
  std::pair<PlacementState, PlacementLog> place_all();

  // Pre-cache the hot steady-state subgraph at one DC; returns cached items.
  std::vector<ItemId> precache_hot(DcId dc, double theta_quantile,
                                   PlacementState& placement) const;

  // Alg. 3 for one access batch. `cache_heat` persists across batches.
  std::vector<ItemId> evict_cold(DcId dc, const std::map<ItemId, double>& batch_reads,
                                 double theta_c, PlacementState& placement,
                                 RoutingState& routing,
                                 std::map<ItemId, double>& cache_heat) const;

  const PlacementConfig& config() const { return cfg_; }

 private:
  void commit(const PlaceObject& obj, int node, int cluster_bs, double gain,
              DecisionBranch branch, PlacementState& placement, PlacementLog& log,
              std::vector<std::vector<int>>& held_at,
              std::map<int, std::vector<std::pair<int, int>>>& queues, int obj_idx);
  std::vector<int> requesting_children(const PlaceObject& obj, int node) const;
  bool requests(const PlaceObject& obj, int node) const;
  DcId anchor_dc(const PlaceObject& obj, int node) const;

  const Graph& g_;
  const Partitioning& part_;
  const ItemCatalog& items_;
  const std::vector<Pattern>& patterns_;
  const DemandMatrix& demand_;
  const WanProfile& wan_;
  const LayeredGraph& lg_;
  PlacementConfig cfg_;
  PlacementState working_;   // current holders seen by gain evaluation
  int region_counter_ = 0;
};

struct UpdateOp {
  enum Kind { Insert, Delete } kind = Insert;
  ItemId item = -1;
};

// Hybrid maintenance: inserts materialize at the home DC and wait for the
// next placement round; deletes clear every replica bottom-up and drop the
// item's routing rows.
void apply_update(const UpdateOp& op, PlacementState& placement, RoutingState& routing,
                  const ItemCatalog& items, const LayeredGraph& lg);

}  // namespace geolayer
