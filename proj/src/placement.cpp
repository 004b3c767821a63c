#include "geolayer/placement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geolayer {

std::string PlacementLog::csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "seq,layer,cluster,target,kind,object_id,gain\n";
  for (const PlacementDecision& d : decisions) {
    os << d.seq << "," << d.layer << "," << d.cluster << "," << d.target << ","
       << d.kind << "," << d.object_id << "," << d.gain << "\n";
  }
  return os.str();
}

PlacementState replay_log(const PlacementLog& log, const ItemCatalog& items,
                          std::int32_t dc_count) {
  PlacementState placement(static_cast<std::int32_t>(items.size()), dc_count);
  for (ItemId x = 0; x < placement.item_count; ++x) {
    placement.set(x, items.at(x).home, true);
  }
  for (const PlacementDecision& d : log.decisions) {
    if (d.target < dc_count) {
      for (ItemId x : d.items) placement.set(x, d.target, true);
    }
  }
  return placement;
}

namespace {

std::string object_tag(const PlaceObject& obj) {
  return (obj.is_region ? "r" : "p") + std::to_string(obj.id);
}

// Effective read rate of a pattern per origin: live demand when present,
// otherwise the pattern's declared rates.
std::map<DcId, double> effective_rates(const Pattern& p, const DemandMatrix& demand) {
  std::map<DcId, double> rates;
  bool any = false;
  for (DcId y = 0; y < demand.dc_count; ++y) {
    double r = demand.pattern_read(p.id, y);
    if (r > 0.0) {
      rates[y] = r;
      any = true;
    }
  }
  if (!any) return p.origin_rates;
  return rates;
}

double object_write_rate(const PlaceObject& obj, const DemandMatrix& demand) {
  double w = 0.0;
  for (ItemId x : obj.items) {
    for (DcId y = 0; y < demand.dc_count; ++y) w += demand.write_rate(x, y);
  }
  return w;
}

double object_read_rate(const PlaceObject& obj) {
  double r = 0.0;
  for (const auto& [y, rate] : obj.origin_rates) r += rate;
  return r;
}

// quantile cut as a count: keep the top (n - floor(q*n)) positive entries by
// (value desc, id asc); q = 1 keeps nothing
std::vector<int> select_top_quantile(const std::vector<double>& values, double q) {
  const int n = static_cast<int>(values.size());
  int keep = n - static_cast<int>(std::floor(q * static_cast<double>(n)));
  keep = std::clamp(keep, 0, n);
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[static_cast<size_t>(a)] != values[static_cast<size_t>(b)]) {
      return values[static_cast<size_t>(a)] > values[static_cast<size_t>(b)];
    }
    return a < b;
  });
  std::vector<int> out;
  for (int i = 0; i < keep; ++i) {
    int v = order[static_cast<size_t>(i)];
    if (values[static_cast<size_t>(v)] > 0.0) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<Region> decompose_overlaps(const std::vector<PlaceObject>& objects,
                                       const std::vector<Pattern>& patterns,
                                       const DemandMatrix& demand,
                                       const ItemCatalog& items) {
  if (objects.empty()) throw PlacementError("decompose_overlaps: no objects");
  std::map<ItemId, std::vector<int>> membership;
  for (int i = 0; i < static_cast<int>(objects.size()); ++i) {
    for (ItemId x : objects[static_cast<size_t>(i)].items) {
      auto& sig = membership[x];
      if (sig.empty() || sig.back() != i) sig.push_back(i);
    }
  }
  std::map<std::vector<int>, Region> by_signature;
  for (const auto& [x, sig] : membership) {
    Region& r = by_signature[sig];
    r.items.push_back(x);
    if (r.patterns.empty()) {
      std::set<PatternId> contrib;
      for (int i : sig) {
        const PlaceObject& o = objects[static_cast<size_t>(i)];
        if (o.is_region) {
          contrib.insert(o.contributors.begin(), o.contributors.end());
        } else {
          contrib.insert(o.id);
        }
      }
      r.patterns.assign(contrib.begin(), contrib.end());
    }
  }
  std::vector<Region> out;
  for (auto& [sig, r] : by_signature) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(),
            [](const Region& a, const Region& b) { return a.items.front() < b.items.front(); });
  for (Region& r : out) {
    for (PatternId pid : r.patterns) {
      for (const auto& [y, rate] :
           effective_rates(patterns.at(static_cast<size_t>(pid)), demand)) {
        r.read_rate += rate;
      }
    }
  }
  return out;
}

PlacementEngine::PlacementEngine(const Graph& g, const Partitioning& part,
                                 const ItemCatalog& items,
                                 const std::vector<Pattern>& patterns,
                                 const DemandMatrix& demand, const WanProfile& wan,
                                 const LayeredGraph& lg, PlacementConfig cfg)
    : g_(g), part_(part), items_(items), patterns_(patterns), demand_(demand),
      wan_(wan), lg_(lg), cfg_(std::move(cfg)),
      working_(static_cast<std::int32_t>(items.size()), wan.dc_count()) {
  for (ItemId x = 0; x < working_.item_count; ++x) {
    working_.set(x, items_.at(x).home, true);
  }
}

bool PlacementEngine::requests(const PlaceObject& obj, int node) const {
  for (DcId d : lg_.dc_span[static_cast<size_t>(node)]) {
    auto it = obj.origin_rates.find(d);
    if (it != obj.origin_rates.end() && it->second > 0.0) return true;
  }
  return false;
}

std::vector<int> PlacementEngine::requesting_children(const PlaceObject& obj,
                                                      int node) const {
  std::vector<int> out;
  for (int c : lg_.children[static_cast<size_t>(node)]) {
    if (requests(obj, c)) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DcId PlacementEngine::anchor_dc(const PlaceObject& obj, int node) const {
  DcId best = -1;
  double best_rate = -1.0;
  for (DcId d : lg_.dc_span[static_cast<size_t>(node)]) {
    double r = 0.0;
    auto it = obj.origin_rates.find(d);
    if (it != obj.origin_rates.end()) r = it->second;
    if (r > best_rate || (r == best_rate && (best < 0 || d < best))) {
      best_rate = r;
      best = d;
    }
  }
  return best;
}

PatternDistribution PlacementEngine::sink_patterns() {
  PatternDistribution dist;
  dist.held_at.assign(static_cast<size_t>(lg_.node_count()), {});

  for (const Pattern& p : patterns_) {
    PlaceObject obj;
    obj.is_region = false;
    obj.id = p.id;
    obj.items = p.items;
    obj.contributors = {p.id};
    obj.origin_rates = effective_rates(p, demand_);
    if (object_read_rate(obj) <= 0.0) continue;
    if (p.requirement_s <= 0.0) {
      throw PlacementError("pattern " + std::to_string(p.id) +
                           " has no positive latency requirement");
    }
    const int req_layer = lg_.thresholds.layer_of(p.requirement_s);
    int obj_idx = static_cast<int>(dist.objects.size());
    dist.objects.push_back(obj);

    // descend from every requesting root, replicating into requesting
    // children while the node's layer still overshoots the requirement
    std::vector<int> frontier;
    for (int r : lg_.roots) {
      if (requests(obj, r)) frontier.push_back(r);
    }
    for (int n : frontier) dist.held_at[static_cast<size_t>(n)].push_back(obj_idx);
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int n : frontier) {
        if (lg_.layer_of_node(n) <= req_layer) {
          dist.queues[lg_.layer_of_node(n)].push_back({obj_idx, n});
          continue;
        }
        for (int c : requesting_children(obj, n)) {
          dist.held_at[static_cast<size_t>(c)].push_back(obj_idx);
          next.push_back(c);
        }
      }
      frontier = std::move(next);
    }
  }
  return dist;
}

double PlacementEngine::replication_gain(const PlaceObject& obj, int node) const {
  std::vector<int> members;
  if (!lg_.is_dc_node(node)) {
    members = lg_.clusters[static_cast<size_t>(lg_.bs_of_node(node))].members;
  } else {
    members = {node};
  }
  std::vector<int> req_members;
  for (int m : members) {
    if (requests(obj, m)) req_members.push_back(m);
  }
  if (req_members.empty()) return 0.0;

  std::vector<DcId> anchors;
  for (int m : req_members) anchors.push_back(anchor_dc(obj, m));

  // requesting origins resolve to their member's anchor after replication
  std::map<DcId, DcId> after_server;
  for (size_t i = 0; i < req_members.size(); ++i) {
    for (DcId d : lg_.dc_span[static_cast<size_t>(req_members[i])]) {
      after_server[d] = anchors[i];
    }
  }

  double delta_read = 0.0;
  double delta_assoc = 0.0;
  double delta_store = 0.0;
  double delta_write = 0.0;
  for (ItemId x : obj.items) {
    const double gb = static_cast<double>(items_.at(x).size_bytes) / 1e9;
    for (const auto& [y, a] : after_server) {
      const double r = demand_.read_rate(x, y);
      if (r == 0.0) continue;
      DcId h = nearest_holder(x, y, working_, wan_, items_);
      double before_unit = wan_.dcs[static_cast<size_t>(h)].read_price_per_op() +
                           (h != y ? gb * wan_.link(h, y).transfer_price : 0.0);
      double after_unit = wan_.dcs[static_cast<size_t>(a)].read_price_per_op() +
                          (a != y ? gb * wan_.link(a, y).transfer_price : 0.0);
      delta_read += r * (before_unit - after_unit);
      // a serve from inside the cluster is the co-location term that full
      // replication eliminates
      for (int m : members) {
        const auto& span = lg_.dc_span[static_cast<size_t>(m)];
        if (std::find(span.begin(), span.end(), h) != span.end()) {
          delta_assoc += r * cfg_.cost.lambda1 * cfg_.cost.assoc_scale;
          break;
        }
      }
    }
    for (DcId d : anchors) {
      if (working_.has(x, d)) continue;
      delta_store += gb * wan_.dcs[static_cast<size_t>(d)].store_price;
      for (DcId w = 0; w < demand_.dc_count; ++w) {
        const double wr = demand_.write_rate(x, w);
        if (wr == 0.0 || w == d) continue;
        delta_write += wr * (wan_.dcs[static_cast<size_t>(d)].write_price_per_op() +
                             gb * wan_.link(w, d).transfer_price);
      }
    }
  }
  return delta_read + delta_assoc - delta_store - delta_write;
}

int PlacementEngine::regional_competition(
    const Region& region, const std::vector<int>& candidates,
    const std::vector<std::vector<ItemId>>& held_per_candidate) const {
  if (candidates.empty()) {
    throw PlacementError("regional_competition: no candidate bridge subgraphs");
  }
  if (candidates.size() == 1) return candidates.front();

  // shared medium: the region plus every candidate's held vertices
  std::set<VertexId> medium;
  auto add_item_vertices = [&](ItemId x) {
    const DataItem& it = items_.at(x);
    if (it.kind == ItemKind::Vertex) {
      medium.insert(static_cast<VertexId>(x));
    } else {
      medium.insert(it.u);
      medium.insert(it.v);
    }
  };
  for (ItemId x : region.items) add_item_vertices(x);
  for (const auto& held : held_per_candidate) {
    for (ItemId x : held) add_item_vertices(x);
  }

  std::vector<VertexId> verts(medium.begin(), medium.end());
  HeatGraph hg = HeatGraph::induced(g_, verts);
  std::map<VertexId, int> local;
  for (int i = 0; i < hg.n; ++i) local[hg.label[static_cast<size_t>(i)]] = i;

  std::set<int> region_local;
  for (ItemId x : region.items) {
    const DataItem& it = items_.at(x);
    if (it.kind == ItemKind::Vertex) {
      region_local.insert(local.at(static_cast<VertexId>(x)));
    }
  }

  double best_score = 0.0;
  int best = -1;
  for (size_t ci = 0; ci < candidates.size(); ++ci) {
    std::set<int> held_local;
    HeatState state;
    state.heat.assign(static_cast<size_t>(hg.n), 0.0);
    if (ci < held_per_candidate.size()) {
      for (ItemId x : held_per_candidate[ci]) {
        const DataItem& it = items_.at(x);
        if (it.kind != ItemKind::Vertex) continue;
        int v = local.at(static_cast<VertexId>(x));
        held_local.insert(v);
        state.heat[static_cast<size_t>(v)] = demand_.total_read_rate(x);
      }
    }
    // diffuse until heat stops leaving the held frontier
    for (int sweep = 0; sweep < cfg_.competition_max_sweeps; ++sweep) {
      double outflow = 0.0;
      for (int u : held_local) {
        for (const auto& [v, a] : hg.adj[static_cast<size_t>(u)]) {
          if (held_local.count(v)) continue;
          outflow += edge_transfer(hg, u, v, state, cfg_.dhd);
        }
      }
      if (outflow < cfg_.competition_tol) break;
      state = vertex_step(hg, state, cfg_.dhd);
    }
    double score = 0.0;
    for (int v : region_local) score += state.heat[static_cast<size_t>(v)];
    if (score > best_score) {
      best_score = score;
      best = candidates[ci];
    }
  }
  if (best >= 0) return best;

  // no heat reached the region: fall back to access frequency
  double best_rate = -1.0;
  for (int c : candidates) {
    double rate = 0.0;
    for (DcId d : lg_.dc_span[static_cast<size_t>(c)]) {
      for (PatternId pid : region.patterns) {
        auto rates = effective_rates(patterns_.at(static_cast<size_t>(pid)), demand_);
        auto it = rates.find(d);
        if (it != rates.end()) rate += it->second;
      }
    }
    if (rate > best_rate) {
      best_rate = rate;
      best = c;
    }
  }
  return best;
}

void PlacementEngine::commit(const PlaceObject& obj, int node, int cluster_bs,
                             double gain, DecisionBranch branch,
                             PlacementState& placement, PlacementLog& log,
                             std::vector<std::vector<int>>& held_at,
                             std::map<int, std::vector<std::pair<int, int>>>& queues,
                             int obj_idx) {
  held_at[static_cast<size_t>(node)].push_back(obj_idx);
  PlacementDecision d;
  d.seq = static_cast<int>(log.decisions.size());
  d.layer = lg_.layer_of_node(node);
  d.cluster = cluster_bs;
  d.target = node;
  d.kind = obj.is_region ? "region" : "pattern";
  d.object_id = object_tag(obj);
  d.gain = gain;
  d.branch = branch;
  d.items = obj.items;
  log.decisions.push_back(d);
  if (lg_.is_dc_node(node)) {
    for (ItemId x : obj.items) placement.set(x, node, true);
  } else {
    queues[lg_.layer_of_node(node)].push_back({obj_idx, node});
  }
}

std::pair<PlacementState, PlacementLog> PlacementEngine::place_all() {
  working_ = PlacementState(static_cast<std::int32_t>(items_.size()), wan_.dc_count());
  for (ItemId x = 0; x < working_.item_count; ++x) {
    working_.set(x, items_.at(x).home, true);
  }
  PlacementLog log;
  PatternDistribution dist = sink_patterns();

  // patterns forced all the way into DCs by sinking materialize immediately
  auto q0 = dist.queues.find(0);
  if (q0 != dist.queues.end()) {
    std::vector<std::pair<int, int>> entries = q0->second;
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    for (const auto& [oi, node] : entries) {
      const PlaceObject& obj = dist.objects[static_cast<size_t>(oi)];
      for (ItemId x : obj.items) working_.set(x, node, true);
      PlacementDecision d;
      d.seq = static_cast<int>(log.decisions.size());
      d.layer = 0;
      d.cluster = -1;
      d.target = node;
      d.kind = obj.is_region ? "region" : "pattern";
      d.object_id = object_tag(obj);
      d.gain = 0.0;
      d.branch = DecisionBranch::Sink;
      d.items = obj.items;
      log.decisions.push_back(d);
    }
    dist.queues.erase(0);
  }

  const int max_layer = lg_.thresholds.layer_count();
  for (int k = max_layer; k >= 1; --k) {
    auto qit = dist.queues.find(k);
    if (qit == dist.queues.end()) continue;
    std::vector<std::pair<int, int>> entries = qit->second;  // commits go lower
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first < b.first;
    });

    // Phase 1: replicate or mark for decomposition
    std::map<int, std::vector<int>> decomp;
    for (const auto& [oi, node] : entries) {
      const PlaceObject obj = dist.objects[static_cast<size_t>(oi)];
      double gain = replication_gain(obj, node);
      bool replicable = object_read_rate(obj) > object_write_rate(obj, demand_);
      if (gain >= 0.0 && replicable) {
        const int cluster_id = lg_.is_dc_node(node) ? -1 : lg_.bs_of_node(node);
        for (int c : requesting_children(obj, node)) {
          commit(obj, c, cluster_id, gain, DecisionBranch::Replicate, working_, log,
                 dist.held_at, dist.queues, oi);
        }
      } else {
        decomp[node].push_back(oi);
      }
    }

    // Phase 2: split decomposition sets into overlap regions and let the
    // cluster members compete for each
    for (const auto& [node, ois] : decomp) {
      std::vector<PlaceObject> batch;
      for (int oi : ois) batch.push_back(dist.objects[static_cast<size_t>(oi)]);
      std::vector<Region> regions = decompose_overlaps(batch, patterns_, demand_, items_);
      const int cluster_id = lg_.is_dc_node(node) ? -1 : lg_.bs_of_node(node);
      for (Region& region : regions) {
        region.id = region_counter_++;
        PlaceObject robj;
        robj.is_region = true;
        robj.id = region.id;
        robj.items = region.items;
        robj.contributors = region.patterns;
        for (PatternId pid : region.patterns) {
          for (const auto& [y, rate] :
               effective_rates(patterns_.at(static_cast<size_t>(pid)), demand_)) {
            robj.origin_rates[y] += rate;
          }
        }
        const int robj_idx = static_cast<int>(dist.objects.size());
        dist.objects.push_back(robj);

        std::vector<int> candidates = requesting_children(robj, node);
        if (candidates.empty()) continue;
        double gain = replication_gain(robj, node);
        bool replicable = object_read_rate(robj) > object_write_rate(robj, demand_);
        if (gain >= 0.0 && replicable) {
          for (int c : candidates) {
            commit(robj, c, cluster_id, gain, DecisionBranch::Replicate, working_, log,
                   dist.held_at, dist.queues, robj_idx);
          }
        } else {
          std::vector<std::vector<ItemId>> held(candidates.size());
          for (size_t ci = 0; ci < candidates.size(); ++ci) {
            for (int hoi : dist.held_at[static_cast<size_t>(candidates[ci])]) {
              const PlaceObject& ho = dist.objects[static_cast<size_t>(hoi)];
              held[ci].insert(held[ci].end(), ho.items.begin(), ho.items.end());
            }
          }
          int winner = regional_competition(region, candidates, held);
          commit(robj, winner, cluster_id, gain, DecisionBranch::Compete, working_, log,
                 dist.held_at, dist.queues, robj_idx);
        }
      }
    }
    dist.queues.erase(k);
  }

  if (cfg_.precache) {
    for (DcId d = 0; d < wan_.dc_count(); ++d) {
      std::vector<ItemId> cached = precache_hot(d, cfg_.theta_quantile, working_);
      if (cached.empty()) continue;
      PlacementDecision dec;
      dec.seq = static_cast<int>(log.decisions.size());
      dec.layer = 0;
      dec.cluster = -1;
      dec.target = d;
      dec.kind = "region";
      dec.object_id = "precache:" + std::to_string(d);
      dec.gain = 0.0;
      dec.branch = DecisionBranch::Precache;
      dec.items = cached;
      log.decisions.push_back(dec);
    }
  }
  return {working_, log};
}

std::vector<ItemId> PlacementEngine::precache_hot(DcId dc, double theta_quantile,
                                                  PlacementState& placement) const {
  HeatGraph hg = HeatGraph::from_graph(g_);
  HeatState init;
  init.heat.assign(static_cast<size_t>(hg.n), 0.0);
  std::vector<double> positives;
  for (VertexId v = 0; v < g_.vertex_count; ++v) {
    double r = demand_.read_rate(items_.vertex_item(v), dc);
    init.heat[static_cast<size_t>(v)] = r;
    if (r > 0.0) positives.push_back(r);
  }
  if (positives.empty()) return {};

  // locally hot vertices act as fixed external sources while the field settles
  std::sort(positives.begin(), positives.end());
  size_t cut_idx = static_cast<size_t>(
      std::floor(theta_quantile * static_cast<double>(positives.size())));
  double cut = cut_idx >= positives.size() ? positives.back() : positives[cut_idx];
  std::vector<int> sources;
  for (VertexId v = 0; v < g_.vertex_count; ++v) {
    double h = init.heat[static_cast<size_t>(v)];
    if (h > 0.0 && h >= cut) sources.push_back(v);
  }
  SourceState src = make_sources(hg, sources, cfg_.dhd);
  SteadyResult steady = run_to_steady(hg, init, src.q, cfg_.dhd);

  std::vector<int> selected = select_top_quantile(steady.state.heat, theta_quantile);
  std::vector<char> in_sel(static_cast<size_t>(g_.vertex_count), 0);
  for (int v : selected) in_sel[static_cast<size_t>(v)] = 1;

  std::vector<ItemId> cached;
  for (int v : selected) {
    ItemId x = items_.vertex_item(v);
    if (!placement.has(x, dc)) {
      placement.set(x, dc, true);
      cached.push_back(x);
    }
  }
  for (EdgeId e = 0; e < static_cast<EdgeId>(g_.edges.size()); ++e) {
    const Edge& ed = g_.edges[static_cast<size_t>(e)];
    if (in_sel[static_cast<size_t>(ed.u)] && in_sel[static_cast<size_t>(ed.v)]) {
      ItemId x = items_.edge_item(e);
      if (!placement.has(x, dc)) {
        placement.set(x, dc, true);
        cached.push_back(x);
      }
    }
  }
  std::sort(cached.begin(), cached.end());
  return cached;
}

std::vector<ItemId> PlacementEngine::evict_cold(
    DcId dc, const std::map<ItemId, double>& batch_reads, double theta_c,
    PlacementState& placement, RoutingState& routing,
    std::map<ItemId, double>& cache_heat) const {
  std::vector<VertexId> verts;
  for (VertexId v = 0; v < g_.vertex_count; ++v) {
    if (placement.has(items_.vertex_item(v), dc)) verts.push_back(v);
  }
  HeatGraph hg = HeatGraph::induced(g_, verts);
  HeatState state;
  state.heat.assign(static_cast<size_t>(hg.n), 0.0);
  for (int i = 0; i < hg.n; ++i) {
    ItemId x = items_.vertex_item(hg.label[static_cast<size_t>(i)]);
    auto it = cache_heat.find(x);
    if (it != cache_heat.end()) state.heat[static_cast<size_t>(i)] = it->second;
    auto bit = batch_reads.find(x);
    if (bit != batch_reads.end()) state.heat[static_cast<size_t>(i)] += bit->second;
  }
  for (int s = 0; s < cfg_.eviction_sweeps; ++s) {
    state = vertex_step(hg, state, cfg_.dhd);
  }
  for (int i = 0; i < hg.n; ++i) {
    cache_heat[items_.vertex_item(hg.label[static_cast<size_t>(i)])] =
        state.heat[static_cast<size_t>(i)];
  }

  std::vector<ItemId> evicted;
  auto evict_item = [&](ItemId x) {
    placement.set(x, dc, false);
    cache_heat.erase(x);
    evicted.push_back(x);
    for (DcId y = 0; y < placement.dc_count; ++y) {
      auto sit = routing.sigma.find({x, y});
      if (sit != routing.sigma.end() && sit->second == dc) {
        DcId d = nearest_holder(x, y, placement, wan_, items_);
        if (d >= 0) sit->second = d;
      }
    }
  };
  for (int i = 0; i < hg.n; ++i) {
    ItemId x = items_.vertex_item(hg.label[static_cast<size_t>(i)]);
    if (items_.at(x).home == dc) continue;  // home copies never leave
    if (state.heat[static_cast<size_t>(i)] < theta_c) evict_item(x);
  }
  // edge replicas follow their endpoints out of the cache
  for (EdgeId e = 0; e < static_cast<EdgeId>(g_.edges.size()); ++e) {
    ItemId x = items_.edge_item(e);
    if (!placement.has(x, dc) || items_.at(x).home == dc) continue;
    const Edge& ed = g_.edges[static_cast<size_t>(e)];
    bool u_here = placement.has(items_.vertex_item(ed.u), dc);
    bool v_here = placement.has(items_.vertex_item(ed.v), dc);
    if (!u_here && !v_here) evict_item(x);
  }
  std::sort(evicted.begin(), evicted.end());
  return evicted;
}

void apply_update(const UpdateOp& op, PlacementState& placement, RoutingState& routing,
                  const ItemCatalog& items, const LayeredGraph& lg) {
  (void)lg;
  if (op.item < 0 || op.item >= placement.item_count) {
    throw PlacementError("apply_update: unknown item " + std::to_string(op.item));
  }
  if (op.kind == UpdateOp::Insert) {
    placement.set(op.item, items.at(op.item).home, true);
    return;
  }
  if (placement.replica_count(op.item) == 0) {
    throw PlacementError("apply_update: delete of unknown item " +
                         std::to_string(op.item));
  }
  for (DcId d = 0; d < placement.dc_count; ++d) placement.set(op.item, d, false);
  for (DcId y = 0; y < placement.dc_count; ++y) routing.sigma.erase({op.item, y});
}

}  // namespace geolayer
