#include "geolayer/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace geolayer {

ZipfSampler::ZipfSampler(int n, double s) {
  cdf_.resize(static_cast<size_t>(n));
  double acc = 0.0;
  for (int r = 0; r < n; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -s);
    cdf_[static_cast<size_t>(r)] = acc;
  }
  for (double& c : cdf_) c /= acc;
}

int ZipfSampler::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double u = uni(rng);
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return static_cast<int>(cdf_.size()) - 1;
  return static_cast<int>(it - cdf_.begin());
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{seed, salt};
  return std::mt19937_64(seq);
}

// requirement just under the layer's upper threshold, so intra-layer links
// stay within budget
double layer_requirement(const LatencyThresholds& t, int layer, double margin) {
  const int h = t.layer_count();
  if (layer < h) return t.upper(layer) - margin;
  double interval = t.cuts.size() >= 2 ? t.cuts[1] - t.cuts[0] : 1.0;
  return t.lower(h) + interval - margin;
}

}  // namespace

Workload generate(const WorkloadSpec& spec, const Graph& g, const Partitioning& part,
                  const ItemCatalog& items, const LatencyThresholds& thresholds,
                  double gamma_max_s) {
  Workload out;
  std::mt19937_64 pattern_rng = stream(spec.seed, 0x70617474);
  std::mt19937_64 trace_rng = stream(spec.seed, 0x74726163);
  std::mt19937_64 write_rng = stream(spec.seed, 0x77726974);

  // hot vertices are a fixed random permutation of the vertex set
  std::vector<VertexId> vertex_rank(static_cast<size_t>(g.vertex_count));
  std::iota(vertex_rank.begin(), vertex_rank.end(), 0);
  std::shuffle(vertex_rank.begin(), vertex_rank.end(), pattern_rng);
  ZipfSampler vertex_zipf(g.vertex_count, spec.zipf_s);

  std::vector<int> feasible_layers;
  for (int k = 1; k <= thresholds.layer_count(); ++k) {
    if (layer_requirement(thresholds, k, spec.requirement_margin_s) <= gamma_max_s) {
      feasible_layers.push_back(k);
    }
  }
  if (feasible_layers.empty()) {
    throw GraphError("gamma_max too small for every layer requirement");
  }

  for (int i = 0; i < spec.pattern_count; ++i) {
    Pattern p;
    p.id = i;
    VertexId source = vertex_rank[static_cast<size_t>(vertex_zipf.sample(pattern_rng))];
    std::set<ItemId> pitems{items.vertex_item(source)};
    std::vector<VertexId> walk{source};
    VertexId cur = source;
    VertexId prev = -1;
    for (int hop = 0; hop < spec.hops; ++hop) {
      std::vector<std::pair<VertexId, EdgeId>> next;
      for (const auto& [w, e] : g.adj[static_cast<size_t>(cur)]) {
        if (w != prev) next.emplace_back(w, e);
      }
      if (next.empty()) break;
      std::uniform_int_distribution<size_t> pick(0, next.size() - 1);
      auto [w, e] = next[pick(pattern_rng)];
      pitems.insert(items.vertex_item(w));
      pitems.insert(items.edge_item(e));
      walk.push_back(w);
      prev = cur;
      cur = w;
    }
    p.items.assign(pitems.begin(), pitems.end());
    out.walks.push_back(walk);

    std::uniform_int_distribution<size_t> layer_pick(0, feasible_layers.size() - 1);
    int layer = feasible_layers[layer_pick(pattern_rng)];
    p.requirement_s = layer_requirement(thresholds, layer, spec.requirement_margin_s);
    p.eta = p.requirement_s / gamma_max_s;
    out.patterns.push_back(std::move(p));
  }

  // per-pattern origin preference: the walk source's DC first
  std::vector<std::vector<DcId>> origin_order(out.patterns.size());
  for (size_t i = 0; i < out.patterns.size(); ++i) {
    DcId home = part.dc_of(out.walks[i].front());
    origin_order[i].push_back(home);
    for (DcId d = 0; d < part.dc_count; ++d) {
      if (d != home) origin_order[i].push_back(d);
    }
  }
  ZipfSampler pattern_zipf(spec.pattern_count, spec.zipf_s);
  ZipfSampler origin_zipf(part.dc_count, spec.zipf_s);

  // writable items: a seeded random subset of the catalog
  std::vector<ItemId> item_perm(items.size());
  std::iota(item_perm.begin(), item_perm.end(), 0);
  std::shuffle(item_perm.begin(), item_perm.end(), write_rng);
  size_t writable = static_cast<size_t>(std::floor(
      spec.write_item_fraction * static_cast<double>(items.size())));
  std::vector<ItemId> writable_items(item_perm.begin(),
                                     item_perm.begin() + static_cast<long>(writable));

  int writes = spec.write_requests > 0
                   ? spec.write_requests
                   : static_cast<int>(std::floor(spec.write_request_share *
                                                 static_cast<double>(spec.read_requests)));
  if (writable_items.empty()) writes = 0;
  ZipfSampler write_zipf(std::max<size_t>(writable_items.size(), 1), spec.zipf_s);

  const int total = spec.read_requests + writes;
  const int write_every = writes > 0 ? std::max(1, total / writes) : 0;
  int reads_done = 0;
  int writes_done = 0;
  for (int seq = 0; seq < total; ++seq) {
    TraceRecord rec;
    rec.seq = seq;
    bool do_write = writes_done < writes &&
                    (reads_done >= spec.read_requests ||
                     (write_every > 0 && seq % write_every == write_every - 1));
    if (do_write) {
      rec.op = TraceRecord::WriteItem;
      rec.object = writable_items[static_cast<size_t>(write_zipf.sample(trace_rng))];
      std::uniform_int_distribution<DcId> pick(0, part.dc_count - 1);
      rec.origin = pick(trace_rng);
      ++writes_done;
    } else {
      rec.op = TraceRecord::ReadPattern;
      int pid = pattern_zipf.sample(trace_rng);
      rec.object = pid;
      rec.origin = origin_order[static_cast<size_t>(pid)]
                               [static_cast<size_t>(origin_zipf.sample(trace_rng))];
      rec.req_latency_s = out.patterns[static_cast<size_t>(pid)].requirement_s;
      ++reads_done;
    }
    out.trace.push_back(rec);
  }

  DemandMatrix all = aggregate(out.trace, out.patterns, items, part.dc_count);
  for (Pattern& p : out.patterns) {
    for (DcId y = 0; y < part.dc_count; ++y) {
      double r = all.pattern_read(p.id, y);
      if (r > 0.0) p.origin_rates[y] = r;
    }
  }
  return out;
}

DemandMatrix aggregate(const std::vector<TraceRecord>& trace,
                       const std::vector<Pattern>& patterns, const ItemCatalog& items,
                       std::int32_t dc_count, std::int64_t from, std::int64_t to) {
  DemandMatrix m(static_cast<std::int32_t>(items.size()), dc_count);
  for (const TraceRecord& rec : trace) {
    if (rec.seq < from || (to >= 0 && rec.seq >= to)) continue;
    if (rec.op == TraceRecord::ReadPattern) {
      const Pattern& p = patterns.at(static_cast<size_t>(rec.object));
      m.pattern_reads[{p.id, rec.origin}] += 1.0;
      for (ItemId x : p.items) m.read_rate(x, rec.origin) += 1.0;
    } else {
      m.write_rate(rec.object, rec.origin) += 1.0;
    }
  }
  return m;
}

std::string trace_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream os;
  os << "seq,origin_dc,op,object_id,req_latency_ms\n";
  os.precision(9);
  for (const TraceRecord& rec : trace) {
    os << rec.seq << "," << rec.origin << ","
       << (rec.op == TraceRecord::ReadPattern ? "RP" : "WI") << "," << rec.object << ","
       << rec.req_latency_s * 1e3 << "\n";
  }
  return os.str();
}

}  // namespace geolayer
