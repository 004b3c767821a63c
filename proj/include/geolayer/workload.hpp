// Synthetic workloads: k-hop random-walk patterns with Zipf-skewed demand,
// latency requirements snapped to layer intervals, trace generation and
// aggregation into demand matrices.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geolayer/cost.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/layered.hpp"

namespace geolayer {

struct TraceRecord {
  std::int64_t seq = 0;
  DcId origin = -1;
  enum Op { ReadPattern, WriteItem } op = ReadPattern;
  std::int32_t object = -1;        // pattern id or item id
  double req_latency_s = 0.0;      // reads only
};

struct WorkloadSpec {
  int pattern_count = 32;
  int hops = 3;                    // k
  double zipf_s = 1.0;             // source/pattern skew exponent
  double write_item_fraction = 0.3;
  int read_requests = 2000;
  int write_requests = 0;          // 0 means derived as a share of reads
  double write_request_share = 0.1;
  double requirement_margin_s = 0.001;  // stay inside the layer's interval
  std::uint64_t seed = 1;
};

struct Workload {
  std::vector<Pattern> patterns;
  std::vector<TraceRecord> trace;
  std::vector<std::vector<VertexId>> walks;  // per pattern, hop order
};

// Deterministic given the seed. Patterns are k-hop non-backtracking walks;
// pattern popularity and per-pattern origin choice follow Zipf(s); latency
// requirements snap just under a layer's upper threshold.
Workload generate(const WorkloadSpec& spec, const Graph& g, const Partitioning& part,
                  const ItemCatalog& items, const LatencyThresholds& thresholds,
                  double gamma_max_s);

// Counts R_xy, W_xy and R_py over trace records with seq in [from, to).
DemandMatrix aggregate(const std::vector<TraceRecord>& trace,
                       const std::vector<Pattern>& patterns, const ItemCatalog& items,
                       std::int32_t dc_count, std::int64_t from = 0,
                       std::int64_t to = -1);

std::string trace_csv(const std::vector<TraceRecord>& trace);

// rank-Zipf sampler over n entries: P(rank r) proportional to (r+1)^-s
class ZipfSampler {
 public:
  ZipfSampler(int n, double s);
  int sample(std::mt19937_64& rng) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace geolayer
