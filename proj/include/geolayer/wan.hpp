// Data-center topology: link latency/bandwidth, pricing, and the request
// latency function (RTT plus transfer time over the bottleneck link).
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolayer/graph.hpp"

namespace geolayer {

class WanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataCenter {
  DcId id = -1;
  std::string name;
  std::string region;
  double store_price = 0.0;  // $/GB/month
  double read_price = 0.0;   // $/million GETs
  double write_price = 0.0;  // $/million PUTs

  double read_price_per_op() const { return read_price / 1e6; }
  double write_price_per_op() const { return write_price / 1e6; }
};

struct LinkProfile {
  double rtt_s = 0.0;
  double bandwidth_bps = 0.0;      // bits per second
  double transfer_price = 0.0;     // $/GB, GB = 1e9 bytes
};

// Complete ordered-pair link matrix. Inputs that give only one direction are
// mirrored; asymmetric entries are kept as given.
struct WanProfile {
  std::vector<DataCenter> dcs;
  std::vector<LinkProfile> links;  // row-major dc_count x dc_count

  std::int32_t dc_count() const { return static_cast<std::int32_t>(dcs.size()); }

  const LinkProfile& link(DcId from, DcId to) const {
    check(from);
    check(to);
    return links[static_cast<size_t>(from) * dcs.size() + static_cast<size_t>(to)];
  }
  LinkProfile& link(DcId from, DcId to) {
    check(from);
    check(to);
    return links[static_cast<size_t>(from) * dcs.size() + static_cast<size_t>(to)];
  }

  DcId index_of(const std::string& name) const;

  // Latency of a request from `origin` answered by `server` carrying
  // `payload_bytes`: rtt + bytes / bandwidth. Local access is free.
  double request_latency(DcId origin, DcId server, std::int64_t payload_bytes) const;

  // Straggler latency over a serving map dc -> payload bytes.
  double pattern_latency(DcId origin, const std::map<DcId, std::int64_t>& serving) const;

  // $ for moving `bytes` from `from` to `to`.
  double transfer_cost(DcId from, DcId to, std::int64_t bytes) const {
    if (from == to) return 0.0;
    return static_cast<double>(bytes) / 1e9 * link(from, to).transfer_price;
  }

 private:
  void check(DcId d) const {
    if (d < 0 || d >= dc_count()) {
      throw WanError("unknown DC id " + std::to_string(d));
    }
  }
};

WanProfile load_wan_profile(const std::string& path);
std::string dump_wan_profile(const WanProfile& wan);

}  // namespace geolayer
