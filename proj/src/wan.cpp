#include "geolayer/wan.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace geolayer {

DcId WanProfile::index_of(const std::string& name) const {
  for (const DataCenter& dc : dcs) {
    if (dc.name == name) return dc.id;
  }
  throw WanError("unknown DC name '" + name + "'");
}

double WanProfile::request_latency(DcId origin, DcId server,
                                   std::int64_t payload_bytes) const {
  check(origin);
  check(server);
  if (origin == server) return 0.0;
  const LinkProfile& l = link(server, origin);
  return l.rtt_s + static_cast<double>(payload_bytes) * 8.0 / l.bandwidth_bps;
}

double WanProfile::pattern_latency(DcId origin,
                                   const std::map<DcId, std::int64_t>& serving) const {
  if (serving.empty()) throw WanError("pattern_latency: empty serving map");
  double worst = 0.0;
  for (const auto& [dc, bytes] : serving) {
    worst = std::max(worst, request_latency(origin, dc, bytes));
  }
  return worst;
}

namespace {

bool clean_line(std::string& line) {
  auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  auto end = line.find_last_not_of(" \t\r\n");
  if (end == std::string::npos) return false;
  line.erase(end + 1);
  return true;
}

}  // namespace

WanProfile load_wan_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw WanError("cannot open WAN profile: " + path);

  WanProfile wan;
  enum class Section { None, Dcs, Links };
  Section sec = Section::None;
  struct RawLink {
    std::string from, to;
    double rtt_ms, bw_mbps, price;
  };
  std::vector<RawLink> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!clean_line(line)) continue;
    if (line == "[dcs]") {
      sec = Section::Dcs;
      continue;
    }
    if (line == "[links]") {
      sec = Section::Links;
      continue;
    }
    std::istringstream is(line);
    if (sec == Section::Dcs) {
      DataCenter dc;
      if (!(is >> dc.name >> dc.region >> dc.store_price >> dc.read_price >> dc.write_price)) {
        throw WanError(path + ":" + std::to_string(lineno) + ": malformed dc line");
      }
      if (dc.store_price < 0 || dc.read_price < 0 || dc.write_price < 0) {
        throw WanError(path + ":" + std::to_string(lineno) + ": negative price");
      }
      dc.id = static_cast<DcId>(wan.dcs.size());
      wan.dcs.push_back(dc);
    } else if (sec == Section::Links) {
      RawLink rl;
      if (!(is >> rl.from >> rl.to >> rl.rtt_ms >> rl.bw_mbps >> rl.price)) {
        throw WanError(path + ":" + std::to_string(lineno) + ": malformed link line");
      }
      if (rl.bw_mbps <= 0) {
        throw WanError(path + ":" + std::to_string(lineno) + ": zero bandwidth on link " +
                       rl.from + " -> " + rl.to);
      }
      if (rl.price < 0 || rl.rtt_ms < 0) {
        throw WanError(path + ":" + std::to_string(lineno) + ": negative link value");
      }
      raw.push_back(rl);
    } else {
      throw WanError(path + ":" + std::to_string(lineno) + ": data before section header");
    }
  }

  const std::int32_t n = wan.dc_count();
  if (n == 0) throw WanError(path + ": no [dcs] entries");
  wan.links.assign(static_cast<size_t>(n) * static_cast<size_t>(n), LinkProfile{});
  std::vector<char> present(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
  for (DcId d = 0; d < n; ++d) {
    wan.link(d, d) = LinkProfile{0.0, std::numeric_limits<double>::infinity(), 0.0};
    present[static_cast<size_t>(d) * static_cast<size_t>(n) + static_cast<size_t>(d)] = 1;
  }
  auto mark = [&](DcId a, DcId b) {
    present[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] = 1;
  };
  auto seen = [&](DcId a, DcId b) {
    return present[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] != 0;
  };
  for (const RawLink& rl : raw) {
    DcId a = wan.index_of(rl.from);
    DcId b = wan.index_of(rl.to);
    if (a == b) throw WanError(path + ": self link listed for " + rl.from);
    LinkProfile lp{rl.rtt_ms / 1e3, rl.bw_mbps * 1e6, rl.price};
    wan.link(a, b) = lp;
    mark(a, b);
    if (!seen(b, a)) {
      wan.link(b, a) = lp;  // mirror until an explicit reverse entry arrives
    }
  }
  // a later explicit entry overrides the mirror, so re-apply explicit ones
  for (const RawLink& rl : raw) {
    DcId a = wan.index_of(rl.from);
    DcId b = wan.index_of(rl.to);
    wan.link(a, b) = LinkProfile{rl.rtt_ms / 1e3, rl.bw_mbps * 1e6, rl.price};
  }
  for (DcId a = 0; a < n; ++a) {
    for (DcId b = 0; b < n; ++b) {
      if (a == b) continue;
      if (!seen(a, b) && !seen(b, a)) {
        throw WanError(path + ": missing link " + wan.dcs[static_cast<size_t>(a)].name +
                       " -> " + wan.dcs[static_cast<size_t>(b)].name);
      }
    }
  }
  return wan;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::string dump_wan_profile(const WanProfile& wan) {
  std::ostringstream os;
  os << "[dcs]\n";
  for (const DataCenter& dc : wan.dcs) {
    os << dc.name << " " << dc.region << " " << fmt(dc.store_price) << " "
       << fmt(dc.read_price) << " " << fmt(dc.write_price) << "\n";
  }
  os << "[links]\n";
  for (DcId a = 0; a < wan.dc_count(); ++a) {
    for (DcId b = 0; b < wan.dc_count(); ++b) {
      if (a == b) continue;
      const LinkProfile& l = wan.link(a, b);
      os << wan.dcs[static_cast<size_t>(a)].name << " " << wan.dcs[static_cast<size_t>(b)].name
         << " " << fmt(l.rtt_s * 1e3) << " " << fmt(l.bandwidth_bps / 1e6) << " "
         << fmt(l.transfer_price) << "\n";
    }
  }
  return os.str();
}

}  // namespace geolayer
