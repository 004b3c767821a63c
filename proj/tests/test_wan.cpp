#include <doctest.h>

#include <fstream>

#include "geolayer/wan.hpp"
#include "support.hpp"

using namespace geolayer;

#ifndef GEOLAYER_DATA_DIR
#define GEOLAYER_DATA_DIR "data"
#endif

namespace {

const std::string kDataDir = GEOLAYER_DATA_DIR;

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/geolayer_wan_" + name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("wan") {

TEST_CASE("request latency follows rtt plus transfer time") {
  WanProfile wan = load_wan_profile(kDataDir + "/alibaba-5dc.wan");
  DcId useast = wan.index_of("useast");
  DcId uswest = wan.index_of("uswest");
  // 12 MB over the 69 ms / 96 Mbps link
  CHECK(wan.request_latency(useast, uswest, 12'000'000) ==
        doctest::Approx(1.069).epsilon(1e-12));
  CHECK(wan.request_latency(useast, uswest, 0) == doctest::Approx(0.069));
  CHECK(wan.request_latency(useast, useast, 123456789) == 0.0);
}

TEST_CASE("pattern latency is the straggler") {
  WanProfile wan = load_wan_profile(kDataDir + "/alibaba-5dc.wan");
  DcId useast = wan.index_of("useast");
  DcId uswest = wan.index_of("uswest");
  DcId london = wan.index_of("london");
  DcId singapore = wan.index_of("singapore");

  std::map<DcId, std::int64_t> single{{uswest, 1000}};
  CHECK(wan.pattern_latency(useast, single) ==
        doctest::Approx(wan.request_latency(useast, uswest, 1000)));

  // three servers, each latency hand-computed from the profile
  std::map<DcId, std::int64_t> three{
      {uswest, 2'000'000}, {london, 1'000'000}, {singapore, 500'000}};
  double l1 = 0.069 + 2e6 * 8 / 96e6;
  double l2 = 0.080 + 1e6 * 8 / 92e6;
  double l3 = 0.225 + 5e5 * 8 / 66e6;
  CHECK(wan.pattern_latency(useast, three) ==
        doctest::Approx(std::max({l1, l2, l3})).epsilon(1e-12));

  CHECK_THROWS_AS(wan.pattern_latency(useast, {}), WanError);
}

TEST_CASE("bundled profile reproduces the measured table") {
  WanProfile wan = load_wan_profile(kDataDir + "/alibaba-5dc.wan");
  DcId sg = wan.index_of("singapore");
  DcId bj = wan.index_of("beijing");
  CHECK(wan.link(sg, bj).rtt_s == doctest::Approx(0.075));
  CHECK(wan.link(bj, sg).rtt_s == doctest::Approx(0.075));  // mirrored
  CHECK(wan.link(sg, bj).bandwidth_bps == doctest::Approx(96e6));
  const DataCenter& dc = wan.dcs[0];
  CHECK(dc.store_price == doctest::Approx(0.016));
  CHECK(dc.read_price == doctest::Approx(0.10));
  CHECK(dc.write_price == doctest::Approx(1.40));
  CHECK(wan.link(sg, bj).transfer_price == doctest::Approx(0.043));
}

TEST_CASE("canonical two-DC profile round-trips byte-identically") {
  std::string canonical =
      "[dcs]\n"
      "east e 0.02 0.4 5\n"
      "west w 0.016 0.1 1.4\n"
      "[links]\n"
      "east west 50 100 0.05\n"
      "west east 50 100 0.05\n";
  TempFile f("round.wan", canonical);
  WanProfile wan = load_wan_profile(f.path);
  std::string dumped = dump_wan_profile(wan);
  TempFile f2("round2.wan", dumped);
  WanProfile wan2 = load_wan_profile(f2.path);
  CHECK(dump_wan_profile(wan2) == dumped);
}

TEST_CASE("loader rejects broken profiles") {
  TempFile missing("missing.wan",
                   "[dcs]\na r 1 1 1\nb r 1 1 1\nc r 1 1 1\n[links]\na b 10 10 0.1\n");
  CHECK_THROWS_AS(load_wan_profile(missing.path), WanError);

  TempFile neg("neg.wan", "[dcs]\na r -1 1 1\nb r 1 1 1\n[links]\na b 10 10 0.1\n");
  CHECK_THROWS_AS(load_wan_profile(neg.path), WanError);

  TempFile zerobw("zerobw.wan", "[dcs]\na r 1 1 1\nb r 1 1 1\n[links]\na b 10 0 0.1\n");
  CHECK_THROWS_AS(load_wan_profile(zerobw.path), WanError);
}

TEST_CASE("latency grows with payload") {
  std::mt19937_64 rng(2);
  WanProfile wan = testsup::synthetic_wan(4, 20, 200, rng);
  double prev = -1.0;
  for (std::int64_t bytes : {0LL, 1000LL, 100000LL, 10000000LL, 500000000LL}) {
    double lat = wan.request_latency(0, 3, bytes);
    CHECK(lat >= prev);
    prev = lat;
  }
}

}  // TEST_SUITE
