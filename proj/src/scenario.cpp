#include "geolayer/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "geolayer/baselines.hpp"
#include "geolayer/dhd.hpp"
#include "geolayer/graph.hpp"
#include "geolayer/layered.hpp"
#include "geolayer/oracle.hpp"
#include "geolayer/placement.hpp"
#include "geolayer/routing.hpp"
#include "geolayer/wan.hpp"
#include "geolayer/workload.hpp"

namespace fs = std::filesystem;

namespace geolayer {

ScenarioConfig ScenarioConfig::parse(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  ScenarioConfig cfg;
  cfg.base_dir = fs::path(path).parent_path().string();
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section header
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    cfg.values[key] = value;
  }
  return cfg;
}

std::string ScenarioConfig::str(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::string ScenarioConfig::required(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing config field: " + key);
  return it->second;
}

double ScenarioConfig::num(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config field " + key + " is not a number: " + it->second);
  }
}

std::int64_t ScenarioConfig::integer(const std::string& key, std::int64_t fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config field " + key + " is not an integer: " + it->second);
  }
}

std::string ScenarioConfig::file_path(const std::string& key) const {
  std::string p = required(key);
  fs::path fp(p);
  if (fp.is_relative() && !base_dir.empty()) fp = fs::path(base_dir) / fp;
  return fp.string();
}

namespace {

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  written.push_back(path);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

ScenarioResult run_scenario(const std::string& config_path, const RunOptions& opts) {
  ScenarioConfig cfg = ScenarioConfig::parse(config_path);

  std::string out_dir = opts.out_dir;
  if (out_dir.empty()) {
    const char* env = std::getenv("GEOSIM_OUT");
    out_dir = env != nullptr ? env : "out";
  }
  fs::create_directories(out_dir);

  const std::string edges_path = cfg.file_path("edges");
  const std::string part_path = cfg.file_path("partition");
  const std::string wan_path = cfg.file_path("wan");
  for (const std::string& p : {edges_path, part_path, wan_path}) {
    if (!fs::exists(p)) throw ConfigError("missing input file: " + p);
  }

  auto [graph, part] = load_graph(edges_path, part_path);
  WanProfile wan = load_wan_profile(wan_path);
  if (part.dc_count > wan.dc_count()) {
    throw ConfigError("partition names more DCs than the WAN profile provides");
  }
  part.dc_count = wan.dc_count();
  part.derive(graph);

  ItemCatalog items = build_items(graph, part,
                                  cfg.integer("vertex_size_bytes", 1024),
                                  cfg.integer("edge_size_bytes", 512));

  double max_rtt = 0.0;
  for (DcId a = 0; a < wan.dc_count(); ++a) {
    for (DcId b = 0; b < wan.dc_count(); ++b) {
      if (a != b) max_rtt = std::max(max_rtt, wan.link(a, b).rtt_s);
    }
  }
  LatencyThresholds thresholds = LatencyThresholds::fixed_interval(
      cfg.num("layer_interval_ms", 100.0) / 1e3, max_rtt);

  const double gamma_max_s = cfg.num("gamma_max_ms", 500.0) / 1e3;
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));

  WorkloadSpec wspec;
  wspec.pattern_count = static_cast<int>(cfg.integer("patterns", 32));
  wspec.hops = static_cast<int>(cfg.integer("hops", 3));
  wspec.zipf_s = cfg.num("zipf", 1.0);
  wspec.write_item_fraction = cfg.num("write_item_fraction", 0.3);
  wspec.read_requests = static_cast<int>(cfg.integer("read_requests", 2000));
  wspec.write_request_share = cfg.num("write_request_share", 0.1);
  wspec.requirement_margin_s = cfg.num("requirement_margin_ms", 1.0) / 1e3;
  wspec.seed = seed;
  Workload wl = generate(wspec, graph, part, items, thresholds, gamma_max_s);

  // historical window trains placement; the rest is the test window
  const std::int64_t split =
      static_cast<std::int64_t>(wl.trace.size()) / 2;
  DemandMatrix demand_hist = aggregate(wl.trace, wl.patterns, items, wan.dc_count(), 0, split);
  DemandMatrix demand_test = aggregate(wl.trace, wl.patterns, items, wan.dc_count(), split, -1);

  LayeredGraph lg = build_layered_graph(graph, part, wan, thresholds);

  PlacementConfig pcfg;
  pcfg.gamma_max_s = gamma_max_s;
  pcfg.cost.lambda1 = cfg.num("lambda1", 0.5);
  pcfg.cost.lambda2 = cfg.num("lambda2", 0.5);
  pcfg.cost.assoc_scale = cfg.num("assoc_scale", 1.0);
  pcfg.dhd.alpha = cfg.num("alpha", 0.5);
  pcfg.dhd.gamma = cfg.num("gamma", 0.1);
  pcfg.dhd.beta = cfg.num("beta", 0.3);
  pcfg.dhd.max_iters = static_cast<int>(cfg.integer("max_iters", 200));
  pcfg.dhd.residual_tol = cfg.num("residual_tol", 1e-8);
  pcfg.theta_quantile = cfg.num("theta_quantile", 0.55);
  pcfg.theta_c_quantile = cfg.num("theta_c_quantile", 0.10);

  ScenarioResult result;
  result.strategy = !opts.strategy.empty() ? opts.strategy : cfg.str("strategy", "geolayer");

  PlacementEngine engine(graph, part, items, wl.patterns, demand_hist, wan, lg, pcfg);

  PlacementState placement;
  PlacementLog log;
  if (result.strategy == "geolayer") {
    auto placed = engine.place_all();
    placement = placed.first;
    log = placed.second;
  } else if (result.strategy == "random3") {
    placement = place_random_k(items, std::min<int>(3, wan.dc_count()), wan.dc_count(),
                               seed ^ 0x72616e64);
  } else if (result.strategy == "top3") {
    placement = place_top_k(items, std::min<int>(3, wan.dc_count()), demand_hist);
  } else {
    throw ConfigError("unknown strategy: " + result.strategy);
  }

  // route the test window
  std::map<std::pair<PatternId, DcId>, RoutePlan> plans;
  std::mt19937_64 route_rng(seed ^ 0x726f7574);
  std::ostringstream latency_csv;
  latency_csv << "seq,pattern,origin,latency_ms,violation\n";
  latency_csv.precision(9);
  double latency_sum = 0.0;
  std::int64_t read_wan_bytes = 0;

  for (const TraceRecord& rec : wl.trace) {
    if (rec.seq < split || rec.op != TraceRecord::ReadPattern) continue;
    const Pattern& p = wl.patterns[static_cast<size_t>(rec.object)];
    RoutePlan plan;
    if (result.strategy == "geolayer") {
      auto key = std::make_pair(p.id, rec.origin);
      auto it = plans.find(key);
      if (it == plans.end()) {
        it = plans.emplace(key, route_online(p, rec.origin, placement, lg, wan, items)).first;
      }
      plan = it->second;
    } else {
      plan = route_random(p, rec.origin, placement, wan, items, route_rng);
    }
    ++result.routed_requests;
    latency_sum += plan.latency_s;
    read_wan_bytes += plan.wan_bytes;
    bool violation = plan.latency_s > p.eta * gamma_max_s + 1e-12;
    if (violation) ++result.latency_violations;
    latency_csv << rec.seq << "," << p.id << "," << rec.origin << ","
                << plan.latency_s * 1e3 << "," << (violation ? 1 : 0) << "\n";
  }
  result.mean_latency_s =
      result.routed_requests > 0 ? latency_sum / static_cast<double>(result.routed_requests)
                                 : 0.0;

  // materialize sigma for the objective; the tightest pattern pins shared items
  RoutingState routing;
  if (result.strategy == "geolayer") {
    std::map<std::pair<ItemId, DcId>, std::pair<double, DcId>> pick;  // req, server
    for (const auto& [key, plan] : plans) {
      const Pattern& p = wl.patterns[static_cast<size_t>(key.first)];
      for (const auto& [dc, served] : plan.served) {
        for (ItemId x : served) {
          auto sk = std::make_pair(x, key.second);
          auto it = pick.find(sk);
          if (it == pick.end() || p.requirement_s < it->second.first) {
            pick[sk] = {p.requirement_s, dc};
          }
        }
      }
    }
    for (const auto& [sk, val] : pick) routing.sigma[sk] = val.second;
    // demanded pairs outside any plan fall back to the nearest holder
    for (ItemId x = 0; x < demand_test.item_count; ++x) {
      for (DcId y = 0; y < wan.dc_count(); ++y) {
        if (demand_test.read_rate(x, y) > 0.0 && routing.server(x, y) < 0) {
          routing.sigma[{x, y}] = nearest_holder(x, y, placement, wan, items);
        }
      }
    }
  } else {
    std::mt19937_64 sigma_rng(seed ^ 0x7369676d);
    for (ItemId x = 0; x < demand_test.item_count; ++x) {
      for (DcId y = 0; y < wan.dc_count(); ++y) {
        if (demand_test.read_rate(x, y) == 0.0) continue;
        std::vector<DcId> holders = placement.holders(x);
        std::uniform_int_distribution<size_t> pickh(0, holders.size() - 1);
        routing.sigma[{x, y}] = holders[pickh(sigma_rng)];
      }
    }
  }
  derive_rho(routing, wl.patterns, demand_test);

  result.cost = total_objective(placement, routing, demand_test, wan, items,
                                wl.patterns, pcfg.cost);

  std::int64_t write_sync_bytes = 0;
  for (ItemId x = 0; x < demand_test.item_count; ++x) {
    for (DcId y = 0; y < wan.dc_count(); ++y) {
      double w = demand_test.write_rate(x, y);
      if (w == 0.0) continue;
      for (DcId d = 0; d < wan.dc_count(); ++d) {
        if (d != y && placement.has(x, d)) {
          write_sync_bytes +=
              static_cast<std::int64_t>(w) * items.at(x).size_bytes;
        }
      }
    }
  }

  // offline analysis routing over every item read in the test window
  std::vector<ItemId> request;
  for (ItemId x = 0; x < demand_test.item_count; ++x) {
    if (demand_test.total_read_rate(x) > 0.0) request.push_back(x);
  }
  MigrationParams mparams;
  mparams.iota = cfg.num("iterations", 15.0);
  mparams.msg_bytes = cfg.integer("msg_bytes", 1024);
  mparams.xi_fraction = cfg.num("xi_fraction", 0.2);
  AssemblyPlan offline;
  std::int64_t gather_best = 0;
  if (!request.empty()) {
    offline = route_offline(request, placement, lg, graph, part, wan, items, mparams);
    result.migration_ratio = offline.migration_ratio;
    result.offline_plan_bytes =
        estimate_offline_comm(offline, request, placement, graph, items, mparams);
    bool first = true;
    for (DcId d = 0; d < wan.dc_count(); ++d) {
      AssemblyPlan gp = gather_all_plan(request, d, placement, graph, wan, items, mparams);
      std::int64_t c = estimate_offline_comm(gp, request, placement, graph, items, mparams);
      if (first || c < gather_best) {
        gather_best = c;
        first = false;
      }
    }
    result.offline_gather_bytes = gather_best;
  }

  // pre-caching hit-rate sweep: heat from the historical window, hits from
  // the test window, precision of the cached sets over a homes-only baseline
  PlacementState homes(static_cast<std::int32_t>(items.size()), wan.dc_count());
  for (ItemId x = 0; x < homes.item_count; ++x) homes.set(x, items.at(x).home, true);
  for (int theta = 10; theta <= 90; theta += 10) {
    std::int64_t cached_total = 0;
    std::int64_t cached_hit = 0;
    for (DcId d = 0; d < wan.dc_count(); ++d) {
      PlacementState with_cache = homes;
      std::vector<ItemId> cached =
          engine.precache_hot(d, static_cast<double>(theta) / 100.0, with_cache);
      cached_total += static_cast<std::int64_t>(cached.size());
      for (ItemId x : cached) {
        if (demand_test.read_rate(x, d) > 0.0) ++cached_hit;
      }
    }
    double rate = cached_total > 0
                      ? static_cast<double>(cached_hit) / static_cast<double>(cached_total)
                      : 0.0;
    result.hit_rates.emplace_back(theta, rate);
  }

  // reports
  std::ostringstream cost_csv;
  cost_csv << "C_S,C_R,C_W,C_A,total\n" << result.cost.csv_row() << "\n";
  write_file((fs::path(out_dir) / "cost.csv").string(), cost_csv.str(),
             result.report_files);
  write_file((fs::path(out_dir) / "latency.csv").string(), latency_csv.str(),
             result.report_files);

  std::ostringstream wan_csv;
  wan_csv << "read_wan_bytes,write_sync_bytes,total_bytes\n";
  wan_csv << read_wan_bytes << "," << write_sync_bytes << ","
          << (read_wan_bytes + write_sync_bytes) << "\n";
  write_file((fs::path(out_dir) / "wan.csv").string(), wan_csv.str(),
             result.report_files);

  std::ostringstream mig_csv;
  mig_csv << "retained_sites,migrated_items,requested_items,migration_ratio,"
             "plan_bytes,gather_bytes\n";
  mig_csv << offline.retained.size() << "," << offline.migrations.size() << ","
          << request.size() << "," << fmt(result.migration_ratio) << ","
          << result.offline_plan_bytes << "," << result.offline_gather_bytes << "\n";
  write_file((fs::path(out_dir) / "migration.csv").string(), mig_csv.str(),
             result.report_files);

  std::ostringstream hit_csv;
  hit_csv << "theta_percent,hit_rate\n";
  for (const auto& [theta, rate] : result.hit_rates) {
    hit_csv << theta << "," << fmt(rate) << "\n";
  }
  write_file((fs::path(out_dir) / "hitrate.csv").string(), hit_csv.str(),
             result.report_files);

  if (cfg.integer("oracle", 0) != 0 || opts.force_oracle) {
    OracleResult oracle = solve_exact(items, wl.patterns, demand_test, wan,
                                      gamma_max_s, pcfg.cost);
    if (!oracle.feasible) {
      throw PipelineError("oracle: no feasible state, binding constraint " +
                          oracle.binding_constraint);
    }
    result.gap_percent = gap_percent(result.cost.total, oracle.cost.total);
    result.oracle_ran = true;
    std::ostringstream gap_csv;
    gap_csv << "heuristic_total,optimal_total,gap_percent\n";
    gap_csv << fmt(result.cost.total) << "," << fmt(oracle.cost.total) << ","
            << fmt(result.gap_percent) << "\n";
    write_file((fs::path(out_dir) / "gap.csv").string(), gap_csv.str(),
               result.report_files);
  }

  if (opts.dump_layers) {
    write_file((fs::path(out_dir) / "layers.txt").string(),
               dump_layered_graph(lg, graph), result.report_files);
  }
  if (opts.dump_heat) {
    HeatGraph hg = HeatGraph::from_graph(graph);
    HeatState state;
    state.heat.assign(static_cast<size_t>(hg.n), 0.0);
    for (VertexId v = 0; v < graph.vertex_count; ++v) {
      state.heat[static_cast<size_t>(v)] = demand_hist.total_read_rate(items.vertex_item(v));
    }
    std::ostringstream heat_csv;
    heat_csv << "step,vertex,heat\n";
    heat_csv.precision(12);
    for (int step = 0; step <= 20; ++step) {
      for (VertexId v = 0; v < graph.vertex_count; ++v) {
        heat_csv << step << "," << v << "," << state.heat[static_cast<size_t>(v)] << "\n";
      }
      state = vertex_step(hg, state, pcfg.dhd);
    }
    write_file((fs::path(out_dir) / "heat.csv").string(), heat_csv.str(),
               result.report_files);
  }
  return result;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open report file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<double> split_row(const std::string& row) {
  std::vector<double> out;
  std::stringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

double mean_latency_from_csv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  double sum = 0.0;
  std::int64_t n = 0;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::stringstream ss(lines[i]);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col == 3) {
        sum += std::stod(cell);
        ++n;
      }
      ++col;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

std::string compare_reports(const std::string& dir_a, const std::string& dir_b) {
  auto cost_a = read_lines((fs::path(dir_a) / "cost.csv").string());
  auto cost_b = read_lines((fs::path(dir_b) / "cost.csv").string());
  if (cost_a.size() < 2 || cost_b.size() < 2 || cost_a[0] != cost_b[0]) {
    throw ConfigError("report schema mismatch between " + dir_a + " and " + dir_b);
  }
  std::vector<double> a = split_row(cost_a[1]);
  std::vector<double> b = split_row(cost_b[1]);
  if (a.size() != b.size()) {
    throw ConfigError("report schema mismatch: differing column counts");
  }
  std::vector<std::string> headers;
  {
    std::stringstream ss(cost_a[0]);
    std::string cell;
    while (std::getline(ss, cell, ',')) headers.push_back(cell);
  }
  std::ostringstream os;
  os << "metric,a,b,ratio_b_over_a\n";
  os.precision(9);
  for (size_t i = 0; i < a.size(); ++i) {
    double ratio = a[i] != 0.0 ? b[i] / a[i] : 0.0;
    os << headers[i] << "," << a[i] << "," << b[i] << "," << ratio << "\n";
  }
  double la = mean_latency_from_csv((fs::path(dir_a) / "latency.csv").string());
  double lb = mean_latency_from_csv((fs::path(dir_b) / "latency.csv").string());
  os << "mean_latency_ms," << la << "," << lb << "," << (la != 0.0 ? lb / la : 0.0)
     << "\n";
  return os.str();
}

}  // namespace geolayer
