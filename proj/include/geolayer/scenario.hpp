// Experiment harness: scenario configuration, pipeline orchestration
// (load -> layer -> place -> route -> account) and CSV reporting.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolayer/cost.hpp"

namespace geolayer {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sectioned key = value text; section headers group keys for readability but
// names are global.
struct ScenarioConfig {
  std::map<std::string, std::string> values;
  std::string base_dir;

  static ScenarioConfig parse(const std::string& path);

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::string str(const std::string& key, const std::string& fallback) const;
  std::string required(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::string file_path(const std::string& key) const;  // resolved against base_dir
};

struct ScenarioResult {
  std::string strategy;
  CostBreakdown cost;
  double mean_latency_s = 0.0;
  std::int64_t routed_requests = 0;
  std::int64_t latency_violations = 0;  // constraint (d) per routed request
  double migration_ratio = 0.0;
  std::int64_t offline_plan_bytes = 0;
  std::int64_t offline_gather_bytes = 0;
  std::vector<std::pair<int, double>> hit_rates;  // theta percent -> rate
  double gap_percent = 0.0;
  bool oracle_ran = false;
  std::vector<std::string> report_files;
};

struct RunOptions {
  std::string out_dir;        // empty: $GEOSIM_OUT or ./out
  std::string strategy;       // overrides the config when non-empty
  bool dump_layers = false;
  bool dump_heat = false;
  bool force_oracle = false;  // solve exactly even when the config does not ask
};

ScenarioResult run_scenario(const std::string& config_path, const RunOptions& opts);

// Ratio table of report B against report A (cost components plus mean
// latency), normalized to A.
std::string compare_reports(const std::string& dir_a, const std::string& dir_b);

}  // namespace geolayer
