#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "d2dcoop/linkrates.hpp"
#include "d2dcoop/montecarlo.hpp"

namespace d2dcoop {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat scenario description, one key = value per line on disk.
struct SystemConfig {
  double side_length_m = 100.0;       // hotspot side D_c
  int num_users = 180;                // M
  std::optional<int> users_per_cluster;  // K; absent means let the optimizer pick
  double bandwidth_hz = 2e7;          // W
  double tx_power_dbm = 23.0;
  double noise_dbm = -100.0;
  PathLoss pathloss = PathLoss::logdistance;
  double alpha = 3.68;
  double min_distance_m = 1.0;
  int catalog_size = 300;             // N_f
  int cache_size = 10;                // N
  double zipf_beta = 0.0;
  double rate_floor_bps = 1e6;        // mu
  std::optional<double> eta;          // absent means closed-form eta*
  long drops = 2000;
  int fading_draws = 1;
  std::uint64_t seed = 1;
  int coop_min_clusters = 0;          // 0 = full cooperation
  CoopSinrMode coop_sinr_mode = CoopSinrMode::zf_exact;
};

// Parses the key=value file. Unknown keys, malformed lines, and invariant
// violations raise ConfigError with "<path>:<line>: ..." messages.
SystemConfig parse_config(const std::string& path);
SystemConfig parse_config_text(const std::string& text, const std::string& path);

// Inverse of parse_config: parse(emit(c)) == c.
void emit_config(const SystemConfig& cfg, std::ostream& out);

PopularityModel popularity_from(const SystemConfig& cfg);
RadioScenario scenario_from(const SystemConfig& cfg);

}  // namespace d2dcoop
