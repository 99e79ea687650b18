#pragma once

#include <optional>

#include "d2dcoop/popularity.hpp"

namespace d2dcoop {

enum class PathLoss { powerlaw, logdistance };

// Scenario-level radio parameters, independent of the cluster split.
struct RadioScenario {
  double hotspot_side_m = 0.0;
  double tx_power_w = 0.0;
  double noise_w = 0.0;
  double bandwidth_hz = 0.0;
  double alpha = 0.0;       // effective path-loss exponent
  double gain_const = 1.0;  // linear path gain at 1 m
  double min_distance_m = 1.0;

  static RadioScenario make(double hotspot_side_m, double tx_power_dbm, double noise_dbm,
                            double bandwidth_hz, PathLoss model, double alpha,
                            double min_distance_m);
};

// Radio parameters for one concrete cluster split (B clusters of side D).
struct RadioConfig {
  double tx_power_w = 0.0;
  double noise_w = 0.0;
  double bandwidth_hz = 0.0;
  double alpha = 0.0;
  double gain_const = 1.0;
  double cell_side_m = 0.0;  // D
  int cluster_count = 0;     // B
  double min_distance_m = 1.0;
  int neighbor_count = 8;  // dominant interferers kept in the analytic model

  double r_min() const { return min_distance_m / cell_side_m; }
};

double dbm_to_watt(double dbm);

// Radio config for B clusters under the given scenario.
RadioConfig radio_for(const RadioScenario& s, int cluster_count);

// Mean spectral efficiency of a non-cooperative link, treating the nearest
// neighbors' transmissions as noise. Depends only on alpha and r_min.
double ncoop_spectral_efficiency(const RadioConfig& radio);

// Mean spectral efficiency of a cooperative (jointly precoded) link.
double coop_spectral_efficiency(const RadioConfig& radio);

// Mean inter-cluster interference power at a receiver, dominant neighbors only.
double mean_interference(const RadioConfig& radio);

// True when the interference-vs-noise condition guaranteeing
// coop_spectral_efficiency >= ncoop_spectral_efficiency holds.
bool prop4_condition(const RadioConfig& radio);

// Network average throughput in bits/s for a bandwidth split eta.
double network_throughput(const RadioConfig& radio, double eta, double coop_prob,
                          double coop_se, double ncoop_se);

struct UserRates {
  // Empty when the corresponding user population is zero (rate unconstrained).
  std::optional<double> coop_user_rate_bps;
  std::optional<double> ncoop_user_rate_bps;
};

// Round-robin per-user rates given mean user counts per class.
UserRates user_rates(const RadioConfig& radio, double eta, double avg_coop_users,
                     double avg_ncoop_users, double coop_se, double ncoop_se);

}  // namespace d2dcoop
