#pragma once

#include <vector>

#include "d2dcoop/linkrates.hpp"
#include "d2dcoop/popularity.hpp"

namespace d2dcoop {

struct EtaResult {
  bool feasible = false;
  double eta = 0.0;
  double lower = 0.0;  // coop user-rate constraint
  double upper = 1.0;  // ncoop user-rate constraint
};

struct PerKEntry {
  int users_per_cluster = 0;  // K
  int cluster_count = 0;      // B
  double eta_star = 0.0;
  bool feasible = false;
  double throughput_bps = 0.0;  // optimizer objective at eta_star
  double coop_prob = 0.0;
  double avg_coop_users = 0.0;
  double avg_ncoop_users = 0.0;
  double coop_se = 0.0;
  double ncoop_se = 0.0;
  double ncoop_occupancy = 0.0;  // probability a cluster has an N-Coop user to serve
  double coop_user_rate_bps = 0.0;
  double ncoop_user_rate_bps = 0.0;
};

struct OptimizationResult {
  bool feasible = false;
  int best_K = 0;
  double best_eta = 0.0;
  double best_throughput_bps = 0.0;
  std::vector<PerKEntry> table;  // one row per divisor K of M with K <= K_0
};

// Closed-form bandwidth split for a fixed cluster size, clamped to the
// interval allowed by the two per-user rate constraints. Infeasibility is a
// value, not an error.
EtaResult eta_star(int users_per_cluster, const PopularityModel& model,
                   const RadioScenario& scenario, double rate_floor_bps, int total_users);

// Objective used to rank cluster sizes: the throughput formula with the
// non-cooperative term weighted by the probability that a cluster actually
// has a non-cooperative user to schedule. Without that weight the plain
// formula credits every cluster with a busy link and degenerates to K = 1.
double objective_throughput(const RadioConfig& radio, double eta, double coop_prob,
                            double coop_se, double ncoop_se, double ncoop_occupancy);

// Enumerate divisors K of M with K <= K_0, pick eta per K in closed form, and
// return the feasible maximizer (ties broken toward smaller K).
OptimizationResult optimize(const PopularityModel& model, const RadioScenario& scenario,
                            double rate_floor_bps, int total_users);

}  // namespace d2dcoop
