#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "d2dcoop/popularity.hpp"

namespace d2dcoop {

// One realization of per-cluster request counts: counts(i, k) users of
// cluster i request a file in group k. Every row sums to K.
struct RequestConfiguration {
  int clusters = 0;     // B
  int group_count = 0;  // K_0
  std::vector<int> counts;  // row-major, clusters x group_count

  int at(int cluster, int group) const { return counts[cluster * group_count + group]; }
};

// Probability of one request-count configuration (product of per-cluster
// multinomials). Multinomial coefficients go through lgamma so large K is safe.
double config_prob(const RequestConfiguration& cfg, const PopularityModel& model);

// Number of cooperative users in the configuration: requesters of every group
// k <= K that has at least one requester in every cluster.
int coop_count(const RequestConfiguration& cfg, int users_per_cluster);

// Expected number of cooperative users, exact. Computed by factorizing the
// defining sum per group across independent clusters, so it is cheap at any
// scale:  E[N^c] = M * sum_{k<=K} P_k * Ph_k^(B-1).
double exact_avg_coop(const ClusterConfig& cfg, const PopularityModel& model);

struct EnumerationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expected number of cooperative users by literal enumeration of every
// request-count configuration. Oracle for exact_avg_coop; throws
// EnumerationBudgetExceeded when the state space is larger than the budget.
double enumerate_avg_coop(const ClusterConfig& cfg, const PopularityModel& model,
                          std::uint64_t state_budget = 100000000ull);

// One-plus-two-hit-group approximation of the expected cooperative user count.
double approx_avg_coop(const ClusterConfig& cfg, const PopularityModel& model);

// Expected number of non-cooperative D2D users, M - E[N^c] - E[N^b].
double avg_ncoop(const ClusterConfig& cfg, const PopularityModel& model);

}  // namespace d2dcoop
