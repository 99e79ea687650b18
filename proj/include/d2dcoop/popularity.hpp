#pragma once

#include <vector>

namespace d2dcoop {

// Zipf-ranked catalog split into equally sized file groups.
// Group k (1-based) holds the files ranked (k-1)*N+1 .. k*N.
struct PopularityModel {
  int catalog_size = 0;  // number of files in the catalog
  int cache_size = 0;    // files per user cache, must divide catalog_size
  double zipf_beta = 0.0;
  int group_count = 0;   // catalog_size / cache_size
  std::vector<double> pmf;          // per-file request probability, length catalog_size
  std::vector<double> group_probs;  // per-group request probability, length group_count

  static PopularityModel make(int catalog_size, int cache_size, double zipf_beta);
};

struct ClusterConfig {
  int total_users = 0;        // M
  int users_per_cluster = 0;  // K, must divide M
  int cluster_count = 0;      // B = M / K

  static ClusterConfig make(int total_users, int users_per_cluster);
};

// Request probability of the i-th most popular file (1-based).
double zipf_pmf(int file_index, const PopularityModel& model);

// Probability that a request falls in group k (1-based).
double group_prob(int group_index, const PopularityModel& model);

// Probability that at least one of `users_per_cluster` users requests group k.
double hit_prob(int group_index, int users_per_cluster, const PopularityModel& model);

// Probability that at least one cached group is hit by every cluster (Mode 1).
double coop_prob(const ClusterConfig& cfg, const PopularityModel& model);

// Expected number of simultaneously active cooperative receivers, B * P^c.
double avg_active_coop(const ClusterConfig& cfg, const PopularityModel& model);

// Expected number of users whose requested group is not cached in their cluster.
double avg_cellular_users(const ClusterConfig& cfg, const PopularityModel& model);

}  // namespace d2dcoop
