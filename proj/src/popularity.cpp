#include "d2dcoop/popularity.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace d2dcoop {

PopularityModel PopularityModel::make(int catalog_size, int cache_size, double zipf_beta) {
  if (catalog_size < 1) throw std::invalid_argument("catalog_size must be >= 1");
  if (cache_size < 1 || cache_size > catalog_size)
    throw std::invalid_argument("cache_size must be in [1, catalog_size]");
  if (catalog_size % cache_size != 0)
    throw std::invalid_argument("cache_size must divide catalog_size");
  if (!(zipf_beta >= 0.0)) throw std::invalid_argument("zipf_beta must be >= 0");

  PopularityModel m;
  m.catalog_size = catalog_size;
  m.cache_size = cache_size;
  m.zipf_beta = zipf_beta;
  m.group_count = catalog_size / cache_size;

  m.pmf.resize(catalog_size);
  double norm = 0.0;
  for (int i = 1; i <= catalog_size; ++i) {
    m.pmf[i - 1] = std::pow(static_cast<double>(i), -zipf_beta);
    norm += m.pmf[i - 1];
  }
  for (double& p : m.pmf) p /= norm;

  m.group_probs.resize(m.group_count);
  for (int k = 0; k < m.group_count; ++k) {
    double s = 0.0;
    for (int i = 0; i < cache_size; ++i) s += m.pmf[k * cache_size + i];
    m.group_probs[k] = s;
  }
  return m;
}

ClusterConfig ClusterConfig::make(int total_users, int users_per_cluster) {
  if (total_users < 1) throw std::invalid_argument("total_users must be >= 1");
  if (users_per_cluster < 1) throw std::invalid_argument("users_per_cluster must be >= 1");
  if (total_users % users_per_cluster != 0)
    throw std::invalid_argument("users_per_cluster must divide total_users");
  ClusterConfig c;
  c.total_users = total_users;
  c.users_per_cluster = users_per_cluster;
  c.cluster_count = total_users / users_per_cluster;
  return c;
}

double zipf_pmf(int file_index, const PopularityModel& model) {
  if (file_index < 1 || file_index > model.catalog_size)
    throw std::domain_error("file index out of range: " + std::to_string(file_index));
  return model.pmf[file_index - 1];
}

double group_prob(int group_index, const PopularityModel& model) {
  if (group_index < 1 || group_index > model.group_count)
    throw std::domain_error("group index out of range: " + std::to_string(group_index));
  return model.group_probs[group_index - 1];
}

double hit_prob(int group_index, int users_per_cluster, const PopularityModel& model) {
  if (users_per_cluster < 1) throw std::domain_error("users_per_cluster must be >= 1");
  const double pk = group_prob(group_index, model);
  if (users_per_cluster > 64) {
    // (1-pk)^K in log space to avoid underfow for very large clusters
    if (pk >= 1.0) return 1.0;
    return -std::expm1(users_per_cluster * std::log1p(-pk));
  }
  return 1.0 - std::pow(1.0 - pk, users_per_cluster);
}

double coop_prob(const ClusterConfig& cfg, const PopularityModel& model) {
  const int K = cfg.users_per_cluster;
  const int B = cfg.cluster_count;
  const int cached = std::min(K, model.group_count);
  // Product of miss probabilities over cached groups, in log space when long.
  if (cached > 64) {
    double log_miss = 0.0;
    for (int k = 1; k <= cached; ++k) {
      const double ph_b = std::pow(hit_prob(k, K, model), B);
      if (ph_b >= 1.0) return 1.0;
      log_miss += std::log1p(-ph_b);
    }
    return -std::expm1(log_miss);
  }
  double miss = 1.0;
  for (int k = 1; k <= cached; ++k) {
    miss *= 1.0 - std::pow(hit_prob(k, K, model), B);
  }
  return 1.0 - miss;
}

double avg_active_coop(const ClusterConfig& cfg, const PopularityModel& model) {
  return cfg.cluster_count * coop_prob(cfg, model);
}

double avg_cellular_users(const ClusterConfig& cfg, const PopularityModel& model) {
  const int cached = std::min(cfg.users_per_cluster, model.group_count);
  double cached_mass = 0.0;
  for (int k = 1; k <= cached; ++k) cached_mass += group_prob(k, model);
  double p = 1.0 - cached_mass;
  if (p < 0.0) p = 0.0;  // guard against rounding when all groups are cached
  return cfg.total_users * p;
}

}  // namespace d2dcoop
