#include "d2dcoop/counting.hpp"

#include <cmath>
#include <numeric>

namespace d2dcoop {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// All ways to split K requests over `groups` file groups, as count vectors.
void compositions(int remaining, int groups, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (groups == 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int first = 0; first <= remaining; ++first) {
    current.push_back(first);
    compositions(remaining - first, groups - 1, current, out);
    current.pop_back();
  }
}

double multinomial_prob(const std::vector<int>& counts, const std::vector<double>& probs,
                        int total) {
  double log_p = log_factorial(total);
  for (size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    if (probs[k] <= 0.0) return 0.0;
    log_p += counts[k] * std::log(probs[k]) - log_factorial(counts[k]);
  }
  return std::exp(log_p);
}

}  // namespace

double config_prob(const RequestConfiguration& cfg, const PopularityModel& model) {
  if (cfg.group_count != model.group_count)
    throw std::invalid_argument("configuration and model disagree on group count");
  const int K = cfg.counts.empty() ? 0 : std::accumulate(cfg.counts.begin(),
                                                         cfg.counts.begin() + cfg.group_count, 0);
  double p = 1.0;
  std::vector<int> row(cfg.group_count);
  for (int i = 0; i < cfg.clusters; ++i) {
    for (int k = 0; k < cfg.group_count; ++k) row[k] = cfg.at(i, k);
    p *= multinomial_prob(row, model.group_probs, K);
  }
  return p;
}

int coop_count(const RequestConfiguration& cfg, int users_per_cluster) {
  const int kmax = std::min(users_per_cluster, cfg.group_count);
  int total = 0;
  for (int k = 0; k < kmax; ++k) {
    int sum = 0;
    bool hit_everywhere = true;
    for (int i = 0; i < cfg.clusters; ++i) {
      const int n = cfg.at(i, k);
      if (n == 0) {
        hit_everywhere = false;
        break;
      }
      sum += n;
    }
    if (hit_everywhere) total += sum;
  }
  return total;
}

double exact_avg_coop(const ClusterConfig& cfg, const PopularityModel& model) {
  // The indicator that every cluster hits group k factorizes over independent
  // clusters, and n*1{n>0} = n, so each group contributes
  // B * E[n_ik] * Ph_k^(B-1) = B*K*P_k * Ph_k^(B-1).
  const int K = cfg.users_per_cluster;
  const int B = cfg.cluster_count;
  const int kmax = std::min(K, model.group_count);
  double total = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double ph = hit_prob(k, K, model);
    total += B * K * group_prob(k, model) * std::pow(ph, B - 1);
  }
  return total;
}

double enumerate_avg_coop(const ClusterConfig& cfg, const PopularityModel& model,
                          std::uint64_t state_budget) {
  const int K = cfg.users_per_cluster;
  const int B = cfg.cluster_count;
  const int K0 = model.group_count;

  // state count = (#compositions)^B with #compositions = C(K+K0-1, K0-1);
  // computed up front so huge instances bail out before materializing anything.
  const double comp_count = std::exp(std::lgamma(K + K0) - std::lgamma(K + 1.0) -
                                     std::lgamma(static_cast<double>(K0)));
  if (std::pow(comp_count, B) > static_cast<double>(state_budget))
    throw EnumerationBudgetExceeded(
        "enumeration state space exceeds budget; use approx_avg_coop");

  std::vector<std::vector<int>> comps;
  std::vector<int> scratch;
  compositions(K, K0, scratch, comps);

  std::vector<double> comp_prob(comps.size());
  for (size_t c = 0; c < comps.size(); ++c)
    comp_prob[c] = multinomial_prob(comps[c], model.group_probs, K);

  RequestConfiguration rc;
  rc.clusters = B;
  rc.group_count = K0;
  rc.counts.assign(static_cast<size_t>(B) * K0, 0);

  std::vector<size_t> idx(B, 0);
  double total = 0.0;
  while (true) {
    double p = 1.0;
    for (int i = 0; i < B; ++i) {
      p *= comp_prob[idx[i]];
      for (int k = 0; k < K0; ++k) rc.counts[i * K0 + k] = comps[idx[i]][k];
    }
    total += p * coop_count(rc, K);

    int pos = B - 1;
    while (pos >= 0 && ++idx[pos] == comps.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return total;
}

double approx_avg_coop(const ClusterConfig& cfg, const PopularityModel& model) {
  const int K = cfg.users_per_cluster;
  const int B = cfg.cluster_count;
  const int kmax = std::min(K, model.group_count);

  std::vector<double> pk(kmax), ph(kmax), ph_b(kmax);
  for (int k = 0; k < kmax; ++k) {
    pk[k] = group_prob(k + 1, model);
    ph[k] = hit_prob(k + 1, K, model);
    ph_b[k] = std::pow(ph[k], B);
  }

  // Single hit group.
  double nc1 = 0.0;
  for (int k = 0; k < kmax; ++k) {
    double others = 1.0;
    for (int j = 0; j < kmax; ++j)
      if (j != k) others *= 1.0 - ph_b[j];
    nc1 += others * std::pow(ph[k], B - 1) * B * pk[k] * K;
  }

  // Exactly two hit groups, ordered pairs.
  double nc2 = 0.0;
  for (int k1 = 0; k1 < kmax; ++k1) {
    for (int k2 = 0; k2 < kmax; ++k2) {
      if (k1 == k2) continue;
      double others = 1.0;
      for (int j = 0; j < kmax; ++j)
        if (j != k1 && j != k2) others *= 1.0 - ph_b[j];
      double inner = 0.0;
      for (int m = 2; m <= K; ++m) {
        for (int m1 = 1; m1 < m; ++m1) {
          const int m2 = m - m1;
          const double log_coef =
              log_factorial(m) - log_factorial(m1) - log_factorial(m2);
          inner += m * std::exp(log_coef + m1 * std::log(pk[k1]) + m2 * std::log(pk[k2]));
        }
      }
      nc2 += others * std::pow(ph[k1] * ph[k2], B - 1) * B * inner;
    }
  }
  return nc1 + nc2;
}

double avg_ncoop(const ClusterConfig& cfg, const PopularityModel& model) {
  return cfg.total_users - exact_avg_coop(cfg, model) - avg_cellular_users(cfg, model);
}

}  // namespace d2dcoop
