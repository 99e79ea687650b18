#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "d2dcoop/counting.hpp"
#include "d2dcoop/geometry.hpp"
#include "doctest.h"

using namespace d2dcoop;

namespace {

// Independent expectation oracle: recurse over all per-cluster count vectors.
double naive_avg_coop(const ClusterConfig& cfg, const PopularityModel& model) {
  const int B = cfg.cluster_count, K = cfg.users_per_cluster, K0 = model.group_count;
  RequestConfiguration rc;
  rc.clusters = B;
  rc.group_count = K0;
  rc.counts.assign(static_cast<size_t>(B) * K0, 0);
  double total = 0.0;
  std::function<void(int, int, int)> rec = [&](int cluster, int group, int left) {
    if (cluster == B) {
      total += config_prob(rc, model) * coop_count(rc, K);
      return;
    }
    if (group == K0 - 1) {
      rc.counts[cluster * K0 + group] = left;
      rec(cluster + 1, 0, K);
      rc.counts[cluster * K0 + group] = 0;
      return;
    }
    for (int n = 0; n <= left; ++n) {
      rc.counts[cluster * K0 + group] = n;
      rec(cluster, group + 1, left - n);
    }
    rc.counts[cluster * K0 + group] = 0;
  };
  rec(0, 0, K);
  return total;
}

}  // namespace

TEST_CASE("configuration probability") {
  // Single group: the unique configuration has probability one.
  const PopularityModel g1 = PopularityModel::make(4, 4, 1.0);
  RequestConfiguration c1;
  c1.clusters = 2;
  c1.group_count = 1;
  c1.counts = {3, 3};
  CHECK(config_prob(c1, g1) == doctest::Approx(1.0).epsilon(1e-12));

  // Two groups, one cluster of two users, split (1,1): binomial 2 p (1-p).
  const PopularityModel g2 = PopularityModel::make(4, 2, 1.0);
  const double p = group_prob(1, g2);
  RequestConfiguration c2;
  c2.clusters = 1;
  c2.group_count = 2;
  c2.counts = {1, 1};
  CHECK(config_prob(c2, g2) == doctest::Approx(2.0 * p * (1.0 - p)).epsilon(1e-12));
}

TEST_CASE("configuration probabilities sum to one") {
  const PopularityModel m = PopularityModel::make(6, 2, 0.9);  // K0 = 3
  RequestConfiguration rc;
  rc.clusters = 2;
  rc.group_count = 3;
  rc.counts.assign(6, 0);
  double total = 0.0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int a2 = 0; a2 <= 3; ++a2)
        for (int b2 = 0; a2 + b2 <= 3; ++b2) {
          rc.counts = {a, b, 3 - a - b, a2, b2, 3 - a2 - b2};
          total += config_prob(rc, m);
        }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cooperative user count in a configuration") {
  RequestConfiguration rc;
  rc.clusters = 3;
  rc.group_count = 4;

  // Everyone requests group 1: all 9 users cooperate.
  rc.counts = {3, 0, 0, 0, 3, 0, 0, 0, 3, 0, 0, 0};
  CHECK(coop_count(rc, 3) == 9);

  // Cluster 2 misses both candidate groups: nothing cooperates.
  rc.counts = {2, 1, 0, 0, 0, 0, 3, 0, 1, 2, 0, 0};
  CHECK(coop_count(rc, 2) == 0);

  // Group 1 hit everywhere, group 2 missed by cluster 0.
  rc.counts = {2, 0, 1, 0, 1, 1, 1, 0, 1, 2, 0, 0};
  CHECK(coop_count(rc, 2) == 4);

  // Brute-force re-derivation on random configurations.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int B = 2 + static_cast<int>(rng() % 3);
    const int K0 = 2 + static_cast<int>(rng() % 3);
    const int K = 1 + static_cast<int>(rng() % 4);
    rc.clusters = B;
    rc.group_count = K0;
    rc.counts.assign(static_cast<size_t>(B) * K0, 0);
    for (int i = 0; i < B; ++i)
      for (int u = 0; u < K; ++u) ++rc.counts[i * K0 + static_cast<int>(rng() % K0)];
    int expect = 0;
    for (int k = 0; k < std::min(K, K0); ++k) {
      bool hit_everywhere = true;
      for (int i = 0; i < B; ++i) hit_everywhere = hit_everywhere && rc.at(i, k) > 0;
      if (hit_everywhere)
        for (int i = 0; i < B; ++i) expect += rc.at(i, k);
    }
    CHECK(coop_count(rc, K) == expect);
  }
}

TEST_CASE("exact expected cooperative users: closed cases") {
  // Single group: every user always cooperates.
  const PopularityModel g1 = PopularityModel::make(5, 5, 1.2);
  CHECK(exact_avg_coop(ClusterConfig::make(12, 3), g1) == doctest::Approx(12.0));

  // One cluster: every requester of a stocked group counts.
  const PopularityModel m = PopularityModel::make(300, 10, 0.7);
  double cached = 0.0;
  for (int k = 1; k <= 12; ++k) cached += group_prob(k, m);
  CHECK(exact_avg_coop(ClusterConfig::make(12, 12), m) ==
        doctest::Approx(12.0 * cached).epsilon(1e-12));
}

TEST_CASE("exact matches literal enumeration on small instances") {
  for (double beta : {0.0, 1.0}) {
    for (int K0 : {2, 3, 5}) {
      for (int K : {1, 2, 3, 4}) {
        const PopularityModel m = PopularityModel::make(2 * K0, 2, beta);
        for (int B : {1, 2}) {
          const ClusterConfig cfg = ClusterConfig::make(B * K, K);
          const double naive = naive_avg_coop(cfg, m);
          CHECK(exact_avg_coop(cfg, m) == doctest::Approx(naive).epsilon(1e-10));
          CHECK(enumerate_avg_coop(cfg, m) == doctest::Approx(naive).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("enumeration budget is enforced") {
  const PopularityModel m = PopularityModel::make(300, 10, 0.8);
  CHECK_THROWS_AS(enumerate_avg_coop(ClusterConfig::make(180, 20), m, 1000),
                  EnumerationBudgetExceeded);
}

TEST_CASE("two-term approximation") {
  // K=1 keeps only the single-hit-group term and stays close to exact.
  const PopularityModel m = PopularityModel::make(12, 2, 1.0);  // K0 = 6
  for (int B : {4, 6, 9}) {
    const ClusterConfig cfg = ClusterConfig::make(B, 1);
    const double ex = exact_avg_coop(cfg, m);
    CHECK(std::abs(approx_avg_coop(cfg, m) - ex) / ex < 0.10);
  }

  // Small instances with several clusters stay within 10% of exact. The
  // envelope tightens with B: at B=4 the bound only holds up to K=3, at B=9
  // it holds across the full K range.
  for (int K : {2, 3, 4, 5}) {
    for (int B : {4, 6, 9}) {
      if (B < 9 && K > 3) continue;
      const ClusterConfig cfg = ClusterConfig::make(B * K, K);
      const double ex = exact_avg_coop(cfg, m);
      const double ap = approx_avg_coop(cfg, m);
      CHECK(std::abs(ap - ex) / ex < 0.10);
    }
  }

  // Error shrinks as the cluster count grows.
  double prev = 1e300;
  for (int B : {2, 4, 6, 9}) {
    const ClusterConfig cfg = ClusterConfig::make(B * 3, 3);
    const double ex = exact_avg_coop(cfg, m);
    const double rel = std::abs(approx_avg_coop(cfg, m) - ex) / ex;
    CHECK(rel < prev + 1e-12);
    prev = rel;
  }
}

TEST_CASE("user class counts partition the population") {
  for (double beta : {0.0, 0.5, 1.0}) {
    const PopularityModel m = PopularityModel::make(300, 10, beta);
    for (int K : {2, 5, 10, 15, 20, 30}) {
      const ClusterConfig cfg = ClusterConfig::make(180, K);
      const double nc = exact_avg_coop(cfg, m);
      const double nn = avg_ncoop(cfg, m);
      const double nb = avg_cellular_users(cfg, m);
      CHECK(nn >= -1e-9);
      CHECK(nc >= -1e-9);
      CHECK(nc + nn + nb == doctest::Approx(180.0).epsilon(1e-12));
    }
  }

  // Single cached group covering the whole catalog: everyone cooperates.
  const PopularityModel g1 = PopularityModel::make(5, 5, 2.0);
  CHECK(avg_ncoop(ClusterConfig::make(12, 1), g1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("exact expectation matches request sampling at full scale") {
  const PopularityModel m = PopularityModel::make(300, 10, 1.0);
  const ClusterConfig cfg = ClusterConfig::make(180, 10);
  std::mt19937_64 rng(31337);
  std::vector<double> cdf(m.group_count);
  double acc = 0.0;
  for (int k = 0; k < m.group_count; ++k) {
    acc += m.group_probs[k];
    cdf[k] = acc;
  }
  const long draws = 100000;
  double s = 0.0, ss = 0.0;
  std::vector<std::vector<int>> counts(cfg.cluster_count, std::vector<int>(m.group_count));
  for (long d = 0; d < draws; ++d) {
    for (auto& row : counts) std::fill(row.begin(), row.end(), 0);
    for (int b = 0; b < cfg.cluster_count; ++b)
      for (int u = 0; u < cfg.users_per_cluster; ++u) {
        const double r = uniform01(rng);
        int g = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
        if (g >= m.group_count) g = m.group_count - 1;
        ++counts[b][g];
      }
    int nc = 0;
    for (int k = 0; k < cfg.users_per_cluster; ++k) {
      bool all = true;
      int tot = 0;
      for (int b = 0; b < cfg.cluster_count; ++b) {
        all = all && counts[b][k] > 0;
        tot += counts[b][k];
      }
      if (all) nc += tot;
    }
    s += nc;
    ss += static_cast<double>(nc) * nc;
  }
  const double mean = s / draws;
  const double se = std::sqrt((ss / draws - mean * mean) / draws);
  CHECK(std::abs(exact_avg_coop(cfg, m) - mean) <= 3.0 * se);
}
