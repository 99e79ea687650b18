#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "d2dcoop/geometry.hpp"
#include "d2dcoop/popularity.hpp"
#include "doctest.h"

using namespace d2dcoop;

TEST_CASE("zipf pmf basics") {
  const PopularityModel uni = PopularityModel::make(300, 10, 0.0);
  for (int i : {1, 150, 300}) CHECK(zipf_pmf(i, uni) == doctest::Approx(1.0 / 300).epsilon(1e-12));

  const PopularityModel one = PopularityModel::make(1, 1, 2.0);
  CHECK(zipf_pmf(1, one) == doctest::Approx(1.0).epsilon(1e-12));

  // harmonic normalization 1 + 1/2 + 1/3 = 11/6
  const PopularityModel h3 = PopularityModel::make(3, 1, 1.0);
  CHECK(zipf_pmf(1, h3) == doctest::Approx(6.0 / 11).epsilon(1e-12));

  CHECK_THROWS_AS(zipf_pmf(0, h3), std::exception);
  CHECK_THROWS_AS(zipf_pmf(4, h3), std::exception);
}

TEST_CASE("pmf and group probabilities normalize and decrease") {
  for (double beta : {0.0, 0.5, 1.0, 1.8}) {
    const PopularityModel m = PopularityModel::make(300, 10, beta);
    double s = 0.0;
    for (int i = 1; i <= m.catalog_size; ++i) s += zipf_pmf(i, m);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    double gs = 0.0;
    for (int k = 1; k <= m.group_count; ++k) gs += group_prob(k, m);
    CHECK(gs == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 2; i <= m.catalog_size; ++i)
      CHECK(zipf_pmf(i, m) <= zipf_pmf(i - 1, m) + 1e-15);
    for (int k = 2; k <= m.group_count; ++k)
      CHECK(group_prob(k, m) <= group_prob(k - 1, m) + 1e-15);
  }
}

TEST_CASE("group probability hand values") {
  const PopularityModel uni = PopularityModel::make(300, 10, 0.0);
  for (int k : {1, 15, 30}) CHECK(group_prob(k, uni) == doctest::Approx(10.0 / 300).epsilon(1e-12));

  // (1 + 1/2) / (1 + 1/2 + 1/3 + 1/4) = 18/25
  const PopularityModel m = PopularityModel::make(4, 2, 1.0);
  CHECK(group_prob(1, m) == doctest::Approx(18.0 / 25).epsilon(1e-12));
  CHECK_THROWS_AS(group_prob(0, m), std::exception);
  CHECK_THROWS_AS(group_prob(3, m), std::exception);
}

TEST_CASE("hit probability") {
  const PopularityModel m = PopularityModel::make(2, 1, 0.0);  // P_k = 0.5
  CHECK(hit_prob(1, 1, m) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hit_prob(1, 2, m) == doctest::Approx(0.75).epsilon(1e-12));

  const PopularityModel sure = PopularityModel::make(1, 1, 1.0);  // P_1 = 1
  for (int k : {1, 5, 40}) CHECK(hit_prob(1, k, sure) == doctest::Approx(1.0));

  const PopularityModel big = PopularityModel::make(300, 10, 0.9);
  for (int k = 1; k <= big.group_count; ++k) {
    for (int users = 2; users <= 20; users += 3)
      CHECK(hit_prob(k, users, big) >= hit_prob(k, users - 1, big) - 1e-15);
    if (k > 1) CHECK(hit_prob(k, 7, big) <= hit_prob(k - 1, 7, big) + 1e-15);
  }
}

TEST_CASE("coop probability reductions") {
  const PopularityModel single = PopularityModel::make(10, 10, 1.3);  // K_0 = 1
  CHECK(coop_prob(ClusterConfig::make(5, 1), single) == doctest::Approx(1.0));

  // B = 1: reduces to 1 - prod_k (1 - Ph_k)
  const PopularityModel m = PopularityModel::make(300, 10, 0.7);
  const ClusterConfig b1 = ClusterConfig::make(12, 12);
  double prod = 1.0;
  for (int k = 1; k <= 12; ++k) prod *= 1.0 - hit_prob(k, 12, m);
  CHECK(coop_prob(b1, m) == doctest::Approx(1.0 - prod).epsilon(1e-12));

  // non-decreasing in K at fixed M
  double prev = -1.0;
  for (int K : {2, 5, 10, 15, 20, 30}) {
    const double pc = coop_prob(ClusterConfig::make(180, K), m);
    CHECK(pc >= prev - 1e-15);
    CHECK(pc >= 0.0);
    CHECK(pc <= 1.0);
    prev = pc;
  }
}

TEST_CASE("average active cooperative receivers") {
  const PopularityModel sure = PopularityModel::make(10, 10, 0.0);
  CHECK(avg_active_coop(ClusterConfig::make(9, 1), sure) == doctest::Approx(9.0));

  const PopularityModel m = PopularityModel::make(300, 10, 1.0);
  for (int K : {2, 5, 10}) {
    const ClusterConfig c = ClusterConfig::make(180, K);
    CHECK(avg_active_coop(c, m) ==
          doctest::Approx(c.cluster_count * coop_prob(c, m)).epsilon(1e-12));
  }
}

TEST_CASE("average cellular users") {
  const PopularityModel uni = PopularityModel::make(300, 10, 0.0);
  CHECK(avg_cellular_users(ClusterConfig::make(180, 3), uni) ==
        doctest::Approx(162.0).epsilon(1e-12));
  CHECK(avg_cellular_users(ClusterConfig::make(180, 30), uni) ==
        doctest::Approx(0.0).epsilon(1e-9));

  const PopularityModel m = PopularityModel::make(300, 10, 1.0);
  double cached = 0.0;
  for (int k = 1; k <= 10; ++k) cached += group_prob(k, m);
  CHECK(avg_cellular_users(ClusterConfig::make(180, 10), m) ==
        doctest::Approx(180.0 * (1.0 - cached)).epsilon(1e-12));
}

TEST_CASE("coop probability and cellular count match request sampling") {
  // Empirical frequencies from independent request draws, 3 standard errors.
  std::mt19937_64 rng(20240811);
  for (double beta : {0.0, 0.5, 1.0}) {
    const PopularityModel m = PopularityModel::make(300, 10, beta);
    for (int K : {5, 10}) {
      const ClusterConfig cfg = ClusterConfig::make(180, K);
      const int B = cfg.cluster_count;
      const long draws = 100000;
      // Per-draw: sample a group for each user via the group distribution.
      std::vector<double> cdf(m.group_count);
      double acc = 0.0;
      for (int k = 0; k < m.group_count; ++k) {
        acc += m.group_probs[k];
        cdf[k] = acc;
      }
      long mode1 = 0;
      long cellular = 0;
      std::vector<int> hit(K);
      for (long d = 0; d < draws; ++d) {
        for (int k = 0; k < K; ++k) hit[k] = 0;
        for (int b = 0; b < B; ++b) {
          unsigned cluster_hits = 0;
          std::vector<int> local(K, 0);
          for (int u = 0; u < K; ++u) {
            const double r = uniform01(rng);
            int g = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
            if (g >= m.group_count) g = m.group_count - 1;
            if (g >= K)
              ++cellular;
            else
              local[g] = 1;
          }
          (void)cluster_hits;
          for (int k = 0; k < K; ++k) hit[k] += local[k];
        }
        for (int k = 0; k < K; ++k)
          if (hit[k] == B) {
            ++mode1;
            break;
          }
      }
      const double pc_hat = static_cast<double>(mode1) / draws;
      const double pc = coop_prob(cfg, m);
      const double se_pc = std::sqrt(std::max(pc * (1 - pc), 1e-12) / draws);
      CHECK(std::abs(pc_hat - pc) <= 3.0 * se_pc + 1e-9);

      const double nb_hat = static_cast<double>(cellular) / draws;
      const double nb = avg_cellular_users(cfg, m);
      // Cellular count is a binomial over M users.
      const double p1 = nb / 180.0;
      const double se_nb = std::sqrt(std::max(180.0 * p1 * (1 - p1), 1e-12) / draws);
      CHECK(std::abs(nb_hat - nb) <= 3.0 * se_nb + 1e-9);
    }
  }
}

TEST_CASE("model construction rejects bad shapes") {
  CHECK_THROWS_AS(PopularityModel::make(300, 7, 0.5), std::exception);   // 7 !| 300
  CHECK_THROWS_AS(PopularityModel::make(0, 1, 0.5), std::exception);
  CHECK_THROWS_AS(PopularityModel::make(300, 10, -0.1), std::exception);
  CHECK_THROWS_AS(ClusterConfig::make(181, 30), std::exception);  // 30 !| 181
  CHECK_THROWS_AS(ClusterConfig::make(0, 1), std::exception);
}
