#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "d2dcoop/geometry.hpp"
#include "d2dcoop/linkrates.hpp"
#include "d2dcoop/popularity.hpp"

namespace d2dcoop {

enum class CoopSinrMode { zf_exact, paper_approx };
enum class Placement { per_cell, uniform };

enum class UserClass : std::uint8_t { coop, ncoop, cellular };

// One random network realization. The j-th member of a cluster caches file
// group j; with per-cell placement every cluster has exactly K members.
struct Drop {
  int clusters = 0;     // B
  int group_count = 0;  // K_0
  std::vector<double> x, y;    // meters, per user
  std::vector<int> cluster_of;
  std::vector<std::vector<int>> members;  // cluster -> user ids in caching order
  std::vector<int> cache_group;  // 0-based cached group per user, -1 if none
  std::vector<int> req_file;     // 1-based file index
  std::vector<int> req_group;    // 0-based group index
  std::vector<UserClass> labels;   // filled by classify()
  std::vector<int> hit_groups;     // 0-based groups hit by enough clusters
  bool mode1 = false;

  int total_users() const { return static_cast<int>(x.size()); }
  // Cacher of `group` in `cluster`, or -1 when nobody there holds it.
  int cacher(int cluster, int group) const {
    const auto& m = members[cluster];
    return group >= 0 && group < static_cast<int>(m.size()) ? m[group] : -1;
  }
};

// Links chosen for one slot, global user ids, -1 where a cluster idles.
struct SlotSchedule {
  int coop_group = -1;  // 0-based, -1 when no cooperative transmission
  std::vector<int> coop_dr;
  std::vector<int> ncoop_dr;
  std::vector<int> ncoop_dt;  // cacher of the DR's requested group
};

struct SimParams {
  long drops = 1000;
  int fading_draws = 1;
  std::uint64_t seed = 1;
  double eta = 0.0;
  CoopSinrMode coop_mode = CoopSinrMode::zf_exact;
  int coop_min_clusters = 0;  // 0 means full cooperation (all B clusters)
  Placement placement = Placement::per_cell;
  bool cooperation = true;  // false: every D2D user competes for the whole band
  int threads = 0;          // 0: resolve from D2D_THREADS, else 1
};

struct SimReport {
  long drops = 0;
  int batches = 0;
  double mean_throughput_bps = 0.0;
  double throughput_ci_bps = 0.0;  // 95% half-width, batch means
  // Unconditional per-user rates (zero-throughput Mode-0 slots included) and
  // rates conditioned on Mode 1.
  double coop_user_rate_bps = 0.0;
  double ncoop_user_rate_bps = 0.0;
  double coop_user_rate_mode1_bps = 0.0;
  double ncoop_user_rate_mode1_bps = 0.0;
  double pc = 0.0, pc_se = 0.0;
  double na = 0.0, na_se = 0.0;
  double nc = 0.0, nc_se = 0.0;
  double nn = 0.0, nn_se = 0.0;
  double nb = 0.0, nb_se = 0.0;
  long rejected_fading_draws = 0;  // ill-conditioned ZF channels redrawn
  long excluded_coop_slots = 0;    // coop transmissions dropped after redraw budget
};

// Classification statistics from request sampling only, no radio.
struct CountStats {
  double pc = 0.0, pc_se = 0.0;
  double na = 0.0, na_se = 0.0;
  double nc = 0.0, nc_se = 0.0;
  double nn = 0.0, nn_se = 0.0;
  double nb = 0.0, nb_se = 0.0;
};

Drop generate_drop(const ClusterLayout& layout, const PopularityModel& model,
                   const ClusterConfig& cfg, std::mt19937_64& rng,
                   Placement placement = Placement::per_cell);

// Labels users and computes the hit-group set. A group is hit when at least
// `coop_min_clusters` clusters (all of them when 0) each have a requester.
void classify(Drop& drop, int coop_min_clusters = 0);

SlotSchedule schedule(const Drop& drop, bool cooperation, std::mt19937_64& rng);

// Deterministic per-drop substream; parallel execution order never matters.
std::mt19937_64 drop_rng(std::uint64_t seed, long drop_index);

SimReport run(const PopularityModel& model, const ClusterConfig& cfg,
              const RadioScenario& scenario, const SimParams& params);

// Frequency-reuse baseline: clusters colored in a 2x2 pattern, one color (and
// one D2D link per cluster of that color) active per slot, no cooperation.
SimReport run_baseline_tdma(const PopularityModel& model, const ClusterConfig& cfg,
                            const RadioScenario& scenario, const SimParams& params);

// Convenience wrapper: full strategy with cooperation triggered by groups hit
// in at least `coop_min_clusters` clusters.
SimReport run_partial_coop(const PopularityModel& model, const ClusterConfig& cfg,
                           const RadioScenario& scenario, const SimParams& params,
                           int coop_min_clusters);

CountStats sample_request_counts(const PopularityModel& model, const ClusterConfig& cfg,
                                 long draws, std::uint64_t seed,
                                 int coop_min_clusters = 0);

// Mean spectral efficiency over the direct links of a full grid with one
// active link per cell. Oracle for ncoop_spectral_efficiency.
double mc_ncoop_se(const RadioConfig& radio, long samples, std::uint64_t seed);

// Mean per-receiver spectral efficiency of the joint transmission across
// `clusters` cells. Oracle for coop_spectral_efficiency.
double mc_coop_se(const RadioConfig& radio, int clusters, CoopSinrMode mode,
                  long samples, std::uint64_t seed, long* rejected = nullptr);

}  // namespace d2dcoop
