#include "d2dcoop/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d2dcoop/counting.hpp"

namespace d2dcoop {

namespace {

struct KAnalytics {
  ClusterConfig cluster;
  RadioConfig radio;
  double pc, nc, nn, coop_se, ncoop_se, occupancy;
};

KAnalytics analyze_k(int K, const PopularityModel& model, const RadioScenario& scenario,
                     int total_users) {
  KAnalytics a;
  a.cluster = ClusterConfig::make(total_users, K);
  a.radio = radio_for(scenario, a.cluster.cluster_count);
  a.pc = coop_prob(a.cluster, model);
  a.nc = exact_avg_coop(a.cluster, model);
  a.nn = avg_ncoop(a.cluster, model);
  a.coop_se = coop_spectral_efficiency(a.radio);
  a.ncoop_se = ncoop_spectral_efficiency(a.radio);
  const double p_ncoop = std::clamp(a.nn / total_users, 0.0, 1.0);
  a.occupancy = 1.0 - std::pow(1.0 - p_ncoop, K);
  return a;
}

EtaResult eta_for(const KAnalytics& a, double rate_floor_bps) {
  EtaResult r;
  const double wb = a.radio.bandwidth_hz * a.radio.cluster_count;
  // Coop constraint is vacuous when there are no coop users to serve.
  r.lower = a.nc > 0.0 ? a.nc * rate_floor_bps / (wb * a.coop_se) : 0.0;
  r.upper = a.nn > 0.0 ? 1.0 - rate_floor_bps * a.nn / (wb * a.ncoop_se) : 1.0;
  if (r.upper < 0.0 || r.lower > std::min(r.upper, 1.0)) {
    r.feasible = false;
    return r;
  }
  r.feasible = true;
  // Throughput is monotone in eta with sign coop_se - ncoop_se, so the
  // optimum sits at the matching end of the feasible interval.
  const double pick = a.coop_se >= a.ncoop_se ? r.upper : r.lower;
  r.eta = std::clamp(pick, r.lower, std::min(r.upper, 1.0));
  return r;
}

}  // namespace

double objective_throughput(const RadioConfig& radio, double eta, double coop_prob,
                            double coop_se, double ncoop_se, double ncoop_occupancy) {
  return radio.bandwidth_hz * radio.cluster_count *
         (coop_prob * eta * coop_se +
          (1.0 - coop_prob * eta) * ncoop_occupancy * ncoop_se);
}

EtaResult eta_star(int users_per_cluster, const PopularityModel& model,
                   const RadioScenario& scenario, double rate_floor_bps, int total_users) {
  return eta_for(analyze_k(users_per_cluster, model, scenario, total_users),
                 rate_floor_bps);
}

OptimizationResult optimize(const PopularityModel& model, const RadioScenario& scenario,
                            double rate_floor_bps, int total_users) {
  if (total_users < 1) throw std::invalid_argument("total_users must be >= 1");
  OptimizationResult out;
  for (int K = 1; K <= std::min(total_users, model.group_count); ++K) {
    if (total_users % K != 0) continue;
    const KAnalytics a = analyze_k(K, model, scenario, total_users);
    const EtaResult er = eta_for(a, rate_floor_bps);

    PerKEntry e;
    e.users_per_cluster = K;
    e.cluster_count = a.cluster.cluster_count;
    e.feasible = er.feasible;
    e.eta_star = er.eta;
    e.coop_prob = a.pc;
    e.avg_coop_users = a.nc;
    e.avg_ncoop_users = a.nn;
    e.coop_se = a.coop_se;
    e.ncoop_se = a.ncoop_se;
    e.ncoop_occupancy = a.occupancy;
    if (er.feasible) {
      e.throughput_bps =
          objective_throughput(a.radio, er.eta, a.pc, a.coop_se, a.ncoop_se, a.occupancy);
      const UserRates ur = user_rates(a.radio, er.eta, a.nc, a.nn, a.coop_se, a.ncoop_se);
      e.coop_user_rate_bps = ur.coop_user_rate_bps.value_or(0.0);
      e.ncoop_user_rate_bps = ur.ncoop_user_rate_bps.value_or(0.0);
      // Strict improvement required, so ties break toward the smaller K.
      if (!out.feasible || e.throughput_bps > out.best_throughput_bps) {
        out.feasible = true;
        out.best_K = K;
        out.best_eta = er.eta;
        out.best_throughput_bps = e.throughput_bps;
      }
    }
    out.table.push_back(e);
  }
  return out;
}

}  // namespace d2dcoop
