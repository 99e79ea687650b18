#include "d2dcoop/linkrates.hpp"

#include <cmath>
#include <stdexcept>

#include "d2dcoop/geometry.hpp"

namespace d2dcoop {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

RadioScenario RadioScenario::make(double hotspot_side_m, double tx_power_dbm,
                                  double noise_dbm, double bandwidth_hz, PathLoss model,
                                  double alpha, double min_distance_m) {
  RadioScenario s;
  s.hotspot_side_m = hotspot_side_m;
  s.tx_power_w = dbm_to_watt(tx_power_dbm);
  s.noise_w = dbm_to_watt(noise_dbm);
  s.bandwidth_hz = bandwidth_hz;
  s.min_distance_m = min_distance_m;
  if (model == PathLoss::powerlaw) {
    s.alpha = alpha;
    s.gain_const = 1.0;
  } else {
    // 37.6 + 36.8 log10(r) dB  ==  10^-3.76 * r^-3.68 linear
    s.alpha = 3.68;
    s.gain_const = std::pow(10.0, -3.76);
  }
  if (!(s.hotspot_side_m > 0) || !(s.tx_power_w > 0) || !(s.noise_w > 0) ||
      !(s.bandwidth_hz > 0) || !(s.min_distance_m > 0))
    throw std::invalid_argument("radio scenario parameters must be strictly positive");
  return s;
}

RadioConfig radio_for(const RadioScenario& s, int cluster_count) {
  if (cluster_count < 1) throw std::invalid_argument("cluster_count must be >= 1");
  RadioConfig r;
  r.tx_power_w = s.tx_power_w;
  r.noise_w = s.noise_w;
  r.bandwidth_hz = s.bandwidth_hz;
  r.alpha = s.alpha;
  r.gain_const = s.gain_const;
  r.cell_side_m = s.hotspot_side_m / std::sqrt(static_cast<double>(cluster_count));
  r.cluster_count = cluster_count;
  r.min_distance_m = s.min_distance_m;
  return r;
}

double ncoop_spectral_efficiency(const RadioConfig& radio) {
  const double v1 = q1(radio.alpha, radio.r_min());
  const double v2 = q2(radio.alpha, radio.r_min());
  // The constant is log2 of the neighbor count (8 dominant interferers).
  return std::log2(v1) - std::log2(v2) - std::log2(static_cast<double>(radio.neighbor_count));
}

double coop_spectral_efficiency(const RadioConfig& radio) {
  const double v1 = q1(radio.alpha, radio.r_min());
  const double mean_gain =
      radio.tx_power_w * radio.gain_const * std::pow(radio.cell_side_m, -radio.alpha) * v1;
  return std::log2(1.0 + mean_gain / (radio.cluster_count * radio.noise_w));
}

double mean_interference(const RadioConfig& radio) {
  return radio.neighbor_count * radio.tx_power_w * radio.gain_const *
         std::pow(radio.cell_side_m, -radio.alpha) * q2(radio.alpha, radio.r_min());
}

bool prop4_condition(const RadioConfig& radio) {
  return mean_interference(radio) >= radio.cluster_count * radio.noise_w;
}

double network_throughput(const RadioConfig& radio, double eta, double coop_prob,
                          double coop_se, double ncoop_se) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0, 1]");
  if (coop_prob < 0.0 || coop_prob > 1.0)
    throw std::invalid_argument("coop_prob must be in [0, 1]");
  return radio.bandwidth_hz * radio.cluster_count *
         (coop_prob * eta * coop_se + (1.0 - coop_prob * eta) * ncoop_se);
}

UserRates user_rates(const RadioConfig& radio, double eta, double avg_coop_users,
                     double avg_ncoop_users, double coop_se, double ncoop_se) {
  UserRates out;
  const double wb = radio.bandwidth_hz * radio.cluster_count;
  if (avg_coop_users > 0.0) out.coop_user_rate_bps = wb * eta * coop_se / avg_coop_users;
  if (avg_ncoop_users > 0.0)
    out.ncoop_user_rate_bps = wb * (1.0 - eta) * ncoop_se / avg_ncoop_users;
  return out;
}

}  // namespace d2dcoop
