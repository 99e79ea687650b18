#include "d2dcoop/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "d2dcoop/counting.hpp"
#include "d2dcoop/geometry.hpp"
#include "d2dcoop/optimizer.hpp"

namespace d2dcoop {

namespace {

std::string g9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Operating {
  bool feasible = true;
  int users_per_cluster = 0;
  double eta = 0.0;
};

// Resolve the (K, eta) pair to run at: explicit values win, otherwise the
// closed-form optimizer fills the gaps.
Operating resolve_operating(const SystemConfig& cfg, const PopularityModel& model,
                            const RadioScenario& scenario) {
  Operating op;
  if (cfg.users_per_cluster) {
    op.users_per_cluster = *cfg.users_per_cluster;
    if (cfg.eta) {
      op.eta = *cfg.eta;
    } else {
      const EtaResult er = eta_star(op.users_per_cluster, model, scenario,
                                    cfg.rate_floor_bps, cfg.num_users);
      op.feasible = er.feasible;
      op.eta = er.eta;
    }
    return op;
  }
  const OptimizationResult res =
      optimize(model, scenario, cfg.rate_floor_bps, cfg.num_users);
  op.feasible = res.feasible;
  op.users_per_cluster = res.feasible ? res.best_K : 1;
  op.eta = cfg.eta ? *cfg.eta : res.best_eta;
  return op;
}

SimParams sim_params(const SystemConfig& cfg, double eta) {
  SimParams p;
  p.drops = cfg.drops;
  p.fading_draws = cfg.fading_draws;
  p.seed = cfg.seed;
  p.eta = eta;
  p.coop_mode = cfg.coop_sinr_mode;
  p.coop_min_clusters = cfg.coop_min_clusters;
  p.cooperation = eta > 0.0;
  return p;
}

const char* kSimulateHeader =
    "beta,K,B,eta,pc_analytic,pc_sim,na_avg,nc_analytic,nc_sim,nn_analytic,"
    "nn_sim,nb_analytic,nb_sim,throughput_analytic_bps,throughput_sim_bps,"
    "throughput_ci_bps,coop_user_rate_bps,ncoop_user_rate_bps,"
    "baseline_eta0_bps,baseline_tdma_bps";

void simulate_row(const SystemConfig& cfg, int K, double eta, std::ostream& out) {
  const PopularityModel model = popularity_from(cfg);
  const ClusterConfig cluster = ClusterConfig::make(cfg.num_users, K);
  const RadioScenario scenario = scenario_from(cfg);
  const RadioConfig radio = radio_for(scenario, cluster.cluster_count);

  const double pc = coop_prob(cluster, model);
  const double nc = exact_avg_coop(cluster, model);
  const double nn = avg_ncoop(cluster, model);
  const double nb = avg_cellular_users(cluster, model);
  const double cse = coop_spectral_efficiency(radio);
  const double nse = ncoop_spectral_efficiency(radio);
  const double tput = network_throughput(radio, eta, pc, cse, nse);
  const UserRates rates = user_rates(radio, eta, nc, nn, cse, nse);

  const SimParams p = sim_params(cfg, eta);
  const SimReport rep = run(model, cluster, scenario, p);
  SimParams p0 = sim_params(cfg, 0.0);
  const SimReport base0 = run(model, cluster, scenario, p0);
  const SimReport tdma = run_baseline_tdma(model, cluster, scenario, p0);

  const char* c = ",";
  out << g9(cfg.zipf_beta) << c << K << c << cluster.cluster_count << c << g9(eta)
      << c << g9(pc) << c << g9(rep.pc) << c << g9(rep.na) << c << g9(nc) << c
      << g9(rep.nc) << c << g9(nn) << c << g9(rep.nn) << c << g9(nb) << c
      << g9(rep.nb) << c << g9(tput) << c << g9(rep.mean_throughput_bps) << c
      << g9(rep.throughput_ci_bps) << c << g9(rates.coop_user_rate_bps.value_or(0.0))
      << c << g9(rates.ncoop_user_rate_bps.value_or(0.0)) << c
      << g9(base0.mean_throughput_bps) << c << g9(tdma.mean_throughput_bps) << "\n";
}

}  // namespace

int cmd_analyze(const SystemConfig& cfg, std::ostream& out) {
  const PopularityModel model = popularity_from(cfg);
  const RadioScenario scenario = scenario_from(cfg);
  const Operating op = resolve_operating(cfg, model, scenario);
  const ClusterConfig cluster = ClusterConfig::make(cfg.num_users, op.users_per_cluster);
  const RadioConfig radio = radio_for(scenario, cluster.cluster_count);
  const EtaResult er = eta_star(op.users_per_cluster, model, scenario,
                                cfg.rate_floor_bps, cfg.num_users);

  const double pc = coop_prob(cluster, model);
  const double nc = exact_avg_coop(cluster, model);
  const double nn = avg_ncoop(cluster, model);
  const double nb = avg_cellular_users(cluster, model);
  const double cse = coop_spectral_efficiency(radio);
  const double nse = ncoop_spectral_efficiency(radio);
  const UserRates rates = user_rates(radio, op.eta, nc, nn, cse, nse);

  out << "beta,K,B,eta,pc,na_avg,nc_exact,nc_approx,nn_avg,n_cellular_avg,q1,q2,"
         "coop_se,ncoop_se,prop4_ok,throughput_bps,coop_user_rate_bps,"
         "ncoop_user_rate_bps,eta_lower,eta_upper\n";
  const char* c = ",";
  out << g9(cfg.zipf_beta) << c << op.users_per_cluster << c << cluster.cluster_count
      << c << g9(op.eta) << c << g9(pc) << c << g9(avg_active_coop(cluster, model))
      << c << g9(nc) << c << g9(approx_avg_coop(cluster, model)) << c << g9(nn) << c
      << g9(nb) << c << g9(q1(radio.alpha, radio.r_min())) << c
      << g9(q2(radio.alpha, radio.r_min())) << c << g9(cse) << c << g9(nse) << c
      << (prop4_condition(radio) ? 1 : 0) << c
      << g9(network_throughput(radio, op.eta, pc, cse, nse)) << c
      << g9(rates.coop_user_rate_bps.value_or(0.0)) << c
      << g9(rates.ncoop_user_rate_bps.value_or(0.0)) << c << g9(er.lower) << c
      << g9(er.upper) << "\n";
  return op.feasible ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const SystemConfig& cfg, std::ostream& out) {
  const PopularityModel model = popularity_from(cfg);
  const RadioScenario scenario = scenario_from(cfg);
  const Operating op = resolve_operating(cfg, model, scenario);
  out << kSimulateHeader << "\n";
  simulate_row(cfg, op.users_per_cluster, op.eta, out);
  return op.feasible ? kExitOk : kExitInfeasible;
}

int cmd_optimize(const SystemConfig& cfg, std::ostream& out) {
  const PopularityModel model = popularity_from(cfg);
  const RadioScenario scenario = scenario_from(cfg);
  const OptimizationResult res =
      optimize(model, scenario, cfg.rate_floor_bps, cfg.num_users);

  out << "K,B,feasible,eta_star,eta_lower,eta_upper,throughput_bps,pc,nc_avg,"
         "nn_avg,coop_user_rate_bps,ncoop_user_rate_bps,is_best\n";
  const char* c = ",";
  for (const PerKEntry& e : res.table) {
    const EtaResult er = eta_star(e.users_per_cluster, model, scenario,
                                  cfg.rate_floor_bps, cfg.num_users);
    out << e.users_per_cluster << c << e.cluster_count << c << (e.feasible ? 1 : 0)
        << c << g9(e.eta_star) << c << g9(er.lower) << c << g9(er.upper) << c
        << g9(e.throughput_bps) << c << g9(e.coop_prob) << c << g9(e.avg_coop_users)
        << c << g9(e.avg_ncoop_users) << c << g9(e.coop_user_rate_bps) << c
        << g9(e.ncoop_user_rate_bps) << c
        << (res.feasible && e.users_per_cluster == res.best_K ? 1 : 0) << "\n";
  }
  return res.feasible ? kExitOk : kExitInfeasible;
}

namespace {

// Kolmogorov-Smirnov distance between a sampler and a pdf known up to
// quadrature, with the cdf tabulated on a fine grid.
double ks_distance(double (*pdf)(double), double (*sampler)(std::mt19937_64&),
                   double hi, long n, std::mt19937_64& rng) {
  const int grid = 8192;
  std::vector<double> cdf(grid + 1, 0.0);
  double prev = pdf(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double r = hi * i / grid;
    const double cur = pdf(r);
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (hi / grid);
    prev = cur;
  }
  for (auto& v : cdf) v /= cdf[grid];

  std::vector<double> s(n);
  for (long i = 0; i < n; ++i) s[i] = sampler(rng);
  std::sort(s.begin(), s.end());
  double d = 0.0;
  for (long i = 0; i < n; ++i) {
    const double pos = std::clamp(s[i] / hi, 0.0, 1.0) * grid;
    const int lo = std::min(static_cast<int>(pos), grid - 1);
    const double f = cdf[lo] + (pos - lo) * (cdf[lo + 1] - cdf[lo]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

struct CheckRow {
  std::string name;
  double analytic, simulated, tolerance;
  bool pass;
};

void add_check(std::vector<CheckRow>& rows, const std::string& name, double analytic,
               double simulated, double tolerance) {
  rows.push_back({name, analytic, simulated, tolerance,
                  std::abs(analytic - simulated) <= tolerance + 1e-12});
}

}  // namespace

int cmd_validate(const SystemConfig& cfg, std::ostream& out) {
  const PopularityModel model = popularity_from(cfg);
  const RadioScenario scenario = scenario_from(cfg);
  const Operating op = resolve_operating(cfg, model, scenario);
  if (!op.feasible) return kExitInfeasible;
  const int K = op.users_per_cluster;
  const ClusterConfig cluster = ClusterConfig::make(cfg.num_users, K);
  const RadioConfig radio = radio_for(scenario, cluster.cluster_count);

  std::vector<CheckRow> rows;
  const double eps = 1e-8;

  // Distance densities: normalization by quadrature, then shape against the
  // direct geometric samplers.
  add_check(rows, "intra_pdf_normalization", 1.0,
            q1(0.0, eps) - 8.0 * q2(0.0, eps), 1e-6);
  add_check(rows, "inter_pdf_normalization", 1.0, q2(0.0, eps), 1e-6);
  {
    std::mt19937_64 rng = drop_rng(cfg.seed, 101);
    add_check(rows, "intra_pdf_ks", 0.0,
              ks_distance(intra_pdf, sample_intra, std::sqrt(2.0), 200000, rng), 0.01);
    add_check(rows, "inter_pdf_ks", 0.0,
              ks_distance(inter_pdf, sample_inter, std::sqrt(5.0), 200000, rng), 0.01);
  }

  // Mode and user-count formulas against request sampling, 3 standard errors.
  for (double beta : {0.0, 0.5, 1.0}) {
    const PopularityModel m = PopularityModel::make(cfg.catalog_size, cfg.cache_size, beta);
    const CountStats st = sample_request_counts(m, cluster, 20000, cfg.seed + 7,
                                                cfg.coop_min_clusters);
    const std::string tag = "_beta" + g9(beta);
    // When every draw lands in the same mode the sample SE collapses to zero;
    // fall back to the binomial SE implied by the analytic probability.
    const double pc_a = coop_prob(cluster, m);
    const double pc_se0 = std::sqrt(std::max(pc_a * (1.0 - pc_a), 0.0) / 20000.0);
    add_check(rows, "coop_prob" + tag, pc_a, st.pc,
              3.0 * std::max(st.pc_se, pc_se0));
    add_check(rows, "avg_coop" + tag, exact_avg_coop(cluster, m), st.nc, 3.0 * st.nc_se);
    add_check(rows, "avg_ncoop" + tag, avg_ncoop(cluster, m), st.nn, 3.0 * st.nn_se);
    add_check(rows, "avg_cellular" + tag, avg_cellular_users(cluster, m), st.nb,
              3.0 * st.nb_se);
  }

  // Closed-form link rates against their Monte Carlo oracles, 15%.
  {
    const double an = ncoop_spectral_efficiency(radio);
    add_check(rows, "ncoop_se_prop1", an, mc_ncoop_se(radio, 200000, cfg.seed + 11),
              0.15 * an);
    const double ac = coop_spectral_efficiency(radio);
    add_check(rows, "coop_se_prop2", ac,
              mc_coop_se(radio, radio.cluster_count, CoopSinrMode::paper_approx, 20000,
                         cfg.seed + 13),
              0.15 * ac);
  }

  // Closed-form bandwidth split against a fine grid search.
  {
    const EtaResult er =
        eta_star(K, model, scenario, cfg.rate_floor_bps, cfg.num_users);
    const double pc = coop_prob(cluster, model);
    const double nc = exact_avg_coop(cluster, model);
    const double nn = avg_ncoop(cluster, model);
    const double cse = coop_spectral_efficiency(radio);
    const double nse = ncoop_spectral_efficiency(radio);
    const double wb = radio.bandwidth_hz * radio.cluster_count;
    double best_eta = -1.0, best = -1.0;
    for (int i = 0; i <= 10000; ++i) {
      const double eta = i * 1e-4;
      if (nc > 0.0 && eta * wb * cse < cfg.rate_floor_bps * nc) continue;
      if (nn > 0.0 && (1.0 - eta) * wb * nse < cfg.rate_floor_bps * nn) continue;
      const double t = network_throughput(radio, eta, pc, cse, nse);
      if (t > best) {
        best = t;
        best_eta = eta;
      }
    }
    if (er.feasible && best_eta >= 0.0)
      add_check(rows, "eta_star_grid", er.eta, best_eta, 1e-3);
    else
      add_check(rows, "eta_star_feasibility", er.feasible ? 1.0 : 0.0,
                best_eta >= 0.0 ? 1.0 : 0.0, 0.0);
  }

  out << "check_name,analytic,simulated,tolerance,pass\n";
  bool all = true;
  for (const CheckRow& r : rows) {
    out << r.name << "," << g9(r.analytic) << "," << g9(r.simulated) << ","
        << g9(r.tolerance) << "," << (r.pass ? 1 : 0) << "\n";
    all = all && r.pass;
  }
  return all ? kExitOk : kExitValidationFailed;
}

int cmd_sweep(const SystemConfig& cfg, const std::string& sweep_key,
              const std::vector<double>& values, std::ostream& out) {
  static const char* keys[] = {"zipf_beta", "users_per_cluster", "num_users", "alpha",
                               "rate_floor_bps"};
  if (std::find_if(std::begin(keys), std::end(keys), [&](const char* k) {
        return sweep_key == k;
      }) == std::end(keys))
    throw ConfigError("unknown sweep key '" + sweep_key + "'");
  if (values.empty()) throw ConfigError("sweep values must not be empty");

  out << "sweep_key,sweep_value," << kSimulateHeader << "\n";
  int status = kExitOk;
  for (double v : values) {
    SystemConfig c = cfg;
    if (sweep_key == "zipf_beta") {
      c.zipf_beta = v;
    } else if (sweep_key == "alpha") {
      c.alpha = v;
    } else if (sweep_key == "rate_floor_bps") {
      c.rate_floor_bps = v;
    } else {
      const int iv = static_cast<int>(v);
      if (iv != v || iv < 1)
        throw ConfigError(sweep_key + " values must be positive integers");
      if (sweep_key == "users_per_cluster") c.users_per_cluster = iv;
      else c.num_users = iv;
    }
    // Round-trip through the parser so sweep values obey the same invariants
    // as a config file would.
    std::ostringstream text;
    emit_config(c, text);
    c = parse_config_text(text.str(), "<sweep " + sweep_key + "=" + g9(v) + ">");

    const PopularityModel model = popularity_from(c);
    const RadioScenario scenario = scenario_from(c);
    const Operating op = resolve_operating(c, model, scenario);
    if (!op.feasible) status = kExitInfeasible;
    out << sweep_key << "," << g9(v) << ",";
    simulate_row(c, op.users_per_cluster, op.eta, out);
  }
  return status;
}

}  // namespace d2dcoop
