#include "d2dcoop/montecarlo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace d2dcoop {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double sample_exp(std::mt19937_64& rng) {
  return -std::log1p(-uniform01(rng));
}

// Standard normal pair, Box-Muller on the portable uniform01 stream.
void sample_normal2(std::mt19937_64& rng, double& n1, double& n2) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  n1 = r * std::cos(2.0 * M_PI * u2);
  n2 = r * std::sin(2.0 * M_PI * u2);
}

std::complex<double> sample_cn(std::mt19937_64& rng) {
  double n1, n2;
  sample_normal2(rng, n1, n2);
  return {n1 * M_SQRT1_2, n2 * M_SQRT1_2};
}

// rng() in [0, n) without modulo bias worth caring about at these n.
int sample_index(std::mt19937_64& rng, int n) {
  return std::min(static_cast<int>(uniform01(rng) * n), n - 1);
}

double path_gain(const RadioScenario& s, double dx, double dy) {
  const double d = std::max(std::hypot(dx, dy), s.min_distance_m);
  return s.gain_const * std::pow(d, -s.alpha);
}

int resolve_threads(int requested, long drops) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("D2D_THREADS")) t = std::atoi(env);
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  t = std::clamp(t, 1, 64);
  if (drops < t) t = static_cast<int>(std::max(1l, drops));
  return t;
}

struct DropResult {
  double tput = 0.0;        // slot throughput averaged over fading draws
  double coop_tput = 0.0;   // cooperative band only
  double ncoop_tput = 0.0;  // reuse band only
  int nc = 0, nn = 0, nb = 0, na = 0;
  bool mode1 = false;
  int rejected = 0;
  int excluded = 0;
};

// Sum spectral efficiency of the cooperative joint transmission for one
// fading draw. `drs` holds one receiver per participating cluster.
double coop_sum_se(const Drop& drop, const std::vector<int>& drs,
                   const std::vector<int>& dts, const RadioScenario& scenario,
                   CoopSinrMode mode, std::mt19937_64& rng, int& rejected,
                   int& excluded) {
  const int c = static_cast<int>(drs.size());
  if (c == 0) return 0.0;
  const double noise = scenario.noise_w;
  const double power = scenario.tx_power_w;

  if (mode == CoopSinrMode::paper_approx) {
    double sum = 0.0;
    for (int i = 0; i < c; ++i) {
      double sig = 0.0;
      for (int j = 0; j < c; ++j) {
        const double g = path_gain(scenario, drop.x[drs[i]] - drop.x[dts[j]],
                                   drop.y[drs[i]] - drop.y[dts[j]]);
        sig += power * g * sample_exp(rng);
      }
      sum += std::log2(1.0 + sig / (c * noise));
    }
    return sum;
  }

  // Zero-forcing: transmitters jointly invert the channel so every receiver
  // sees the same interference-free gain, scaled to respect per-transmitter
  // power. Near-singular draws are redrawn a few times, then skipped.
  Eigen::MatrixXcd h(c, c);
  for (int attempt = 0; attempt < 10; ++attempt) {
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j) {
        const double g = path_gain(scenario, drop.x[drs[i]] - drop.x[dts[j]],
                                   drop.y[drs[i]] - drop.y[dts[j]]);
        h(i, j) = std::sqrt(g) * sample_cn(rng);
      }
    const Eigen::MatrixXcd hinv = h.partialPivLu().inverse();
    const double cond = h.cwiseAbs().rowwise().sum().maxCoeff() *
                        hinv.cwiseAbs().rowwise().sum().maxCoeff();
    if (!(cond < 1e8)) {
      ++rejected;
      continue;
    }
    const double gain = c * power / hinv.squaredNorm();
    return c * std::log2(1.0 + gain / noise);
  }
  ++excluded;
  return 0.0;
}

// Sum spectral efficiency of simultaneously active direct links sharing one
// band, mutual interference plus noise.
double ncoop_sum_se(const Drop& drop, const std::vector<int>& drs,
                    const std::vector<int>& dts, const RadioScenario& scenario,
                    std::mt19937_64& rng) {
  const int n = static_cast<int>(drs.size());
  if (n == 0) return 0.0;
  std::vector<double> fade(static_cast<size_t>(n) * n);
  for (auto& f : fade) f = sample_exp(rng);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double sig = 0.0, intf = 0.0;
    for (int j = 0; j < n; ++j) {
      const double g = path_gain(scenario, drop.x[drs[i]] - drop.x[dts[j]],
                                 drop.y[drs[i]] - drop.y[dts[j]]);
      const double p = scenario.tx_power_w * g * fade[i * n + j];
      if (j == i)
        sig = p;
      else
        intf += p;
    }
    sum += std::log2(1.0 + sig / (intf + scenario.noise_w));
  }
  return sum;
}

}  // namespace

std::mt19937_64 drop_rng(std::uint64_t seed, long drop_index) {
  const std::uint64_t s =
      splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(drop_index) + 1));
  return std::mt19937_64(s);
}

Drop generate_drop(const ClusterLayout& layout, const PopularityModel& model,
                   const ClusterConfig& cfg, std::mt19937_64& rng,
                   Placement placement) {
  const int B = cfg.cluster_count;
  const int K = cfg.users_per_cluster;
  const int M = cfg.total_users;

  Drop drop;
  drop.clusters = B;
  drop.group_count = model.group_count;
  drop.x.resize(M);
  drop.y.resize(M);
  drop.cluster_of.resize(M);
  drop.members.assign(B, {});
  drop.cache_group.assign(M, -1);
  drop.req_file.resize(M);
  drop.req_group.resize(M);

  if (placement == Placement::per_cell) {
    for (int c = 0; c < B; ++c) {
      const int col = c % layout.grid_x;
      const int row = c / layout.grid_x;
      for (int k = 0; k < K; ++k) {
        const int u = c * K + k;
        drop.x[u] = (col + uniform01(rng)) * layout.cell_width;
        drop.y[u] = (row + uniform01(rng)) * layout.cell_height;
        drop.cluster_of[u] = c;
        drop.members[c].push_back(u);
      }
    }
  } else {
    for (int u = 0; u < M; ++u) {
      drop.x[u] = uniform01(rng) * layout.hotspot_side;
      drop.y[u] = uniform01(rng) * layout.hotspot_side;
      const int col = std::min(static_cast<int>(drop.x[u] / layout.cell_width),
                               layout.grid_x - 1);
      const int row = std::min(static_cast<int>(drop.y[u] / layout.cell_height),
                               layout.grid_y - 1);
      const int c = row * layout.grid_x + col;
      drop.cluster_of[u] = c;
      drop.members[c].push_back(u);
    }
  }
  for (int c = 0; c < B; ++c) {
    const auto& m = drop.members[c];
    for (size_t j = 0; j < m.size(); ++j)
      drop.cache_group[m[j]] = static_cast<int>(j) < model.group_count
                                   ? static_cast<int>(j)
                                   : -1;
  }

  // Requests: inverse-cdf draw over the per-file popularity.
  std::vector<double> cdf(model.catalog_size);
  double acc = 0.0;
  for (int i = 0; i < model.catalog_size; ++i) {
    acc += model.pmf[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  for (int u = 0; u < M; ++u) {
    const double v = uniform01(rng);
    const int file =
        static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), v) - cdf.begin());
    drop.req_file[u] = file + 1;
    drop.req_group[u] = file / model.cache_size;
  }
  return drop;
}

void classify(Drop& drop, int coop_min_clusters) {
  const int B = drop.clusters;
  const int threshold = coop_min_clusters > 0 ? coop_min_clusters : B;

  // hitters[k] = clusters that cache group k and have a requester for it.
  std::vector<int> hitters(drop.group_count, 0);
  std::vector<char> cluster_hit(static_cast<size_t>(B) * drop.group_count, 0);
  for (int u = 0; u < drop.total_users(); ++u) {
    const int g = drop.req_group[u];
    const int c = drop.cluster_of[u];
    if (drop.cacher(c, g) < 0) continue;
    if (!cluster_hit[static_cast<size_t>(c) * drop.group_count + g]) {
      cluster_hit[static_cast<size_t>(c) * drop.group_count + g] = 1;
      ++hitters[g];
    }
  }

  drop.hit_groups.clear();
  for (int g = 0; g < drop.group_count; ++g)
    if (hitters[g] >= threshold) drop.hit_groups.push_back(g);
  drop.mode1 = !drop.hit_groups.empty();

  std::vector<char> is_hit(drop.group_count, 0);
  for (int g : drop.hit_groups) is_hit[g] = 1;

  drop.labels.resize(drop.total_users());
  for (int u = 0; u < drop.total_users(); ++u) {
    const int g = drop.req_group[u];
    if (drop.cacher(drop.cluster_of[u], g) < 0)
      drop.labels[u] = UserClass::cellular;
    else
      drop.labels[u] = is_hit[g] ? UserClass::coop : UserClass::ncoop;
  }
}

SlotSchedule schedule(const Drop& drop, bool cooperation, std::mt19937_64& rng) {
  const int B = drop.clusters;
  SlotSchedule s;
  s.coop_dr.assign(B, -1);
  s.ncoop_dr.assign(B, -1);
  s.ncoop_dt.assign(B, -1);

  if (cooperation && drop.mode1) {
    // Per hit group, clusters with at least one receiver other than the
    // cacher. The group serving the most clusters wins; ties break uniformly.
    std::vector<int> participants(drop.hit_groups.size(), 0);
    int best = 0;
    for (size_t gi = 0; gi < drop.hit_groups.size(); ++gi) {
      const int g = drop.hit_groups[gi];
      for (int c = 0; c < B; ++c) {
        const int dt = drop.cacher(c, g);
        if (dt < 0) continue;
        for (int u : drop.members[c])
          if (u != dt && drop.req_group[u] == g) {
            ++participants[gi];
            break;
          }
      }
      best = std::max(best, participants[gi]);
    }
    if (best > 0) {
      std::vector<int> tied;
      for (size_t gi = 0; gi < drop.hit_groups.size(); ++gi)
        if (participants[gi] == best) tied.push_back(drop.hit_groups[gi]);
      s.coop_group = tied[sample_index(rng, static_cast<int>(tied.size()))];
      for (int c = 0; c < B; ++c) {
        const int dt = drop.cacher(c, s.coop_group);
        if (dt < 0) continue;
        std::vector<int> pool;
        for (int u : drop.members[c])
          if (u != dt && drop.req_group[u] == s.coop_group) pool.push_back(u);
        if (!pool.empty())
          s.coop_dr[c] = pool[sample_index(rng, static_cast<int>(pool.size()))];
      }
    }
  }

  for (int c = 0; c < B; ++c) {
    std::vector<int> pool;
    for (int u : drop.members[c]) {
      if (drop.labels[u] == UserClass::cellular) continue;
      if (cooperation && drop.labels[u] != UserClass::ncoop) continue;
      if (drop.cacher(c, drop.req_group[u]) == u) continue;  // own cache
      pool.push_back(u);
    }
    if (pool.empty()) continue;
    const int dr = pool[sample_index(rng, static_cast<int>(pool.size()))];
    s.ncoop_dr[c] = dr;
    s.ncoop_dt[c] = drop.cacher(c, drop.req_group[dr]);
  }
  return s;
}

namespace {

DropResult simulate_drop(long index, const ClusterLayout& layout,
                         const PopularityModel& model, const ClusterConfig& cfg,
                         const RadioScenario& scenario, const SimParams& p) {
  std::mt19937_64 rng = drop_rng(p.seed, index);
  Drop drop = generate_drop(layout, model, cfg, rng, p.placement);
  classify(drop, p.coop_min_clusters);

  DropResult r;
  r.mode1 = drop.mode1;
  for (UserClass lbl : drop.labels) {
    if (lbl == UserClass::coop) ++r.nc;
    else if (lbl == UserClass::ncoop) ++r.nn;
    else ++r.nb;
  }

  const bool coop_on = p.cooperation && p.eta > 0.0;
  const SlotSchedule sched = schedule(drop, coop_on, rng);

  std::vector<int> coop_drs, coop_dts, nd_drs, nd_dts;
  for (int c = 0; c < drop.clusters; ++c) {
    if (sched.coop_dr[c] >= 0) {
      coop_drs.push_back(sched.coop_dr[c]);
      coop_dts.push_back(drop.cacher(c, sched.coop_group));
    }
    if (sched.ncoop_dr[c] >= 0) {
      nd_drs.push_back(sched.ncoop_dr[c]);
      nd_dts.push_back(sched.ncoop_dt[c]);
    }
  }
  // Active cooperative receivers: all B clusters in Mode 1 under full
  // cooperation; under partial cooperation, the clusters hitting the group
  // actually chosen for the slot.
  if (drop.mode1) {
    if (p.coop_min_clusters <= 0) {
      r.na = drop.clusters;
    } else if (sched.coop_group >= 0) {
      for (int c = 0; c < drop.clusters; ++c) {
        const int dt = drop.cacher(c, sched.coop_group);
        if (dt < 0) continue;
        for (int u : drop.members[c])
          if (drop.req_group[u] == sched.coop_group) {
            ++r.na;
            break;
          }
      }
    }
  }

  const double w = scenario.bandwidth_hz;
  for (int f = 0; f < p.fading_draws; ++f) {
    const double cse = coop_sum_se(drop, coop_drs, coop_dts, scenario, p.coop_mode,
                                   rng, r.rejected, r.excluded);
    const double nse = ncoop_sum_se(drop, nd_drs, nd_dts, scenario, rng);
    // The eta split only exists while the network operates in Mode 1; in
    // Mode 0 the direct links get the whole band.
    double ct = 0.0, nt = 0.0;
    if (coop_on && drop.mode1) {
      ct = w * p.eta * cse;
      nt = w * (1.0 - p.eta) * nse;
    } else {
      nt = w * nse;
    }
    r.coop_tput += ct;
    r.ncoop_tput += nt;
    r.tput += ct + nt;
  }
  const double inv = 1.0 / p.fading_draws;
  r.tput *= inv;
  r.coop_tput *= inv;
  r.ncoop_tput *= inv;
  return r;
}

}  // namespace

SimReport run(const PopularityModel& model, const ClusterConfig& cfg,
              const RadioScenario& scenario, const SimParams& params) {
  if (params.drops < 1) throw std::invalid_argument("drops must be >= 1");
  if (params.fading_draws < 1)
    throw std::invalid_argument("fading_draws must be >= 1");
  if (params.eta < 0.0 || params.eta > 1.0)
    throw std::invalid_argument("eta must be in [0, 1]");

  const ClusterLayout layout = build_layout(scenario.hotspot_side_m, cfg.cluster_count);
  const long n = params.drops;
  std::vector<DropResult> results(n);

  const int threads = resolve_threads(params.threads, n);
  if (threads == 1) {
    for (long d = 0; d < n; ++d)
      results[d] = simulate_drop(d, layout, model, cfg, scenario, params);
  } else {
    std::atomic<long> next{0};
    auto worker = [&] {
      for (long d = next.fetch_add(1); d < n; d = next.fetch_add(1))
        results[d] = simulate_drop(d, layout, model, cfg, scenario, params);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SimReport rep;
  rep.drops = n;

  // Fixed-order reduction so the report is identical for any thread count.
  double sum_t = 0.0, sum_ct = 0.0, sum_nt = 0.0;
  double sum_ct_m1 = 0.0;
  double sum_nc = 0.0, sum_nn = 0.0, sum_nb = 0.0, sum_na = 0.0, sum_pc = 0.0;
  double ss_nc = 0.0, ss_nn = 0.0, ss_nb = 0.0, ss_na = 0.0, ss_pc = 0.0;
  double sum_cr = 0.0, sum_nr = 0.0;
  long m1 = 0, nc_pos = 0, nn_pos = 0;
  for (const DropResult& r : results) {
    sum_t += r.tput;
    sum_ct += r.coop_tput;
    sum_nt += r.ncoop_tput;
    sum_nc += r.nc;
    sum_nn += r.nn;
    sum_nb += r.nb;
    sum_na += r.na;
    sum_pc += r.mode1 ? 1.0 : 0.0;
    ss_nc += static_cast<double>(r.nc) * r.nc;
    ss_nn += static_cast<double>(r.nn) * r.nn;
    ss_nb += static_cast<double>(r.nb) * r.nb;
    ss_na += static_cast<double>(r.na) * r.na;
    ss_pc += r.mode1 ? 1.0 : 0.0;
    if (r.mode1) {
      ++m1;
      sum_ct_m1 += r.coop_tput;
    }
    if (r.nc > 0) {
      ++nc_pos;
      sum_cr += r.coop_tput / r.nc;
    }
    if (r.nn > 0) {
      ++nn_pos;
      sum_nr += r.ncoop_tput / r.nn;
    }
    rep.rejected_fading_draws += r.rejected;
    rep.excluded_coop_slots += r.excluded;
  }
  const double dn = static_cast<double>(n);
  rep.mean_throughput_bps = sum_t / dn;
  rep.pc = sum_pc / dn;
  rep.nc = sum_nc / dn;
  rep.nn = sum_nn / dn;
  rep.nb = sum_nb / dn;
  rep.na = sum_na / dn;
  auto se = [dn](double sum, double ss) {
    const double var = std::max(0.0, (ss - sum * sum / dn) / std::max(1.0, dn - 1.0));
    return std::sqrt(var / dn);
  };
  rep.pc_se = se(sum_pc, ss_pc);
  rep.nc_se = se(sum_nc, ss_nc);
  rep.nn_se = se(sum_nn, ss_nn);
  rep.nb_se = se(sum_nb, ss_nb);
  rep.na_se = se(sum_na, ss_na);

  rep.coop_user_rate_bps = sum_nc > 0.0 ? sum_ct / sum_nc : 0.0;
  rep.ncoop_user_rate_bps = sum_nn > 0.0 ? sum_nt / sum_nn : 0.0;
  rep.coop_user_rate_mode1_bps = nc_pos > 0 ? sum_cr / nc_pos : 0.0;
  rep.ncoop_user_rate_mode1_bps = nn_pos > 0 ? sum_nr / nn_pos : 0.0;

  // Batch-means confidence interval for the mean throughput.
  const int nb = static_cast<int>(std::min<long>(30, n));
  rep.batches = nb;
  if (nb >= 2) {
    std::vector<double> means(nb, 0.0);
    std::vector<long> counts(nb, 0);
    for (long d = 0; d < n; ++d) {
      const int b = static_cast<int>(d * nb / n);
      means[b] += results[d].tput;
      ++counts[b];
    }
    double bm = 0.0;
    for (int b = 0; b < nb; ++b) {
      means[b] /= static_cast<double>(counts[b]);
      bm += means[b];
    }
    bm /= nb;
    double var = 0.0;
    for (int b = 0; b < nb; ++b) var += (means[b] - bm) * (means[b] - bm);
    var /= (nb - 1);
    rep.throughput_ci_bps = 1.96 * std::sqrt(var / nb);
  }
  return rep;
}

SimReport run_baseline_tdma(const PopularityModel& model, const ClusterConfig& cfg,
                            const RadioScenario& scenario, const SimParams& params) {
  if (params.drops < 1) throw std::invalid_argument("drops must be >= 1");
  const ClusterLayout layout = build_layout(scenario.hotspot_side_m, cfg.cluster_count);
  const int B = cfg.cluster_count;

  // 2x2 reuse coloring; only colors that actually occur share the cycle, so a
  // single-cluster layout degenerates to always-on.
  std::vector<int> color(B);
  std::vector<char> present(4, 0);
  for (int c = 0; c < B; ++c) {
    color[c] = (c % layout.grid_x) % 2 + 2 * ((c / layout.grid_x) % 2);
    present[color[c]] = 1;
  }
  std::vector<int> colors;
  for (int v = 0; v < 4; ++v)
    if (present[v]) colors.push_back(v);

  const long n = params.drops;
  std::vector<double> tputs(n, 0.0);

  auto one_drop = [&](long d) {
    std::mt19937_64 rng = drop_rng(params.seed, d);
    Drop drop = generate_drop(layout, model, cfg, rng, params.placement);
    classify(drop, params.coop_min_clusters);

    // One D2D link per cluster, chosen once per drop.
    std::vector<int> drs(B, -1), dts(B, -1);
    for (int c = 0; c < B; ++c) {
      std::vector<int> pool;
      for (int u : drop.members[c]) {
        if (drop.labels[u] == UserClass::cellular) continue;
        if (drop.cacher(c, drop.req_group[u]) == u) continue;
        pool.push_back(u);
      }
      if (pool.empty()) continue;
      drs[c] = pool[sample_index(rng, static_cast<int>(pool.size()))];
      dts[c] = drop.cacher(c, drop.req_group[drs[c]]);
    }

    double acc = 0.0;
    for (int f = 0; f < params.fading_draws; ++f) {
      double cycle = 0.0;
      for (int v : colors) {
        std::vector<int> adrs, adts;
        for (int c = 0; c < B; ++c)
          if (color[c] == v && drs[c] >= 0) {
            adrs.push_back(drs[c]);
            adts.push_back(dts[c]);
          }
        cycle += scenario.bandwidth_hz * ncoop_sum_se(drop, adrs, adts, scenario, rng);
      }
      acc += cycle / static_cast<double>(colors.size());
    }
    tputs[d] = acc / params.fading_draws;
  };

  const int threads = resolve_threads(params.threads, n);
  if (threads == 1) {
    for (long d = 0; d < n; ++d) one_drop(d);
  } else {
    std::atomic<long> next{0};
    auto worker = [&] {
      for (long d = next.fetch_add(1); d < n; d = next.fetch_add(1)) one_drop(d);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SimReport rep;
  rep.drops = n;
  double sum = 0.0;
  for (double t : tputs) sum += t;
  rep.mean_throughput_bps = sum / static_cast<double>(n);
  const int nb = static_cast<int>(std::min<long>(30, n));
  rep.batches = nb;
  if (nb >= 2) {
    std::vector<double> means(nb, 0.0);
    std::vector<long> counts(nb, 0);
    for (long d = 0; d < n; ++d) {
      const int b = static_cast<int>(d * nb / n);
      means[b] += tputs[d];
      ++counts[b];
    }
    double bm = 0.0;
    for (int b = 0; b < nb; ++b) {
      means[b] /= static_cast<double>(counts[b]);
      bm += means[b];
    }
    bm /= nb;
    double var = 0.0;
    for (int b = 0; b < nb; ++b) var += (means[b] - bm) * (means[b] - bm);
    var /= (nb - 1);
    rep.throughput_ci_bps = 1.96 * std::sqrt(var / nb);
  }
  return rep;
}

SimReport run_partial_coop(const PopularityModel& model, const ClusterConfig& cfg,
                           const RadioScenario& scenario, const SimParams& params,
                           int coop_min_clusters) {
  if (coop_min_clusters < 1 || coop_min_clusters > cfg.cluster_count)
    throw std::invalid_argument("coop_min_clusters must be in [1, B]");
  SimParams p = params;
  p.coop_min_clusters = coop_min_clusters == cfg.cluster_count ? 0 : coop_min_clusters;
  return run(model, cfg, scenario, p);
}

CountStats sample_request_counts(const PopularityModel& model, const ClusterConfig& cfg,
                                 long draws, std::uint64_t seed,
                                 int coop_min_clusters) {
  if (draws < 1) throw std::invalid_argument("draws must be >= 1");
  const int B = cfg.cluster_count;
  const int K = cfg.users_per_cluster;
  const int K0 = model.group_count;
  const int cached = std::min(K, K0);  // groups held somewhere in each cluster
  const int threshold = coop_min_clusters > 0 ? coop_min_clusters : B;

  std::vector<double> cdf(K0);
  double acc = 0.0;
  for (int g = 0; g < K0; ++g) {
    acc += model.group_probs[g];
    cdf[g] = acc;
  }
  cdf.back() = 1.0;

  double s_pc = 0, s_na = 0, s_nc = 0, s_nn = 0, s_nb = 0;
  double q_pc = 0, q_na = 0, q_nc = 0, q_nn = 0, q_nb = 0;
  std::vector<int> count(static_cast<size_t>(B) * K0);
  for (long d = 0; d < draws; ++d) {
    std::mt19937_64 rng = drop_rng(seed, d);
    std::fill(count.begin(), count.end(), 0);
    int nb = 0;
    for (int c = 0; c < B; ++c)
      for (int k = 0; k < K; ++k) {
        const double v = uniform01(rng);
        const int g = static_cast<int>(
            std::lower_bound(cdf.begin(), cdf.end(), v) - cdf.begin());
        ++count[static_cast<size_t>(c) * K0 + g];
        if (g >= cached) ++nb;
      }
    int nc = 0, na = 0;
    for (int g = 0; g < cached; ++g) {
      int hitters = 0, total = 0;
      for (int c = 0; c < B; ++c) {
        const int v = count[static_cast<size_t>(c) * K0 + g];
        if (v > 0) {
          ++hitters;
          total += v;
        }
      }
      if (hitters >= threshold) {
        nc += total;
        na = std::max(na, hitters);
      }
    }
    const int nn = B * K - nc - nb;
    const double pc = nc > 0 ? 1.0 : 0.0;
    s_pc += pc; q_pc += pc;
    s_na += na; q_na += static_cast<double>(na) * na;
    s_nc += nc; q_nc += static_cast<double>(nc) * nc;
    s_nn += nn; q_nn += static_cast<double>(nn) * nn;
    s_nb += nb; q_nb += static_cast<double>(nb) * nb;
  }
  const double dn = static_cast<double>(draws);
  auto se = [dn](double sum, double ss) {
    const double var = std::max(0.0, (ss - sum * sum / dn) / std::max(1.0, dn - 1.0));
    return std::sqrt(var / dn);
  };
  CountStats st;
  st.pc = s_pc / dn; st.pc_se = se(s_pc, q_pc);
  st.na = s_na / dn; st.na_se = se(s_na, q_na);
  st.nc = s_nc / dn; st.nc_se = se(s_nc, q_nc);
  st.nn = s_nn / dn; st.nn_se = se(s_nn, q_nn);
  st.nb = s_nb / dn; st.nb_se = se(s_nb, q_nb);
  return st;
}

namespace {

double config_gain(const RadioConfig& r, double dx, double dy) {
  const double d = std::max(std::hypot(dx, dy), r.min_distance_m);
  return r.gain_const * std::pow(d, -r.alpha);
}

}  // namespace

double mc_ncoop_se(const RadioConfig& radio, long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  // One simultaneously active direct link per cell of the full grid; the mean
  // runs over every receiver, matching what the drop simulator computes.
  const int b = radio.cluster_count;
  const ClusterLayout layout = build_layout(radio.cell_side_m * std::sqrt(b), b);
  std::mt19937_64 rng = drop_rng(seed, 0);
  std::vector<double> rx(b), ry(b), tx(b), ty(b);
  double sum = 0.0;
  for (long s = 0; s < samples; ++s) {
    for (int c = 0; c < b; ++c) {
      const int col = c % layout.grid_x;
      const int row = c / layout.grid_x;
      rx[c] = (col + uniform01(rng)) * layout.cell_width;
      ry[c] = (row + uniform01(rng)) * layout.cell_height;
      tx[c] = (col + uniform01(rng)) * layout.cell_width;
      ty[c] = (row + uniform01(rng)) * layout.cell_height;
    }
    double acc = 0.0;
    for (int i = 0; i < b; ++i) {
      double sig = 0.0, intf = 0.0;
      for (int j = 0; j < b; ++j) {
        const double p = radio.tx_power_w *
                         config_gain(radio, rx[i] - tx[j], ry[i] - ty[j]) *
                         sample_exp(rng);
        if (j == i)
          sig = p;
        else
          intf += p;
      }
      acc += std::log2(1.0 + sig / (intf + radio.noise_w));
    }
    sum += acc / b;
  }
  return sum / static_cast<double>(samples);
}

double mc_coop_se(const RadioConfig& radio, int clusters, CoopSinrMode mode,
                  long samples, std::uint64_t seed, long* rejected) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (clusters < 1) throw std::invalid_argument("clusters must be >= 1");
  const ClusterLayout layout =
      build_layout(radio.cell_side_m * std::sqrt(clusters), clusters);
  std::mt19937_64 rng = drop_rng(seed, 0);
  long rej = 0;
  const int b = clusters;
  std::vector<double> rx(b), ry(b), tx(b), ty(b);
  Eigen::MatrixXcd h(b, b);
  double sum = 0.0;
  long kept = 0;
  for (long s = 0; s < samples; ++s) {
    for (int c = 0; c < b; ++c) {
      const int col = c % layout.grid_x;
      const int row = c / layout.grid_x;
      rx[c] = (col + uniform01(rng)) * layout.cell_width;
      ry[c] = (row + uniform01(rng)) * layout.cell_height;
      tx[c] = (col + uniform01(rng)) * layout.cell_width;
      ty[c] = (row + uniform01(rng)) * layout.cell_height;
    }
    if (mode == CoopSinrMode::paper_approx) {
      double acc = 0.0;
      for (int i = 0; i < b; ++i) {
        double sig = 0.0;
        for (int j = 0; j < b; ++j)
          sig += radio.tx_power_w * config_gain(radio, rx[i] - tx[j], ry[i] - ty[j]) *
                 sample_exp(rng);
        acc += std::log2(1.0 + sig / (b * radio.noise_w));
      }
      sum += acc / b;
      ++kept;
      continue;
    }
    bool ok = false;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j)
          h(i, j) = std::sqrt(config_gain(radio, rx[i] - tx[j], ry[i] - ty[j])) *
                    sample_cn(rng);
      const Eigen::MatrixXcd hinv = h.partialPivLu().inverse();
      const double cond = h.cwiseAbs().rowwise().sum().maxCoeff() *
                          hinv.cwiseAbs().rowwise().sum().maxCoeff();
      if (!(cond < 1e8)) {
        ++rej;
        continue;
      }
      const double gain = b * radio.tx_power_w / hinv.squaredNorm();
      sum += std::log2(1.0 + gain / radio.noise_w);
      ++kept;
      ok = true;
    }
  }
  if (rejected) *rejected = rej;
  return kept > 0 ? sum / static_cast<double>(kept) : 0.0;
}

}  // namespace d2dcoop
