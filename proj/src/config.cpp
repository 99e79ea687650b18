#include "d2dcoop/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace d2dcoop {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, const std::string& path, int line) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) fail(path, line, "trailing characters after number '" + v + "'");
    if (!std::isfinite(d)) fail(path, line, "value must be finite");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(path, line, "expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& v, const std::string& path, int line) {
  try {
    size_t used = 0;
    const long d = std::stol(v, &used);
    if (used != v.size()) fail(path, line, "trailing characters after integer '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(path, line, "expected an integer, got '" + v + "'");
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SystemConfig parse_config_text(const std::string& text, const std::string& path) {
  SystemConfig cfg;
  std::map<std::string, int> seen;  // key -> line
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(path, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) fail(path, line, "expected 'key = value'");
    if (!seen.emplace(key, line).second)
      fail(path, line, "duplicate key '" + key + "' (first on line " +
                           std::to_string(seen[key]) + ")");

    if (key == "side_length_m") {
      cfg.side_length_m = to_double(val, path, line);
      if (cfg.side_length_m <= 0.0) fail(path, line, "side_length_m must be > 0");
    } else if (key == "num_users") {
      cfg.num_users = static_cast<int>(to_long(val, path, line));
      if (cfg.num_users < 1) fail(path, line, "num_users must be >= 1");
    } else if (key == "users_per_cluster") {
      const long k = to_long(val, path, line);
      if (k < 1) fail(path, line, "users_per_cluster must be >= 1");
      cfg.users_per_cluster = static_cast<int>(k);
    } else if (key == "bandwidth_hz") {
      cfg.bandwidth_hz = to_double(val, path, line);
      if (cfg.bandwidth_hz <= 0.0) fail(path, line, "bandwidth_hz must be > 0");
    } else if (key == "tx_power_dbm") {
      cfg.tx_power_dbm = to_double(val, path, line);
    } else if (key == "noise_dbm") {
      cfg.noise_dbm = to_double(val, path, line);
    } else if (key == "pathloss") {
      if (val == "powerlaw") cfg.pathloss = PathLoss::powerlaw;
      else if (val == "logdistance") cfg.pathloss = PathLoss::logdistance;
      else fail(path, line, "pathloss must be powerlaw or logdistance");
    } else if (key == "alpha") {
      cfg.alpha = to_double(val, path, line);
      if (cfg.alpha <= 0.0) fail(path, line, "alpha must be > 0");
    } else if (key == "min_distance_m") {
      cfg.min_distance_m = to_double(val, path, line);
      if (cfg.min_distance_m <= 0.0) fail(path, line, "min_distance_m must be > 0");
    } else if (key == "catalog_size") {
      cfg.catalog_size = static_cast<int>(to_long(val, path, line));
      if (cfg.catalog_size < 1) fail(path, line, "catalog_size must be >= 1");
    } else if (key == "cache_size") {
      cfg.cache_size = static_cast<int>(to_long(val, path, line));
      if (cfg.cache_size < 1) fail(path, line, "cache_size must be >= 1");
    } else if (key == "zipf_beta") {
      cfg.zipf_beta = to_double(val, path, line);
      if (cfg.zipf_beta < 0.0) fail(path, line, "zipf_beta must be >= 0");
    } else if (key == "rate_floor_bps") {
      cfg.rate_floor_bps = to_double(val, path, line);
      if (cfg.rate_floor_bps < 0.0) fail(path, line, "rate_floor_bps must be >= 0");
    } else if (key == "eta") {
      const double e = to_double(val, path, line);
      if (e < 0.0 || e > 1.0) fail(path, line, "eta must be in [0, 1]");
      cfg.eta = e;
    } else if (key == "drops") {
      cfg.drops = to_long(val, path, line);
      if (cfg.drops < 1) fail(path, line, "drops must be >= 1");
    } else if (key == "fading_draws") {
      cfg.fading_draws = static_cast<int>(to_long(val, path, line));
      if (cfg.fading_draws < 1) fail(path, line, "fading_draws must be >= 1");
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_long(val, path, line));
    } else if (key == "coop_min_clusters") {
      cfg.coop_min_clusters = static_cast<int>(to_long(val, path, line));
      if (cfg.coop_min_clusters < 0) fail(path, line, "coop_min_clusters must be >= 0");
    } else if (key == "coop_sinr_mode") {
      if (val == "zf-exact") cfg.coop_sinr_mode = CoopSinrMode::zf_exact;
      else if (val == "paper-approx") cfg.coop_sinr_mode = CoopSinrMode::paper_approx;
      else fail(path, line, "coop_sinr_mode must be zf-exact or paper-approx");
    } else {
      fail(path, line, "unknown key '" + key + "'");
    }
  }

  // Cross-field invariants, reported against the line that set the key.
  auto at = [&](const std::string& key) {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  if (cfg.catalog_size % cfg.cache_size != 0)
    fail(path, at("cache_size"), "cache_size must divide catalog_size");
  const int k0 = cfg.catalog_size / cfg.cache_size;
  if (cfg.users_per_cluster) {
    if (cfg.num_users % *cfg.users_per_cluster != 0)
      fail(path, at("users_per_cluster"), "users_per_cluster must divide num_users");
    if (*cfg.users_per_cluster > k0)
      fail(path, at("users_per_cluster"),
           "users_per_cluster exceeds the group count " + std::to_string(k0));
    if (cfg.coop_min_clusters > cfg.num_users / *cfg.users_per_cluster)
      fail(path, at("coop_min_clusters"),
           "coop_min_clusters exceeds the cluster count");
  }
  return cfg;
}

SystemConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void emit_config(const SystemConfig& cfg, std::ostream& out) {
  out << "side_length_m = " << fmt(cfg.side_length_m) << "\n";
  out << "num_users = " << cfg.num_users << "\n";
  if (cfg.users_per_cluster)
    out << "users_per_cluster = " << *cfg.users_per_cluster << "\n";
  out << "bandwidth_hz = " << fmt(cfg.bandwidth_hz) << "\n";
  out << "tx_power_dbm = " << fmt(cfg.tx_power_dbm) << "\n";
  out << "noise_dbm = " << fmt(cfg.noise_dbm) << "\n";
  out << "pathloss = "
      << (cfg.pathloss == PathLoss::powerlaw ? "powerlaw" : "logdistance") << "\n";
  out << "alpha = " << fmt(cfg.alpha) << "\n";
  out << "min_distance_m = " << fmt(cfg.min_distance_m) << "\n";
  out << "catalog_size = " << cfg.catalog_size << "\n";
  out << "cache_size = " << cfg.cache_size << "\n";
  out << "zipf_beta = " << fmt(cfg.zipf_beta) << "\n";
  out << "rate_floor_bps = " << fmt(cfg.rate_floor_bps) << "\n";
  if (cfg.eta) out << "eta = " << fmt(*cfg.eta) << "\n";
  out << "drops = " << cfg.drops << "\n";
  out << "fading_draws = " << cfg.fading_draws << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "coop_min_clusters = " << cfg.coop_min_clusters << "\n";
  out << "coop_sinr_mode = "
      << (cfg.coop_sinr_mode == CoopSinrMode::zf_exact ? "zf-exact" : "paper-approx")
      << "\n";
}

PopularityModel popularity_from(const SystemConfig& cfg) {
  return PopularityModel::make(cfg.catalog_size, cfg.cache_size, cfg.zipf_beta);
}

RadioScenario scenario_from(const SystemConfig& cfg) {
  return RadioScenario::make(cfg.side_length_m, cfg.tx_power_dbm, cfg.noise_dbm,
                             cfg.bandwidth_hz, cfg.pathloss, cfg.alpha,
                             cfg.min_distance_m);
}

}  // namespace d2dcoop
